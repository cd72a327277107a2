"""GR(1) game: system winning states with optional heuristics.

The solver follows the classic three-nested fixed point

    W = nu Z. AND_j mu Y. OR_i nu X.
            (J^s_j & cpre(Z)) | cpre(Y) | (!J^e_i & cpre(X))

with ``Z`` updated after every justice guarantee and the inner ``X``
iteration started from ``Z``.  Three switches alter the iteration order
without changing the result:

``efp``
    stop as soon as ``Z`` after justice ``j`` equals the value it had
    after the same justice one sweep earlier.
``eun``
    after each justice, stop if some initial input is already lost.
``fpr``
    start each ``X`` iteration from the converged cell of the previous
    sweep (same ``j``, ``i`` and ``Y`` index) intersected with ``Z``.
"""

from __future__ import annotations

import enum
from dataclasses import asdict, dataclass, field

from .game import GameStructure, check_initial_win_sys, cpre_sys
from .symcore import SymbolicSet


@dataclass(frozen=True)
class SolverOptions:
    efp: bool = False
    eun: bool = False
    fpr: bool = False

    @classmethod
    def all_combinations(cls) -> list["SolverOptions"]:
        return [cls(bool(k & 1), bool(k & 2), bool(k & 4)) for k in range(8)]

    @property
    def label(self) -> str:
        on = [n for n in ("efp", "eun", "fpr") if getattr(self, n)]
        return "+".join(on) if on else "base"


class StopReason(str, enum.Enum):
    FIXPOINT = "FIXPOINT"
    EARLY_FIXPOINT = "EARLY_FIXPOINT"
    EARLY_UNREAL = "EARLY_UNREAL"


class SeedKind(str, enum.Enum):
    NONE = "NONE"
    REUSE_Z = "REUSE_Z"
    SEED_Y = "SEED_Y"
    REUSE_PREFIX = "REUSE_PREFIX"
    SEED_Z = "SEED_Z"


@dataclass
class Seed:
    """Information carried over from an earlier run on a related game.

    ``z`` is the reused winning set (REUSE_Z), the initial outer value
    (SEED_Z) or the initial least fixed point (SEED_Y).  ``exact`` marks a
    reused winning set that came from a run to completion.  ``prefix``
    holds first-sweep snapshots to replay for REUSE_PREFIX.
    """

    kind: SeedKind = SeedKind.NONE
    z: SymbolicSet | None = None
    exact: bool = False
    prefix: list = field(default_factory=list)


@dataclass
class SolveStats:
    z_sweeps: int = 0
    js_body_executions: int = 0
    y_iterations: int = 0
    x_iterations: int = 0
    cpre_calls: int = 0
    stop_reason: StopReason = StopReason.FIXPOINT
    seed: SeedKind = SeedKind.NONE
    # (sweep, j, i, cy, iterations) for every inner fixed point
    x_trace: list = field(default_factory=list)

    def to_dict(self, trace: bool = False) -> dict:
        d = asdict(self)
        d["stop_reason"] = self.stop_reason.value
        d["seed"] = self.seed.value
        if not trace:
            del d["x_trace"]
        return d

    def x_iterations_at(self, sweep: int) -> list[int]:
        return [t[4] for t in self.x_trace if t[0] == sweep]


@dataclass
class BodySnapshot:
    """State after one justice body of the first sweep."""

    z: SymbolicSet
    y_layers: list
    x_cells: dict  # (i, cy) -> set


@dataclass
class GR1Memory:
    Z_by_j: list
    Y_layers: list
    X_cells: dict = field(default_factory=dict)  # (j, i, cy) -> set
    prev_X_cells: dict = field(default_factory=dict)
    first_sweep: list = field(default_factory=list)
    complete: bool = False
    seeded: SeedKind = SeedKind.NONE

    def last_cy(self, cells: dict, j: int, i: int) -> int | None:
        ks = [k[2] for k in cells if k[0] == j and k[1] == i]
        return max(ks) if ks else None


@dataclass
class GR1Result:
    winning: SymbolicSet
    realizable: bool
    memory: GR1Memory
    stats: SolveStats


def recycle_seed(mem: GR1Memory, j: int, i: int, cy: int, Z: SymbolicSet) -> SymbolicSet:
    """Start value for ``X[j][i][cy]`` taken from the previous sweep."""
    cell = mem.prev_X_cells.get((j, i, cy))
    if cell is None:
        last = mem.last_cy(mem.prev_X_cells, j, i)
        if last is None:
            return Z
        cell = mem.prev_X_cells[(j, i, min(cy, last))]
    return cell & Z


def solve_gr1(g: GameStructure, opts: SolverOptions = SolverOptions(),
              seed: Seed | None = None) -> GR1Result:
    seed = seed or Seed()
    mgr = g.mgr
    m, n = g.m, g.n
    stats = SolveStats(seed=seed.kind)
    mem = GR1Memory(Z_by_j=[None] * m, Y_layers=[[] for _ in range(m)], seeded=seed.kind)

    def cpre(R):
        stats.cpre_calls += 1
        return cpre_sys(g, R)

    def done(Z, reason, realizable=None):
        stats.stop_reason = reason
        mem.complete = reason != StopReason.EARLY_UNREAL
        if realizable is None:
            realizable = check_initial_win_sys(g, Z)
        return GR1Result(Z, realizable, mem, stats)

    if seed.kind == SeedKind.REUSE_Z:
        ok = check_initial_win_sys(g, seed.z)
        if not ok or seed.exact:
            stats.stop_reason = StopReason.EARLY_UNREAL if not ok else StopReason.FIXPOINT
            return GR1Result(seed.z, ok, mem, stats)
    Z = mgr.true
    if seed.kind == SeedKind.SEED_Z:
        Z = seed.z
        if not check_initial_win_sys(g, Z):
            stats.stop_reason = StopReason.EARLY_UNREAL
            return GR1Result(Z, False, mem, stats)
    y_init = seed.z if seed.kind == SeedKind.SEED_Y else mgr.false
    prefix = seed.prefix if seed.kind == SeedKind.REUSE_PREFIX else []

    sweep = 0
    while True:
        sweep += 1
        stats.z_sweeps += 1
        z_start = Z
        if opts.fpr:
            mem.prev_X_cells = dict(mem.X_cells)
        for j in range(m):
            if sweep == 1 and j < len(prefix):
                snap = prefix[j]
                Z = snap.z
                mem.Z_by_j[j] = Z
                mem.Y_layers[j] = list(snap.y_layers)
                for (i, cy), X in snap.x_cells.items():
                    mem.X_cells[(j, i, cy)] = X
                mem.first_sweep.append(snap)
                if opts.eun and not check_initial_win_sys(g, Z):
                    return done(Z, StopReason.EARLY_UNREAL, False)
                continue
            stats.js_body_executions += 1
            for key in [k for k in mem.X_cells if k[0] == j]:
                del mem.X_cells[key]
            jz = g.J_s[j] & cpre(Z)
            Y = y_init
            cy = 0
            layers = []
            while True:
                start = jz | cpre(Y)
                newY = mgr.false
                for i in range(n):
                    if opts.fpr and sweep > 1:
                        X = recycle_seed(mem, j, i, cy, Z)
                    else:
                        X = Z
                    count = 0
                    while True:
                        count += 1
                        nX = start | (~g.J_e[i] & cpre(X))
                        if nX == X:
                            break
                        X = nX
                    stats.x_iterations += count
                    stats.x_trace.append((sweep, j, i, cy, count))
                    mem.X_cells[(j, i, cy)] = X
                    newY = newY | X
                stats.y_iterations += 1
                if newY == Y:
                    break
                Y = newY
                layers.append(Y)
                cy += 1
            previous = mem.Z_by_j[j]
            Z = Y
            mem.Z_by_j[j] = Z
            mem.Y_layers[j] = layers
            if sweep == 1:
                mem.first_sweep.append(BodySnapshot(
                    Z, list(layers),
                    {(k[1], k[2]): v for k, v in mem.X_cells.items() if k[0] == j}))
            if opts.eun and not check_initial_win_sys(g, Z):
                return done(Z, StopReason.EARLY_UNREAL, False)
            if opts.efp and sweep > 1 and Z == previous:
                return done(Z, StopReason.EARLY_FIXPOINT)
        if Z == z_start:
            return done(Z, StopReason.FIXPOINT)
