"""Rabin(1) game: environment winning states.

Dual of the GR(1) game,

    W = mu Z. OR_j nu Y. AND_i mu X.
            (!J^s_j | cpre_env(Z)) & cpre_env(Y) & (J^e_i | cpre_env(X))

evaluated with the running union of ``Z`` updated after every justice
guarantee.  The heuristics mirror the GR(1) solver: ``efp`` compares the
running union after justice ``j`` with its value one sweep earlier,
``eun`` stops once the environment wins from some initial input, and
``fpr`` starts each ``X`` iteration from the converged cell of the
previous sweep.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .game import GameStructure, check_initial_win_env, cpre_env
from .gr1solve import Seed, SeedKind, SolverOptions, SolveStats, StopReason
from .symcore import SymbolicSet


@dataclass
class RabinBodySnapshot:
    z: SymbolicSet        # running union after the body
    y: SymbolicSet        # value stored in Z_cells
    x_cells: dict         # (i, cx) -> set
    recycle: dict         # (i, cy) -> (set, rank cells)


@dataclass
class RabinMemory:
    Z_cells: list = field(default_factory=list)       # Y per cz
    Z_before: list = field(default_factory=list)      # running union before cz
    cz_justice: list = field(default_factory=list)    # j of each cz
    X_cells: dict = field(default_factory=dict)       # (cz, i, cx) -> set
    recycle_cache: dict = field(default_factory=dict)  # (j, i, cy) -> set
    recycle_ranks: dict = field(default_factory=dict)  # (j, i, cy) -> cells
    prev_recycle: dict = field(default_factory=dict)
    prev_ranks: dict = field(default_factory=dict)
    Z_after_j: list = field(default_factory=list)     # running union after j, last sweep
    first_sweep: list = field(default_factory=list)
    complete: bool = False
    seeded: SeedKind = SeedKind.NONE


@dataclass
class RabinResult:
    winning: SymbolicSet
    env_realizable: bool
    memory: RabinMemory
    stats: SolveStats

    @property
    def realizable(self) -> bool:
        """System realizability implied by the environment verdict."""
        return not self.env_realizable


def _recycle_key(mem: RabinMemory, j: int, i: int, cy: int):
    """Cache key of the previous sweep's cell for ``(j, i, cy)``, clamped."""
    if (j, i, cy) in mem.prev_recycle:
        return (j, i, cy)
    ks = [k[2] for k in mem.prev_recycle if k[0] == j and k[1] == i]
    if not ks:
        return None
    return (j, i, min(cy, max(ks)))


def solve_rabin(g: GameStructure, opts: SolverOptions = SolverOptions(),
                seed: Seed | None = None) -> RabinResult:
    seed = seed or Seed()
    mgr = g.mgr
    m, n = g.m, g.n
    stats = SolveStats(seed=seed.kind)
    mem = RabinMemory(Z_after_j=[None] * m, seeded=seed.kind)

    def cpre(R):
        stats.cpre_calls += 1
        return cpre_env(g, R)

    def done(Z, reason, env_wins=None):
        stats.stop_reason = reason
        mem.complete = reason != StopReason.EARLY_UNREAL
        if env_wins is None:
            env_wins = check_initial_win_env(g, Z)
        return RabinResult(Z, env_wins, mem, stats)

    if seed.kind == SeedKind.REUSE_Z:
        wins = check_initial_win_env(g, seed.z)
        if wins or seed.exact:
            stats.stop_reason = StopReason.EARLY_UNREAL if wins else StopReason.FIXPOINT
            return RabinResult(seed.z, wins, mem, stats)
    Z = mgr.false
    if seed.kind == SeedKind.SEED_Z:
        Z = seed.z
        if check_initial_win_env(g, Z):
            stats.stop_reason = StopReason.EARLY_UNREAL
            return RabinResult(Z, True, mem, stats)
    prefix = seed.prefix if seed.kind == SeedKind.REUSE_PREFIX else []

    sweep = 0
    while True:
        sweep += 1
        stats.z_sweeps += 1
        z_start = Z
        if opts.fpr:
            mem.prev_recycle = dict(mem.recycle_cache)
            mem.prev_ranks = dict(mem.recycle_ranks)
        for j in range(m):
            cz = len(mem.Z_cells)
            if sweep == 1 and j < len(prefix):
                snap = prefix[j]
                mem.Z_before.append(Z)
                mem.Z_cells.append(snap.y)
                mem.cz_justice.append(j)
                for (i, cx), X in snap.x_cells.items():
                    mem.X_cells[(cz, i, cx)] = X
                for (i, cy), (X, cells) in snap.recycle.items():
                    mem.recycle_cache[(j, i, cy)] = X
                    mem.recycle_ranks[(j, i, cy)] = cells
                Z = snap.z
                mem.Z_after_j[j] = Z
                mem.first_sweep.append(snap)
                if opts.eun and check_initial_win_env(g, Z):
                    return done(Z, StopReason.EARLY_UNREAL, True)
                continue
            stats.js_body_executions += 1
            not_js = ~g.J_s[j]
            cz_pre = cpre(Z)
            body_recycle = {}
            Y = mgr.true
            cy = 0
            while True:
                start = not_js & cpre(Y)
                newY = mgr.true
                for i in range(n):
                    pre = cz_pre | (g.J_e[i] & start)
                    for key in [k for k in mem.X_cells if k[0] == cz and k[1] == i]:
                        del mem.X_cells[key]
                    cells = []
                    X = mgr.false
                    if opts.fpr and sweep > 1:
                        key = _recycle_key(mem, j, i, cy)
                        if key is not None:
                            # earlier ranks stay valid under the larger pre
                            cells = list(mem.prev_ranks[key])
                            X = mem.prev_recycle[key]
                            if cells and cells[-1] == X:
                                cells.pop()
                    count = 0
                    while True:
                        count += 1
                        nX = pre | (not_js & cpre(X))
                        cells.append(nX)
                        if nX == X:
                            break
                        X = nX
                    for cx, cell in enumerate(cells):
                        mem.X_cells[(cz, i, cx)] = cell
                    stats.x_iterations += count
                    stats.x_trace.append((sweep, j, i, cy, count))
                    mem.recycle_cache[(j, i, cy)] = X
                    mem.recycle_ranks[(j, i, cy)] = tuple(cells)
                    body_recycle[(i, cy)] = (X, tuple(cells))
                    newY = newY & X
                stats.y_iterations += 1
                if newY == Y:
                    break
                Y = newY
                cy += 1
            mem.Z_before.append(Z)
            Z = Z | Y
            mem.Z_cells.append(Y)
            mem.cz_justice.append(j)
            previous = mem.Z_after_j[j]
            mem.Z_after_j[j] = Z
            if sweep == 1:
                mem.first_sweep.append(RabinBodySnapshot(
                    Z, Y,
                    {(k[1], k[2]): v for k, v in mem.X_cells.items() if k[0] == cz},
                    body_recycle))
            if opts.eun and check_initial_win_env(g, Z):
                return done(Z, StopReason.EARLY_UNREAL, True)
            if opts.efp and sweep > 1 and Z == previous:
                return done(Z, StopReason.EARLY_FIXPOINT)
        if Z == z_start:
            return done(Z, StopReason.FIXPOINT)
