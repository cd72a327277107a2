"""Unrealizable cores by delta debugging over system guarantees.

``ddmin`` is the generic recursive minimizer.  ``find_core`` drives it
with a realizability check that can skip candidates contained in a known
realizable set (``sets``), seed the solver from related earlier checks
(``inc``), and play either the GR(1) or the Rabin(1) game
(``check_with``).
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .game import compile as compile_game
from .gr1solve import Seed, SeedKind, SolverOptions, StopReason, solve_gr1
from .rabinsolve import solve_rabin
from .speclang import Kind, Specification, Temporal
from .symcore import DDManager, SymbolicSet


class Engine(str, enum.Enum):
    GR1 = "gr1"
    RABIN = "rabin"


class Verdict(str, enum.Enum):
    UNREAL = "UNREAL"
    REAL = "REAL"
    SKIPPED_SUBSET = "SKIPPED_SUBSET"


class Site(str, enum.Enum):
    INITIAL = "INITIAL"
    SUBSET = "L5"
    COMPLEMENT = "L10"


class NotUnrealizable(ValueError):
    """The set handed to ddmin does not satisfy the check."""


@dataclass(frozen=True)
class CoreOptions:
    sets: bool = False
    inc: bool = False
    check_with: Engine = Engine.GR1
    solver_opts: SolverOptions = SolverOptions()

    @classmethod
    def all_combinations(cls, solver_opts: SolverOptions = SolverOptions()) -> list["CoreOptions"]:
        return [cls(s, i, e, solver_opts) for s in (False, True) for i in (False, True)
                for e in (Engine.GR1, Engine.RABIN)]

    @property
    def label(self) -> str:
        on = [n for n in ("sets", "inc") if getattr(self, n)]
        on.append(self.check_with.value)
        return "+".join(on)


@dataclass
class TraceEntry:
    candidate: tuple
    verdict: Verdict
    site: Site
    n: int
    seed: SeedKind = SeedKind.NONE
    stats: dict | None = None

    def to_dict(self) -> dict:
        return {"candidate": list(self.candidate), "verdict": self.verdict.value,
                "site": self.site.value, "n": self.n, "seed": self.seed.value,
                "stats": self.stats}


@dataclass
class CheckTrace:
    entries: list = field(default_factory=list)

    def calls(self) -> list[TraceEntry]:
        """Checks issued by the minimization (the precondition check excluded)."""
        return [e for e in self.entries if e.site != Site.INITIAL]

    def to_json(self) -> str:
        return json.dumps([e.to_dict() for e in self.entries], sort_keys=True)


@dataclass
class CoreResult:
    core: tuple
    trace: CheckTrace

    @property
    def checks_run(self) -> int:
        return sum(e.verdict != Verdict.SKIPPED_SUBSET for e in self.trace.entries)

    @property
    def checks_skipped(self) -> int:
        return sum(e.verdict == Verdict.SKIPPED_SUBSET for e in self.trace.entries)

    def to_dict(self) -> dict:
        return {"core": list(self.core), "checks_run": self.checks_run,
                "checks_skipped": self.checks_skipped,
                "trace": [e.to_dict() for e in self.trace.entries]}

    def to_json(self, indent: int | None = None) -> str:
        return json.dumps(self.to_dict(), indent=indent, sort_keys=True)


# -- generic minimizer ----------------------------------------------------------


def partition(E: Sequence, n: int) -> list[tuple]:
    """Split ``E`` into ``n`` contiguous chunks, larger chunks first."""
    size, extra = divmod(len(E), n)
    out, pos = [], 0
    for k in range(n):
        step = size + (1 if k < extra else 0)
        out.append(tuple(E[pos:pos + step]))
        pos += step
    return out


def ddmin(E: Sequence, check: Callable, n: int = 2) -> tuple:
    """Locally minimal subset of ``E`` that still satisfies ``check``.

    ``check(candidate, site, n, parent)`` returns True when the candidate
    keeps the property; ``parent`` is the set being minimized.  Only the
    first call checks ``E`` itself.
    """
    E = tuple(E)
    if not check(E, Site.INITIAL, n, None):
        raise NotUnrealizable("the initial set does not satisfy the check")
    return _ddmin(E, check, n)


def _ddmin(E: tuple, check: Callable, n: int) -> tuple:
    while True:
        if n > len(E):
            return E
        parts = partition(E, n)
        for part in parts:
            if check(part, Site.SUBSET, n, E):
                E, n = part, 2
                break
        else:
            for part in parts:
                rest = tuple(x for x in E if x not in part)
                if check(rest, Site.COMPLEMENT, n, E):
                    E, n = rest, max(n - 1, 2)
                    break
            else:
                finer = min(len(E), 2 * n)
                if finer == n:
                    return E
                n = finer


# -- realizability checks -------------------------------------------------------


@dataclass
class _Record:
    unrealizable: bool
    winning: SymbolicSet | None
    exact: bool
    memory: object = None
    names: list = field(default_factory=list)  # justice guarantee names of the game


@dataclass
class CoreSearchState:
    spec: Specification
    opts: CoreOptions
    mgr: DDManager = field(default_factory=DDManager)
    records: dict = field(default_factory=dict)   # frozenset -> _Record
    realizable_sets: list = field(default_factory=list)
    trace: CheckTrace = field(default_factory=CheckTrace)

    def temporal_of(self, name: str) -> Temporal:
        for c in self.spec.constraints:
            if c.kind == Kind.GAR and c.name == name:
                return c.temporal
        raise KeyError(name)


def subset_skip(state: CoreSearchState, candidate) -> bool | None:
    """False (realizable) if ``candidate`` lies inside a known realizable set."""
    cand = frozenset(candidate)
    for r in state.realizable_sets:
        if cand <= r:
            return False
    return None


def incremental_seed(state: CoreSearchState, parent, candidate, site: Site) -> Seed:
    """Seeding directive for checking ``candidate`` given earlier results."""
    engine = state.opts.check_with
    cand = frozenset(candidate)
    if site == Site.COMPLEMENT:
        subs = [r for s, r in state.records.items()
                if s <= cand and not r.unrealizable and r.winning is not None]
        if not subs:
            return Seed()
        z = subs[0].winning
        for r in subs[1:]:
            z = (z & r.winning) if engine == Engine.GR1 else (z | r.winning)
        return Seed(SeedKind.SEED_Z, z)
    if site != Site.SUBSET or parent is None:
        return Seed()
    rec = state.records.get(frozenset(parent))
    if rec is None or rec.winning is None:
        return Seed()
    removed = [x for x in parent if x not in cand]
    kinds = {state.temporal_of(x) for x in removed}
    if kinds == {Temporal.INIT}:
        return Seed(SeedKind.REUSE_Z, rec.winning, exact=rec.exact)
    if kinds == {Temporal.SAFETY}:
        if engine == Engine.GR1 and rec.exact:
            return Seed(SeedKind.SEED_Y, rec.winning)
        return Seed()
    if kinds == {Temporal.JUSTICE}:
        mem = rec.memory
        if mem is None or mem.seeded not in (SeedKind.NONE, SeedKind.REUSE_PREFIX):
            return Seed()
        p = min(rec.names.index(x) for x in removed)
        prefix = list(mem.first_sweep[:p])
        if not prefix:
            return Seed()
        return Seed(SeedKind.REUSE_PREFIX, prefix=prefix)
    return Seed()


def check_unrealizable(spec: Specification, subset, opts: CoreOptions,
                       state: CoreSearchState, site: Site = Site.INITIAL,
                       n: int = 2, parent=None) -> bool:
    """Play the game restricted to ``subset`` and record the outcome."""
    subset = tuple(subset)
    if opts.sets and subset_skip(state, subset) is False:
        state.trace.entries.append(TraceEntry(subset, Verdict.SKIPPED_SUBSET, site, n))
        return False
    seed = incremental_seed(state, parent, subset, site) if opts.inc else Seed()
    g = compile_game(spec.restrict_guarantees(subset), state.mgr)
    if opts.check_with == Engine.GR1:
        res = solve_gr1(g, opts.solver_opts, seed)
        unreal = not res.realizable
    else:
        res = solve_rabin(g, opts.solver_opts, seed)
        unreal = res.env_realizable
    exact = res.stats.stop_reason != StopReason.EARLY_UNREAL and (
        seed.kind != SeedKind.REUSE_Z or seed.exact)
    state.records[frozenset(subset)] = _Record(unreal, res.winning, exact, res.memory, g.J_s_names)
    if not unreal:
        state.realizable_sets.append(frozenset(subset))
    state.trace.entries.append(TraceEntry(
        subset, Verdict.UNREAL if unreal else Verdict.REAL, site, n, seed.kind,
        res.stats.to_dict()))
    return unreal


def find_core(spec: Specification, opts: CoreOptions = CoreOptions(),
              elements: Sequence[str] | None = None) -> CoreResult:
    """Locally minimal unrealizable subset of the guarantees of ``spec``."""
    state = CoreSearchState(spec, opts)
    E = tuple(elements) if elements is not None else tuple(spec.guarantee_names)

    def check(cand, site, n, parent):
        return check_unrealizable(spec, cand, opts, state, site, n, parent)

    core = ddmin(E, check)
    return CoreResult(core, state.trace)
