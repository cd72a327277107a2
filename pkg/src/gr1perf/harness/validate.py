"""Cross-validation of solvers, heuristics, strategies and cores over a corpus."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ..corefind import CoreOptions, find_core
from ..game import compile as compile_game
from ..gr1solve import SolverOptions, solve_gr1
from ..rabinsolve import solve_rabin
from ..speclang import Specification
from ..strategy import build_counterstrategy, build_strategy, verify_on_graph
from ..symcore import DDManager
from ..symcore.explicit import ExplicitGame

ORACLE_BITS = 16


@dataclass
class ValidationReport:
    failures: list = field(default_factory=list)    # (spec, check, detail)
    warnings: list = field(default_factory=list)
    checks: dict = field(default_factory=dict)      # check name -> number run

    @property
    def ok(self) -> bool:
        return not self.failures

    def expect(self, spec: str, check: str, cond: bool, detail: str = "") -> None:
        self.checks[check] = self.checks.get(check, 0) + 1
        if not cond:
            self.failures.append((spec, check, detail))

    def failed(self, check: str) -> list:
        return [f for f in self.failures if f[1] == check]

    def summary(self) -> str:
        lines = [f"{name}: {n} checks, {len(self.failed(name))} failed"
                 for name, n in sorted(self.checks.items())]
        lines += [f"warning: {w}" for w in self.warnings]
        lines += [f"FAIL {s} {c} {d}" for s, c, d in self.failures]
        return "\n".join(lines)


def validate_spec(name: str, spec: Specification, report: ValidationReport,
                  solvers: dict | None = None, cores: bool = True,
                  strategies: bool = True) -> None:
    """Run every check on one specification, appending to ``report``."""
    solvers = solvers or {}
    gr1: Callable = solvers.get("gr1", solve_gr1)
    rabin: Callable = solvers.get("rabin", solve_rabin)
    g = compile_game(spec, DDManager())
    base = SolverOptions()
    b_sys = gr1(g, base)
    b_env = rabin(g, base)
    realizable = b_sys.realizable
    expect = lambda check, cond, detail="": report.expect(name, check, cond, detail)

    expect("determinacy", b_env.winning == ~b_sys.winning)
    expect("verdict", b_env.env_realizable != realizable, "engines disagree at baseline")

    oracle = None
    if spec.state_bits <= ORACLE_BITS:
        oracle = ExplicitGame(spec)
        levels = g.state_levels
        expect("oracle", np.array_equal(g.mgr.to_mask(b_sys.winning, levels), oracle.win_sys()),
               "system winning states")
        expect("oracle", np.array_equal(g.mgr.to_mask(b_env.winning, levels), oracle.win_env()),
               "environment winning states")
        expect("oracle", oracle.initial_win_sys(oracle.win_sys()) == realizable, "verdict")

    for opts in SolverOptions.all_combinations():
        r_sys = gr1(g, opts)
        r_env = rabin(g, opts)
        tag = f"{opts.label}"
        expect("verdict", r_sys.realizable == realizable, f"gr1 {tag}")
        expect("verdict", r_env.env_realizable != realizable, f"rabin {tag}")
        if opts.eun:
            expect("winning", r_sys.winning >= b_sys.winning, f"gr1 {tag} lost states")
            expect("winning", r_env.winning <= b_env.winning, f"rabin {tag} gained states")
            if realizable:
                expect("winning", r_sys.winning == b_sys.winning, f"gr1 {tag}")
                expect("winning", r_env.winning == b_env.winning, f"rabin {tag}")
        else:
            expect("winning", r_sys.winning == b_sys.winning, f"gr1 {tag}")
            expect("winning", r_env.winning == b_env.winning, f"rabin {tag}")
        for r, b, eng in ((r_sys, b_sys, "gr1"), (r_env, b_env, "rabin")):
            if opts.fpr:
                off = gr1 if eng == "gr1" else rabin
                r0 = off(g, SolverOptions(opts.efp, opts.eun, False))
                expect("monotone", r.stats.x_iterations <= r0.stats.x_iterations,
                       f"{eng} {tag} x {r.stats.x_iterations} > {r0.stats.x_iterations}")
            if opts.efp:
                off = gr1 if eng == "gr1" else rabin
                r0 = off(g, SolverOptions(False, opts.eun, opts.fpr))
                expect("monotone", r.stats.js_body_executions <= r0.stats.js_body_executions,
                       f"{eng} {tag} bodies")
        if strategies and oracle is not None:
            if realizable:
                s = build_strategy(g, r_sys.memory)
                v = verify_on_graph(g, s, oracle=oracle)
                expect("strategy", v.ok, f"{tag}: {v.reason}")
            elif not opts.eun:
                s = build_counterstrategy(g, r_env.memory)
                v = verify_on_graph(g, s, oracle=oracle)
                expect("strategy", v.ok, f"{tag}: {v.reason}")

    if cores and not realizable:
        found = {}
        for co in CoreOptions.all_combinations():
            found[co.label] = find_core(spec, co).core
        first = next(iter(found.values()))
        expect("core", all(c == first for c in found.values()), str(found))
        again = find_core(spec, CoreOptions(), elements=first).core
        expect("core", again == first, f"re-minimization gave {again}")


def validate_all(corpus, solvers: dict | None = None, cores: bool = True,
                 strategies: bool = True) -> ValidationReport:
    """Validate every ``(name, spec)`` pair; an empty corpus passes with a warning."""
    report = ValidationReport()
    corpus = list(corpus)
    if not corpus:
        report.warnings.append("empty corpus")
    for name, spec in corpus:
        validate_spec(name, spec, report, solvers, cores, strategies)
    return report
