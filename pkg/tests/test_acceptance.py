"""Acceptance criteria, one test per criterion.

Each test records a PASS/FAIL line; the lines are printed at the end of the
pytest run (see ``pytest_terminal_summary`` in conftest) and when this file
is executed directly.
"""

import functools
import time

import numpy as np
import pytest

from gr1perf.corefind import CoreOptions, Engine, Verdict, find_core
from gr1perf.game import compile as compile_game
from gr1perf.gr1solve import SeedKind, SolverOptions, solve_gr1
from gr1perf.harness.corpus import load_corpus
from gr1perf.harness.families import generate_counter_family
from gr1perf.harness.validate import validate_all
from gr1perf.rabinsolve import solve_rabin
from gr1perf.strategy import build_counterstrategy, build_strategy, mutate, verify_on_graph
from gr1perf.symcore.explicit import ExplicitGame

ALL = SolverOptions.all_combinations()
RESULTS: dict = {}

TITLES = {
    1: "early fixed point body counts",
    2: "early unrealizability body counts",
    3: "fixed-point recycling iteration counts",
    4: "delta-debugging call trace and skips",
    5: "seeded check without a game",
    6: "heuristics are conservative",
    7: "determinacy",
    8: "agreement with the explicit-state oracle",
    9: "heuristics never add work",
    10: "strategies and counterstrategies verify",
}


def criterion(k):
    def wrap(fn):
        @functools.wraps(fn)
        def run(*a, **kw):
            try:
                fn(*a, **kw)
            except BaseException as e:
                RESULTS[k] = f"FAIL  ({type(e).__name__}: {str(e).splitlines()[0] if str(e) else ''})"
                print(line(k))
                raise
            RESULTS[k] = "PASS"
            print(line(k))
        return run
    return wrap


def line(k):
    return f"criterion {k:2d} {RESULTS.get(k, 'NOT RUN'):<5} {TITLES[k]}"


def game(variant, n=0):
    return compile_game(generate_counter_family(n, variant))


@pytest.fixture(scope="module")
def corpus():
    return load_corpus()


@pytest.fixture(scope="module")
def report(corpus):
    return validate_all(corpus)


@criterion(1)
def test_criterion_1_efp_counts():
    t0 = time.monotonic()
    for m in (2, 4, 8):
        good, bad = game("EFP_GOOD", m), game("EFP_BAD", m)
        assert solve_gr1(good).stats.js_body_executions == 2 * m
        assert solve_gr1(good, SolverOptions(efp=True)).stats.js_body_executions == m + 1
        assert solve_gr1(bad).stats.js_body_executions == 2 * m
        assert solve_gr1(bad, SolverOptions(efp=True)).stats.js_body_executions == 2 * m
    assert time.monotonic() - t0 < 1.0


@criterion(2)
def test_criterion_2_eun_counts():
    for n in (16, 100, 10000):
        g = game("EUN_GOOD", n)
        t0 = time.monotonic()
        base = solve_gr1(g)
        elapsed = time.monotonic() - t0
        assert base.stats.js_body_executions == n // 2
        assert solve_gr1(g, SolverOptions(eun=True)).stats.js_body_executions == 2
        assert elapsed < 10.0
        if n <= 100:
            assert solve_rabin(g).stats.js_body_executions == n // 2
            assert solve_rabin(g, SolverOptions(eun=True)).stats.js_body_executions == 2


@criterion(3)
def test_criterion_3_fpr_counts():
    for n in (4, 10, 100, 1000):
        g = game("FPR_GOOD", n)
        assert solve_gr1(g).stats.x_iterations_at(2)[0] == n + 1
        assert solve_gr1(g, SolverOptions(fpr=True)).stats.x_iterations_at(2)[0] == 1
        g = game("FPR_BAD", n)
        assert solve_gr1(g).stats.x_iterations == solve_gr1(g, SolverOptions(fpr=True)).stats.x_iterations


@criterion(4)
def test_criterion_4_ddmin_trace():
    spec = generate_counter_family(0, "DD_GOOD")
    res = find_core(spec)
    assert len(res.trace.calls()) == 19
    assert res.core == ("g1", "g4")
    with_sets = find_core(spec, CoreOptions(sets=True))
    assert with_sets.core == ("g1", "g4")
    assert len(with_sets.trace.calls()) == 19
    bad = find_core(generate_counter_family(0, "DD_BAD"))
    assert len(bad.trace.calls()) == 2 and bad.checks_skipped == 0
    assert with_sets.checks_skipped == 13, f"{with_sets.checks_skipped} of 19 calls skipped"


@criterion(5)
def test_criterion_5_inc_zero_game():
    for engine in Engine:
        for variant, expect_zero in (("INC_GOOD", True), ("INC_BAD", False)):
            res = find_core(generate_counter_family(0, variant), CoreOptions(inc=True, check_with=engine))
            hit = [e for e in res.trace.calls() if e.candidate == ("g2", "g3", "g4")]
            assert len(hit) == 1 and hit[0].seed == SeedKind.SEED_Z
            assert hit[0].verdict == Verdict.UNREAL
            if expect_zero:
                assert hit[0].stats["z_sweeps"] == 0
            else:
                assert hit[0].stats["z_sweeps"] >= 1


@criterion(6)
def test_criterion_6_conservative(report):
    for check in ("verdict", "winning", "core"):
        assert report.checks.get(check, 0) > 0
        assert not report.failed(check), report.failed(check)[:3]


@criterion(7)
def test_criterion_7_determinacy(corpus):
    for name, spec in corpus:
        g = compile_game(spec)
        for opts in ALL:
            if opts.eun:
                continue
            assert solve_rabin(g, opts).winning == ~solve_gr1(g, opts).winning, (name, opts.label)


@criterion(8)
def test_criterion_8_oracle(corpus):
    t0 = time.monotonic()
    checked = 0
    for name, spec in corpus:
        if spec.state_bits > 16:
            continue
        g = compile_game(spec)
        o = ExplicitGame(spec)
        lv = g.state_levels
        assert np.array_equal(g.mgr.to_mask(solve_gr1(g).winning, lv), o.win_sys()), name
        assert np.array_equal(g.mgr.to_mask(solve_rabin(g).winning, lv), o.win_env()), name
        checked += 1
    assert checked == len(corpus)
    assert time.monotonic() - t0 < 60.0


@criterion(9)
def test_criterion_9_monotone(report):
    assert report.checks.get("monotone", 0) > 0
    assert not report.failed("monotone"), report.failed("monotone")[:3]


@criterion(10)
def test_criterion_10_strategies(report, corpus):
    assert report.checks.get("strategy", 0) > 0
    assert not report.failed("strategy"), report.failed("strategy")[:3]
    rng = np.random.default_rng(0)
    detected = 0
    for name, spec in corpus:
        g = compile_game(spec)
        o = ExplicitGame(spec)
        r = solve_gr1(g)
        if r.realizable:
            s, size = build_strategy(g, r.memory), o.Q
        else:
            s, size = build_counterstrategy(g, solve_rabin(g).memory), o.NX
        if s.chooser and size > 1:
            detected += not verify_on_graph(g, mutate(s, rng, size), oracle=o)
    assert detected >= 1


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q"]))
