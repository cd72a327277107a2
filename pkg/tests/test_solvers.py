import numpy as np
import pytest
from hypothesis import given, settings

from gr1perf.game import compile as compile_game
from gr1perf.gr1solve import Seed, SeedKind, SolverOptions, StopReason, solve_gr1
from gr1perf.rabinsolve import solve_rabin
from gr1perf.speclang import parse_spec
from gr1perf.symcore import DDManager
from gr1perf.symcore.explicit import ExplicitGame

from .conftest import family_game, small_specs

ALL = SolverOptions.all_combinations()


@settings(max_examples=40, deadline=None)
@given(small_specs())
def test_both_engines_match_oracle(spec):
    g = compile_game(spec)
    o = ExplicitGame(spec)
    lv = g.state_levels
    w_sys, w_env = o.win_sys(), o.win_env()
    assert np.array_equal(w_env, ~w_sys)
    real = o.initial_win_sys(w_sys)
    assert o.initial_win_env(w_env) != real
    for opts in ALL:
        r = solve_gr1(g, opts)
        e = solve_rabin(g, opts)
        assert r.realizable == real
        assert e.env_realizable != real
        got_sys = g.mgr.to_mask(r.winning, lv)
        got_env = g.mgr.to_mask(e.winning, lv)
        if opts.eun and not real:
            assert (got_sys >= w_sys).all()
            assert (got_env <= w_env).all()
        else:
            assert np.array_equal(got_sys, w_sys)
            assert np.array_equal(got_env, w_env)


@settings(max_examples=30, deadline=None)
@given(small_specs())
def test_heuristics_never_add_work(spec):
    g = compile_game(spec)
    for solve in (solve_gr1, solve_rabin):
        base = solve(g).stats
        assert solve(g, SolverOptions(fpr=True)).stats.x_iterations <= base.x_iterations
        assert solve(g, SolverOptions(efp=True)).stats.js_body_executions <= base.js_body_executions


def test_stats_are_deterministic():
    g = family_game("FPR_GOOD", 8)
    a = solve_gr1(g, SolverOptions(fpr=True)).stats.to_dict(trace=True)
    b = solve_gr1(g, SolverOptions(fpr=True)).stats.to_dict(trace=True)
    assert a == b


def test_x_trace_counts_every_inner_iteration():
    g = family_game("EFP_GOOD", 3)
    st = solve_gr1(g).stats
    assert sum(t[4] for t in st.x_trace) == st.x_iterations
    assert st.y_iterations == len({t[:4] for t in st.x_trace}) // g.n


def test_stop_reasons():
    g = family_game("EFP_GOOD", 4)
    assert solve_gr1(g).stats.stop_reason == StopReason.FIXPOINT
    assert solve_gr1(g, SolverOptions(efp=True)).stats.stop_reason == StopReason.EARLY_FIXPOINT
    g = family_game("EUN_GOOD", 16)
    r = solve_gr1(g, SolverOptions(eun=True))
    assert r.stats.stop_reason == StopReason.EARLY_UNREAL
    assert not r.memory.complete


def test_trivial_games():
    g = compile_game(parse_spec("sys boolean x;"))
    assert solve_gr1(g).winning.is_true()
    assert solve_rabin(g).winning.is_false()
    g = compile_game(parse_spec("sys boolean x; gar G false;"))
    assert solve_gr1(g).winning == ~g.domain
    assert not solve_gr1(g).realizable


def test_rabin_dual_on_families():
    for v, n in [("EUN_GOOD", 16), ("EUN_BAD", 16), ("DEADLOCK", 15), ("FPR_GOOD", 6)]:
        g = family_game(v, n)
        assert solve_rabin(g).winning == ~solve_gr1(g).winning


# -- seeds ------------------------------------------------------------------------


def _drop(spec, name):
    return spec.restrict_guarantees([x for x in spec.guarantee_names if x != name])


SEEDABLE = parse_spec("""
env boolean e;
sys boolean x;
sys boolean y;
asm GF e;
gar i: !x;
gar s1: G next(x) -> e;
gar s2: G y -> !next(y);
gar j1: GF x;
gar j2: GF y;
gar j3: GF x & !y;
""")


@pytest.mark.parametrize("solve", [solve_gr1, solve_rabin])
def test_reuse_z_exact_skips_the_game(solve):
    mgr = DDManager()
    g = compile_game(SEEDABLE, mgr)
    full = solve(g)
    g2 = compile_game(_drop(SEEDABLE, "i"), mgr)
    r = solve(g2, seed=Seed(SeedKind.REUSE_Z, full.winning, exact=True))
    assert r.stats.z_sweeps == 0
    assert r.winning == solve(g2).winning


def test_seed_y_gives_the_same_winning_set():
    mgr = DDManager()
    full = solve_gr1(compile_game(SEEDABLE, mgr))
    g2 = compile_game(_drop(SEEDABLE, "s1"), mgr)
    r = solve_gr1(g2, seed=Seed(SeedKind.SEED_Y, full.winning))
    assert r.winning == solve_gr1(g2).winning


@pytest.mark.parametrize("solve", [solve_gr1, solve_rabin])
@pytest.mark.parametrize("dropped", ["j2", "j3"])
def test_prefix_reuse(solve, dropped):
    mgr = DDManager()
    g = compile_game(SEEDABLE, mgr)
    full = solve(g)
    g2 = compile_game(_drop(SEEDABLE, dropped), mgr)
    p = g.J_s_names.index(dropped)
    r = solve(g2, seed=Seed(SeedKind.REUSE_PREFIX, prefix=full.memory.first_sweep[:p]))
    base = solve(g2)
    assert r.winning == base.winning
    assert r.stats.js_body_executions < base.stats.js_body_executions


@pytest.mark.parametrize("solve,bound", [(solve_gr1, "true"), (solve_rabin, "false")])
def test_seed_z_from_trivial_bound(solve, bound):
    g = compile_game(SEEDABLE)
    r = solve(g, seed=Seed(SeedKind.SEED_Z, getattr(g.mgr, bound)))
    assert r.winning == solve(g).winning

