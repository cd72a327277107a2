import numpy as np
import pytest
from hypothesis import given, settings

from gr1perf.game import (
    check_initial_win_env, check_initial_win_sys, compile as compile_game, cpre_env, cpre_sys,
    decode_state, encode_values,
)
from gr1perf.harness.families import generate_counter_family
from gr1perf.speclang import parse_spec
from gr1perf.symcore.explicit import ExplicitGame

from .conftest import small_specs


def views(spec):
    g = compile_game(spec)
    return g, ExplicitGame(spec), g.state_levels


def mask(g, s, levels):
    return g.mgr.to_mask(s, levels)


def rho_mask(g, rel, o):
    """Relation over current and next bits as a dense [cur, next] array."""
    lv = list(g.state_levels) + [x + 1 for x in g.state_levels]
    return g.mgr.to_mask(rel, lv).reshape(o.Q, o.Q).T


@settings(max_examples=40, deadline=None)
@given(small_specs())
def test_compiled_relations_match_oracle(spec):
    g, o, lv = views(spec)
    assert np.array_equal(mask(g, g.domain, lv), o.domain)
    assert np.array_equal(mask(g, g.theta_s, lv), o.theta_s)
    assert np.array_equal(rho_mask(g, g.rho_s, o), o.rho_s_dense())
    for a, b in zip(g.J_s, o.J_s):
        assert np.array_equal(mask(g, a, lv), b)


@settings(max_examples=40, deadline=None)
@given(small_specs())
def test_cpre_matches_oracle(spec):
    g, o, lv = views(spec)
    rng = np.random.default_rng(spec.state_bits)
    for _ in range(3):
        R = rng.random(o.Q) < 0.5
        S = g.mgr.from_mask(R, lv)
        assert np.array_equal(mask(g, cpre_sys(g, S), lv), o.cpre_sys(R))
        assert np.array_equal(mask(g, cpre_env(g, S), lv), o.cpre_env(R))


def test_integer_arithmetic_out_of_range_is_false():
    spec = parse_spec("sys Int(0..3) c; gar G next(c) = c + 1;")
    g, o, lv = views(spec)
    succ = o.rho_s_dense()
    top = next(q for q in range(o.Q) if o.decode(q)["c"] == 3)
    assert not succ[top].any()
    assert np.array_equal(rho_mask(g, g.rho_s, o), succ)


def test_negative_ranges_and_subtraction():
    spec = parse_spec("sys Int(-2..1) c; gar G next(c) = c - 1 | c = -2;")
    g, o, _ = views(spec)
    assert np.array_equal(rho_mask(g, g.rho_s, o), o.rho_s_dense())


def test_deadlock_listing_has_no_successor_at_top():
    spec = generate_counter_family(127, "DEADLOCK")
    g = compile_game(spec)
    m = g.mgr
    top = m.cube(encode_values(g, {"x": 127}))
    up = m.cube(encode_values(g, {"y": True}, primed=True))
    assert (g.rho_s & top & up).is_false()
    assert not (g.rho_s & top).is_false()


def test_encode_decode_round_trip():
    spec = parse_spec("env boolean e; sys boolean[2] a; sys Int(5..9) k;")
    g = compile_game(spec)
    vals = {"e": True, "a": [False, True], "k": 7}
    assert decode_state(g, encode_values(g, vals)) == vals


def test_initial_win_checks():
    g = compile_game(parse_spec("env boolean e; sys boolean x; gar x = e;"))
    m = g.mgr
    assert check_initial_win_sys(g, m.true)
    assert not check_initial_win_sys(g, m.false)
    assert not check_initial_win_env(g, m.false)
    ex = m.bit("x")
    assert not check_initial_win_sys(g, ex)      # e = false forces x = false
    assert check_initial_win_env(g, ~ex)


def test_theta_e_false_is_vacuous():
    g = compile_game(parse_spec("env boolean e; sys boolean x; asm e & !e;"))
    assert check_initial_win_sys(g, g.mgr.false)
    assert not check_initial_win_env(g, g.mgr.true)


@pytest.mark.parametrize("text", [
    "sys boolean x;",
    "env Int(0..2) c; sys boolean x; gar G next(x) = (c = 2);",
])
def test_state_levels_follow_declaration_order(text):
    spec = parse_spec(text)
    g, o, lv = views(spec)
    assert len(lv) == spec.state_bits
    for q in range(o.Q):
        a = {l: bool((q >> k) & 1) for k, l in enumerate(lv)}
        assert decode_state(g, a) == o.decode(q)
