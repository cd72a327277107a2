import numpy as np
import pytest

from gr1perf.game import compile as compile_game
from gr1perf.gr1solve import SolverOptions, solve_gr1
from gr1perf.harness.families import FIXED, Variant, family_text, generate_counter_family
from gr1perf.speclang import format_spec, parse_spec
from gr1perf.symcore.explicit import ExplicitGame

SMALL_N = {
    Variant.EUN_GOOD: 8, Variant.EUN_BAD: 8, Variant.FPR_GOOD: 5, Variant.FPR_BAD: 5,
    Variant.EFP_GOOD: 4, Variant.EFP_BAD: 4, Variant.DEADLOCK: 15,
}
REALIZABLE = {Variant.FPR_GOOD, Variant.FPR_BAD, Variant.EFP_GOOD, Variant.EFP_BAD}


@pytest.mark.parametrize("variant", list(Variant))
def test_verdict_confirmed_by_oracle(variant):
    spec = generate_counter_family(SMALL_N.get(variant, 0), variant)
    o = ExplicitGame(spec)
    real = o.initial_win_sys(o.win_sys())
    assert real == (variant in REALIZABLE)
    assert solve_gr1(compile_game(spec)).realizable == real


@pytest.mark.parametrize("variant", list(Variant))
def test_text_round_trips(variant):
    spec = generate_counter_family(SMALL_N.get(variant, 0), variant)
    assert parse_spec(format_spec(spec)) == spec


def test_fixed_listings_ignore_n():
    for v in FIXED:
        assert family_text(v, 3) == family_text(v, 99)


@pytest.mark.parametrize("variant, n", [
    (Variant.EUN_GOOD, 5), (Variant.EUN_BAD, 2), (Variant.EFP_GOOD, 1),
    (Variant.FPR_GOOD, 1), (Variant.DEADLOCK, 0),
])
def test_rejects_unencodable_sizes(variant, n):
    with pytest.raises(ValueError):
        generate_counter_family(n, variant)


def test_eun_good_loses_the_top_two_values_per_sweep():
    n = 12
    spec = generate_counter_family(n, Variant.EUN_GOOD)
    o = ExplicitGame(spec)
    c = np.array([o.decode(q)["c"] for q in range(o.Q)])
    Z = o.domain.copy()
    lost = []
    for _ in range(n // 2):
        Z = Z & o.cpre_sys(Z)
        lost.append(sorted(set(range(n + 1)) - set(c[Z & o.domain])))
    # each sweep removes the largest remaining even and odd value; 0..2 cycle forever
    for k, gone in enumerate(lost, 1):
        assert gone == list(range(max(3, n + 1 - 2 * k), n + 1))


def test_eun_good_initial_value_lost_in_second_sweep():
    g = compile_game(generate_counter_family(16, Variant.EUN_GOOD))
    r = solve_gr1(g, SolverOptions(eun=True))
    assert r.stats.z_sweeps == 2 and not r.realizable


def test_deadlock_top_state_has_no_up_move():
    spec = generate_counter_family(15, Variant.DEADLOCK)
    o = ExplicitGame(spec)
    for q in range(o.Q):
        v = o.decode(q)
        if v["x"] == 15 and o.domain[q]:
            ups = [t for t in o.successors(q) if o.decode(int(t))["y"]]
            assert ups == []
