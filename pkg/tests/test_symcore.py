import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gr1perf.symcore import BACKEND, CompiledKernel, DDManager, ManagerMismatch, PyKernel

NB = 3  # declared bits; 2 * NB levels
LEVELS = list(range(2 * NB))


def managers():
    out = [DDManager(kernel=PyKernel(0))]
    if CompiledKernel is not None:
        out.append(DDManager(kernel=CompiledKernel(0)))
    for m in out:
        m.declare("a", "env", 1)
        m.declare("b", "sys", 2)
    return out


# formulas as nested tuples, evaluated both symbolically and on truth tables
formulas = st.recursive(
    st.one_of(st.sampled_from([("true",), ("false",)]),
              st.integers(0, 2 * NB - 1).map(lambda v: ("var", v))),
    lambda sub: st.one_of(
        st.tuples(st.just("not"), sub),
        st.tuples(st.sampled_from(["and", "or", "xor", "implies", "diff"]), sub, sub),
        st.tuples(st.sampled_from(["exists", "forall"]),
                  st.sets(st.integers(0, 2 * NB - 1), max_size=3).map(tuple), sub),
    ),
    max_leaves=10,
)


def build(m, f):
    tag = f[0]
    if tag == "true":
        return m.true
    if tag == "false":
        return m.false
    if tag == "var":
        return type(m.true)(m, m.kernel.var(f[1]))
    if tag == "not":
        return ~build(m, f[1])
    if tag in ("exists", "forall"):
        return getattr(m, tag)(f[1], build(m, f[2]))
    a, b = build(m, f[1]), build(m, f[2])
    return {"and": a & b, "or": a | b, "xor": a ^ b, "implies": a.implies(b), "diff": a - b}[tag]


IDX = np.arange(1 << (2 * NB))


def table(f):
    tag = f[0]
    if tag == "true":
        return np.ones(len(IDX), bool)
    if tag == "false":
        return np.zeros(len(IDX), bool)
    if tag == "var":
        return ((IDX >> f[1]) & 1).astype(bool)
    if tag == "not":
        return ~table(f[1])
    if tag in ("exists", "forall"):
        t = table(f[2])
        for v in f[1]:
            lo, hi = t[IDX & ~(1 << v)], t[IDX | (1 << v)]
            t = (lo | hi) if tag == "exists" else (lo & hi)
        return t
    a, b = table(f[1]), table(f[2])
    return {"and": a & b, "or": a | b, "xor": a ^ b, "implies": ~a | b, "diff": a & ~b}[tag]


@settings(max_examples=200, deadline=None)
@given(formulas)
def test_against_truth_tables(f):
    expected = table(f)
    for m in managers():
        assert np.array_equal(m.to_mask(build(m, f), LEVELS), expected)


@settings(max_examples=200, deadline=None)
@given(formulas)
def test_pure_and_compiled_agree_on_structure(f):
    ms = managers()
    if len(ms) < 2:
        pytest.skip("compiled kernel not built")
    a, b = (build(m, f) for m in ms)
    assert a.node == b.node or (a.node >= 2 and b.node >= 2)
    assert ms[0].sat_count(a, LEVELS) == ms[1].sat_count(b, LEVELS)
    assert ms[0].to_dot(a).count("->") == ms[1].to_dot(b).count("->")


@settings(max_examples=100, deadline=None)
@given(formulas, formulas)
def test_canonicity(f, g):
    m = managers()[0]
    a, b = build(m, f), build(m, g)
    assert (a == b) == np.array_equal(table(f), table(g))


@settings(max_examples=100, deadline=None)
@given(formulas, formulas, st.sets(st.integers(0, 2 * NB - 1), max_size=3))
def test_and_exists_matches_composition(f, g, qs):
    for m in managers():
        a, b = build(m, f), build(m, g)
        assert m.and_exists(tuple(qs), a, b) == m.exists(tuple(qs), a & b)


@settings(max_examples=100, deadline=None)
@given(formulas)
def test_prime_swap_is_involution(f):
    for m in managers():
        a = m.exists("next", build(m, f))
        b = m.prime_swap(a)
        assert m.support(b) <= set(m.group("next"))
        assert m.prime_swap(b) == a


def test_prime_swap_rejects_mixed_support():
    m = managers()[0]
    with pytest.raises(ValueError):
        m.prime_swap(m.bit("a") & m.bit("a", primed=True))


@settings(max_examples=100, deadline=None)
@given(st.lists(st.booleans(), min_size=1 << NB, max_size=1 << NB))
def test_mask_round_trip(bits):
    levels = [0, 2, 4]
    mask = np.array(bits)
    for m in managers():
        s = m.from_mask(mask, levels)
        assert np.array_equal(m.to_mask(s, levels), mask)
        assert m.sat_count(s, levels) == mask.sum()


def test_cube_and_pick():
    for m in managers():
        c = m.cube({0: True, 2: False, 5: True})
        assert m.pick(c, [0, 2, 5]) == {0: True, 2: False, 5: True}
        assert m.sat_count(c, LEVELS) == 8
        assert m.pick(m.false, LEVELS) is None


def test_named_groups():
    m = managers()[0]
    assert m.group("env") == (0,)
    assert m.group("sys'") == (3, 5)
    assert m.group("all") == tuple(LEVELS)
    with pytest.raises(ValueError):
        m.group("nope")


def test_manager_mismatch():
    a, b = DDManager(), DDManager()
    with pytest.raises(ManagerMismatch):
        _ = a.true & b.true


def test_backend_selected():
    assert BACKEND in ("compiled", "python")
