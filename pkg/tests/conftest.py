import pytest
from hypothesis import strategies as st

from gr1perf.game import compile as compile_game
from gr1perf.harness.corpus import load_corpus
from gr1perf.harness.families import generate_counter_family
from gr1perf.speclang import parse_spec

ENV_VARS = ["e0", "e1"]
SYS_VARS = ["s0", "s1"]


@st.composite
def bool_expr(draw, names, depth=2, primed=()):
    if depth == 0 or draw(st.booleans()):
        if primed and draw(st.booleans()):
            return f"next({draw(st.sampled_from(primed))})"
        name = draw(st.sampled_from(names))
        return name if draw(st.integers(0, 3)) else "!" + name
    op = draw(st.sampled_from(["&", "|", "->"]))
    a = draw(bool_expr(names, depth - 1, primed))
    b = draw(bool_expr(names, depth - 1, primed))
    return f"({a} {op} {b})"


@st.composite
def small_specs(draw):
    """Random specifications over two env and two sys booleans and one counter."""
    use_int = draw(st.booleans())
    lines = [f"env boolean {v};" for v in ENV_VARS] + [f"sys boolean {v};" for v in SYS_VARS]
    names = ENV_VARS + SYS_VARS
    if use_int:
        lines.append("sys Int(0..2) k;")
        names = names + ["k = 1", "k < 2"]
    for kind, pool, nxt in (("asm", ENV_VARS, ENV_VARS), ("gar", names, ENV_VARS + SYS_VARS)):
        if draw(st.booleans()):
            lines.append(f"{kind} {draw(bool_expr(pool, 1))};")
        for _ in range(draw(st.integers(0, 2))):
            lines.append(f"{kind} G {draw(bool_expr(names, 2, nxt))};")
        for _ in range(draw(st.integers(0, 2))):
            lines.append(f"{kind} GF {draw(bool_expr(names, 1))};")
    if use_int and draw(st.booleans()):
        lines.append("gar G next(k) = k + 1 | next(k) = 0;")
    return parse_spec("\n".join(lines))


@pytest.fixture(scope="session")
def corpus():
    return load_corpus()


def family_game(variant, n=0):
    return compile_game(generate_counter_family(n, variant))


def text_game(text):
    return compile_game(parse_spec(text))


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("tests.test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.TITLES):
        terminalreporter.write_line(mod.line(k))
