"""Parameterized reconstructions of the heuristic example specifications.

Each variant is a small family scaled by ``n``.  The text is produced in
the specification language and parsed, so every family also exercises
the parser.
"""

from __future__ import annotations

import enum

from ..speclang import Specification, parse_spec


class Variant(str, enum.Enum):
    EUN_GOOD = "EUN_GOOD"
    EUN_BAD = "EUN_BAD"
    FPR_GOOD = "FPR_GOOD"
    FPR_BAD = "FPR_BAD"
    EFP_GOOD = "EFP_GOOD"
    EFP_BAD = "EFP_BAD"
    DEADLOCK = "DEADLOCK"
    DD_GOOD = "DD_GOOD"
    DD_BAD = "DD_BAD"
    INC_GOOD = "INC_GOOD"
    INC_BAD = "INC_BAD"


# fixed-size listings ignore n
FIXED = {Variant.DD_GOOD, Variant.DD_BAD, Variant.INC_GOOD, Variant.INC_BAD}


def _efp(n: int, reverse: bool) -> str:
    if n < 2:
        raise ValueError("the early fixed-point family needs n >= 2")
    rest = " & ".join(f"a[{k}]" for k in range(1, n))
    lines = [f"sys boolean[{n}] a;"]
    lines += [f"gar G next(a[{k}]) = a[{k}];" for k in range(n)]
    lines.append(f"gar G a[0] -> ({rest});")
    order = range(n - 1, -1, -1) if reverse else range(n)
    lines += [f"gar j{k}: GF a[{k}];" for k in order]
    return "\n".join(lines)


def _eun(n: int, good: bool) -> str:
    if n < 4 or n % 2:
        raise ValueError("the early unrealizability family needs an even n >= 4")
    init = n - 2 if good else 3
    return "\n".join([
        f"sys Int(0..{n}) c;",
        f"gar c = {init};",
        "// two steps up, or back to 0 from the bottom",
        "gar G next(c) = c + 2 | (c < 3 & next(c) = 0);",
    ])


def _fpr(n: int, good: bool) -> str:
    if n < 2:
        raise ValueError("the recycling family needs n >= 2")
    goal = "c = 0" if good else f"c = {n}"
    return "\n".join([
        f"env Int(0..{n}) c;",
        "sys boolean two;",
        "asm c = 0;",
        f"asm G next(c) = c + 1 | (c = {n} & next(c) = 0);",
        f"asm GF c = {n};",
        "gar two;",
        "gar G two;",
        f"gar GF {goal};",
    ])


def _deadlock(n: int) -> str:
    if n < 1:
        raise ValueError("the deadlock family needs n >= 1")
    return "\n".join([
        "env boolean y;",
        f"sys Int(0..{n}) x;",
        "gar x = 0;",
        "gar G next(y) -> next(x) = x + 1;",
        "gar G !next(y) -> next(x) = x;",
    ])


DD_GOOD = """\
sys boolean x;
sys boolean y;
gar g1: G x;
gar g2: GF y;
gar g3: GF !y;
gar g4: G !x;
"""

DD_BAD = """\
env boolean e;
sys boolean x;
gar g1: GF e;
gar g2: GF x;
gar g3: GF !x;
gar g4: G next(x) != x;
"""

INC_GOOD = """\
sys boolean x;
sys boolean y;
gar g1: GF y;
gar g2: G x;
gar g3: GF !y;
gar g4: G !x;
"""

INC_BAD = """\
env boolean e;
sys boolean x;
sys boolean y;
gar g1: GF y;
gar g2: GF x;
gar g3: GF !y;
gar g4: G next(x) = next(e);
"""


def family_text(variant: Variant | str, n: int = 16) -> str:
    v = Variant(variant)
    if v == Variant.EFP_GOOD:
        return _efp(n, reverse=False)
    if v == Variant.EFP_BAD:
        return _efp(n, reverse=True)
    if v == Variant.EUN_GOOD:
        return _eun(n, good=True)
    if v == Variant.EUN_BAD:
        return _eun(n, good=False)
    if v == Variant.FPR_GOOD:
        return _fpr(n, good=True)
    if v == Variant.FPR_BAD:
        return _fpr(n, good=False)
    if v == Variant.DEADLOCK:
        return _deadlock(n)
    return {Variant.DD_GOOD: DD_GOOD, Variant.DD_BAD: DD_BAD,
            Variant.INC_GOOD: INC_GOOD, Variant.INC_BAD: INC_BAD}[v]


def generate_counter_family(n: int, variant: Variant | str) -> Specification:
    """Reconstruction of one example family scaled to ``n``."""
    return parse_spec(family_text(variant, n))
