"""Parser for the specification language.

A specification is a sequence of ``;``-terminated declarations and
constraints::

    env Int(0..15) c;
    sys boolean[4] a;
    asm G next(c) != c;
    gar g1: GF a[0] & a[1];

Constraints without a temporal operator are initial constraints, ``G``
marks a safety constraint and ``GF`` a justice constraint.  Line comments
start with ``//``.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field, replace
from typing import Iterable, Union


class SpecError(ValueError):
    """Lexical, syntax, name, or type error with a source position."""

    def __init__(self, kind: str, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {kind}: {message}")
        self.kind = kind
        self.message = message
        self.line = line
        self.col = col


class Owner(enum.Enum):
    ENV = "env"
    SYS = "sys"


class Kind(enum.Enum):
    ASM = "asm"
    GAR = "gar"


class Temporal(enum.Enum):
    INIT = ""
    SAFETY = "G"
    JUSTICE = "GF"


# -- types ----------------------------------------------------------------


@dataclass(frozen=True)
class BoolType:
    def __str__(self):
        return "boolean"


@dataclass(frozen=True)
class BoolArrayType:
    length: int

    def __str__(self):
        return f"boolean[{self.length}]"


@dataclass(frozen=True)
class IntRangeType:
    lo: int
    hi: int

    @property
    def nbits(self) -> int:
        return max(1, (self.hi - self.lo).bit_length())

    def __str__(self):
        return f"Int({self.lo}..{self.hi})"


VarType = Union[BoolType, BoolArrayType, IntRangeType]


def type_bits(t: VarType) -> int:
    if isinstance(t, BoolType):
        return 1
    if isinstance(t, BoolArrayType):
        return t.length
    return t.nbits


@dataclass(frozen=True)
class VarDecl:
    owner: Owner
    name: str
    vtype: VarType

    @property
    def nbits(self) -> int:
        return type_bits(self.vtype)


# -- expressions ------------------------------------------------------------


@dataclass(frozen=True)
class VarRef:
    name: str
    index: int | None = None
    primed: bool = False
    pos: tuple = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class IntLit:
    value: int


@dataclass(frozen=True)
class BoolLit:
    value: bool


@dataclass(frozen=True)
class Not:
    arg: "Expr"


@dataclass(frozen=True)
class BinBool:
    op: str  # one of & | -> <->
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Compare:
    op: str  # one of = != < <= > >=
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Arith:
    op: str  # + or -
    left: "Expr"
    right: "Expr"


Expr = Union[VarRef, IntLit, BoolLit, Not, BinBool, Compare, Arith]


@dataclass(frozen=True)
class Constraint:
    kind: Kind
    temporal: Temporal
    name: str
    expr: Expr
    synthetic: bool = False


@dataclass(frozen=True)
class Specification:
    decls: tuple[VarDecl, ...]
    constraints: tuple[Constraint, ...]

    def decl(self, name: str) -> VarDecl:
        for d in self.decls:
            if d.name == name:
                return d
        raise KeyError(name)

    def select(self, kind: Kind, temporal: Temporal | None = None) -> list[Constraint]:
        return [c for c in self.constraints
                if c.kind == kind and (temporal is None or c.temporal == temporal)]

    @property
    def guarantee_names(self) -> list[str]:
        """Names of the user-written guarantees, in declaration order."""
        return [c.name for c in self.constraints if c.kind == Kind.GAR and not c.synthetic]

    def restrict_guarantees(self, keep: Iterable[str]) -> "Specification":
        """Copy with all assumptions and only the named guarantees."""
        keep = set(keep)
        unknown = keep - set(self.guarantee_names)
        if unknown:
            raise KeyError(f"unknown guarantees: {sorted(unknown)}")
        kept = tuple(c for c in self.constraints
                     if c.kind == Kind.ASM or (c.name in keep and not c.synthetic))
        return Specification(self.decls, kept)

    @property
    def state_bits(self) -> int:
        return sum(d.nbits for d in self.decls)


# -- lexer --------------------------------------------------------------------

KEYWORDS = {"env", "sys", "asm", "gar", "G", "GF", "next", "boolean", "Int", "true", "false"}

_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>//[^\n]*)
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op><->|->|\.\.|!=|<=|>=|[!&|=<>+\-()\[\];:])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str  # int ident kw op eof
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    line, line_start, i = 1, 0, 0
    while i < len(text):
        m = _TOKEN_RE.match(text, i)
        if m is None:
            raise SpecError("lexical error", f"unexpected character {text[i]!r}",
                            line, i - line_start + 1)
        kind = m.lastgroup
        col = i - line_start + 1
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "ident":
            tokens.append(Token("kw" if m.group() in KEYWORDS else "ident", m.group(), line, col))
        elif kind in ("int", "op"):
            tokens.append(Token(kind, m.group(), line, col))
        i = m.end()
    tokens.append(Token("eof", "", line, i - line_start + 1))
    return tokens


# -- parser -------------------------------------------------------------------


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def error(self, msg: str, tok: Token | None = None, kind: str = "syntax error"):
        tok = tok or self.tok
        return SpecError(kind, msg, tok.line, tok.col)

    def accept(self, text: str) -> Token | None:
        if self.tok.text == text and self.tok.kind in ("kw", "op"):
            t = self.tok
            self.i += 1
            return t
        return None

    def expect(self, text: str) -> Token:
        t = self.accept(text)
        if t is None:
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        return t

    def expect_int(self) -> int:
        neg = self.accept("-") is not None
        if self.tok.kind != "int":
            raise self.error("expected an integer")
        v = int(self.tok.text)
        self.i += 1
        return -v if neg else v

    def expect_ident(self) -> Token:
        if self.tok.kind != "ident":
            raise self.error(f"expected an identifier, found {self.tok.text or 'end of input'!r}")
        t = self.tok
        self.i += 1
        return t

    # top level

    def parse(self):
        decls, raw = [], []
        while self.tok.kind != "eof":
            if self.tok.text in ("env", "sys") and self.tok.kind == "kw":
                decls.append(self.decl())
            elif self.tok.text in ("asm", "gar") and self.tok.kind == "kw":
                raw.append(self.constraint())
            else:
                raise self.error(f"expected a declaration or constraint, found {self.tok.text!r}")
        return decls, raw

    def decl(self):
        owner = Owner(self.tok.text)
        self.i += 1
        if self.accept("boolean"):
            if self.accept("["):
                t = self.tok
                n = self.expect_int()
                if n < 1:
                    raise self.error("array length must be positive", t, "type error")
                self.expect("]")
                vtype = BoolArrayType(n)
            else:
                vtype = BoolType()
        elif self.accept("Int"):
            self.expect("(")
            t = self.tok
            lo = self.expect_int()
            self.expect("..")
            hi = self.expect_int()
            self.expect(")")
            if hi < lo:
                raise self.error("empty integer range", t, "type error")
            vtype = IntRangeType(lo, hi)
        else:
            raise self.error("expected a type")
        name = self.expect_ident()
        self.expect(";")
        return VarDecl(owner, name.text, vtype), name

    def constraint(self):
        kw = self.tok
        kind = Kind(kw.text)
        self.i += 1
        name = None
        if self.tok.kind == "ident" and self.peek().text == ":":
            name = self.tok
            self.i += 2
        if self.accept("GF"):
            temporal = Temporal.JUSTICE
        elif self.accept("G"):
            temporal = Temporal.SAFETY
        else:
            temporal = Temporal.INIT
        expr = self.expr()
        self.expect(";")
        return kind, temporal, name, expr, kw

    # expressions, loosest first

    def expr(self):
        left = self.implication()
        while True:
            t = self.accept("<->")
            if t is None:
                return left
            left = BinBool("<->", left, self.implication())

    def implication(self):
        left = self.disjunction()
        if self.accept("->"):
            # right associative
            return BinBool("->", left, self.implication())
        return left

    def disjunction(self):
        left = self.conjunction()
        while self.accept("|"):
            left = BinBool("|", left, self.conjunction())
        return left

    def conjunction(self):
        left = self.negation()
        while self.accept("&"):
            left = BinBool("&", left, self.negation())
        return left

    def negation(self):
        if self.accept("!"):
            return Not(self.negation())
        return self.comparison()

    def comparison(self):
        left = self.sum()
        for op in ("=", "!=", "<=", ">=", "<", ">"):
            if self.accept(op):
                return Compare(op, left, self.sum())
        return left

    def sum(self):
        left = self.atom()
        while True:
            if self.accept("+"):
                left = Arith("+", left, self.atom())
            elif self.accept("-"):
                left = Arith("-", left, self.atom())
            else:
                return left

    def atom(self):
        t = self.tok
        if self.accept("("):
            e = self.expr()
            self.expect(")")
            return e
        if self.accept("true"):
            return BoolLit(True)
        if self.accept("false"):
            return BoolLit(False)
        if t.kind == "int" or (t.text == "-" and self.peek().kind == "int"):
            return IntLit(self.expect_int())
        if self.accept("next"):
            self.expect("(")
            if self.tok.text == "next":
                raise self.error("nested next is not allowed")
            ref = self.varref(primed=True)
            self.expect(")")
            return ref
        if t.kind == "ident":
            return self.varref(primed=False)
        raise self.error(f"unexpected {t.text or 'end of input'!r} in expression")

    def varref(self, primed: bool) -> VarRef:
        t = self.expect_ident()
        index = None
        if self.accept("["):
            index = self.expect_int()
            self.expect("]")
        return VarRef(t.text, index, primed, (t.line, t.col))


# -- checking -----------------------------------------------------------------


def _err(kind, msg, ref_or_tok):
    if isinstance(ref_or_tok, VarRef):
        line, col = ref_or_tok.pos
    else:
        line, col = ref_or_tok.line, ref_or_tok.col
    return SpecError(kind, msg, line, col)


def _first_pos(e: Expr):
    for r in iter_refs(e):
        return r
    return None


def iter_refs(e: Expr):
    """Yield every variable reference in ``e`` (left to right)."""
    if isinstance(e, VarRef):
        yield e
    elif isinstance(e, Not):
        yield from iter_refs(e.arg)
    elif isinstance(e, (BinBool, Compare, Arith)):
        yield from iter_refs(e.left)
        yield from iter_refs(e.right)


class _Checker:
    def __init__(self, decls: dict[str, VarDecl], kw: Token):
        self.decls = decls
        self.kw = kw

    def fail(self, msg, node):
        anchor = node if isinstance(node, VarRef) else (_first_pos(node) or self.kw)
        return _err("type error", msg, anchor)

    def type_of(self, e: Expr) -> str:
        if isinstance(e, BoolLit):
            return "bool"
        if isinstance(e, IntLit):
            return "int"
        if isinstance(e, VarRef):
            d = self.decls.get(e.name)
            if d is None:
                raise _err("unknown identifier", f"{e.name!r} is not declared", e)
            if isinstance(d.vtype, BoolArrayType):
                if e.index is None:
                    raise self.fail(f"array {e.name!r} used without an index", e)
                if not 0 <= e.index < d.vtype.length:
                    raise self.fail(f"index {e.index} out of bounds for {e.name!r}", e)
                return "bool"
            if e.index is not None:
                raise self.fail(f"{e.name!r} is not an array", e)
            return "int" if isinstance(d.vtype, IntRangeType) else "bool"
        if isinstance(e, Not):
            if self.type_of(e.arg) != "bool":
                raise self.fail("'!' needs a boolean operand", e.arg)
            return "bool"
        if isinstance(e, BinBool):
            for side in (e.left, e.right):
                if self.type_of(side) != "bool":
                    raise self.fail(f"{e.op!r} needs boolean operands", side)
            return "bool"
        if isinstance(e, Arith):
            for side in (e.left, e.right):
                if self.type_of(side) != "int":
                    raise self.fail(f"{e.op!r} needs integer operands", side)
            return "int"
        if isinstance(e, Compare):
            lt, rt = self.type_of(e.left), self.type_of(e.right)
            if lt != rt:
                raise self.fail("comparison mixes integer and boolean terms", e)
            if lt == "bool" and e.op not in ("=", "!="):
                raise self.fail(f"{e.op!r} needs integer operands", e)
            return "bool"
        raise TypeError(e)


def _check_constraint(decls, kind, temporal, expr, kw):
    checker = _Checker(decls, kw)
    if checker.type_of(expr) != "bool":
        raise checker.fail("constraint must be a boolean expression", expr)
    for ref in iter_refs(expr):
        d = decls[ref.name]
        if ref.primed and temporal != Temporal.SAFETY:
            raise _err("syntax error", "next is only allowed in safety constraints", ref)
        if kind == Kind.ASM and ref.primed and d.owner != Owner.ENV:
            raise _err("type error", f"assumption applies next to system variable {ref.name!r}", ref)
        if kind == Kind.ASM and temporal == Temporal.INIT and d.owner != Owner.ENV:
            raise _err("type error", f"initial assumption refers to system variable {ref.name!r}", ref)


def parse_spec(text: str) -> Specification:
    """Parse and check a specification text."""
    p = _Parser(text)
    raw_decls, raw_cons = p.parse()
    decls: dict[str, VarDecl] = {}
    for d, tok in raw_decls:
        if d.name in decls:
            raise _err("type error", f"variable {d.name!r} declared twice", tok)
        decls[d.name] = d
    constraints = []
    names = set()
    counters = {Kind.ASM: 0, Kind.GAR: 0}
    for kind, temporal, name_tok, expr, kw in raw_cons:
        _check_constraint(decls, kind, temporal, expr, kw)
        if name_tok is not None:
            name = name_tok.text
        else:
            name = f"{kind.value}_{counters[kind]}"
        counters[kind] += 1
        if name in names or name in decls:
            raise _err("type error", f"name {name!r} used twice", name_tok or kw)
        names.add(name)
        constraints.append(Constraint(kind, temporal, name, expr))
    return Specification(tuple(decls.values()), tuple(constraints))


DEFAULT_ASM = "__asm_justice_default"
DEFAULT_GAR = "__gar_justice_default"


def default_completion(spec: Specification) -> Specification:
    """Append a trivially-true justice on either side that has none."""
    extra = []
    if not spec.select(Kind.ASM, Temporal.JUSTICE):
        extra.append(Constraint(Kind.ASM, Temporal.JUSTICE, DEFAULT_ASM, BoolLit(True), True))
    if not spec.select(Kind.GAR, Temporal.JUSTICE):
        extra.append(Constraint(Kind.GAR, Temporal.JUSTICE, DEFAULT_GAR, BoolLit(True), True))
    if not extra:
        return spec
    return replace(spec, constraints=spec.constraints + tuple(extra))


# -- printing -----------------------------------------------------------------


def format_expr(e: Expr) -> str:
    if isinstance(e, BoolLit):
        return "true" if e.value else "false"
    if isinstance(e, IntLit):
        return str(e.value)
    if isinstance(e, VarRef):
        s = e.name if e.index is None else f"{e.name}[{e.index}]"
        return f"next({s})" if e.primed else s
    if isinstance(e, Not):
        return f"!{_wrap(e.arg)}"
    return f"{_wrap(e.left)} {e.op} {_wrap(e.right)}"


def _wrap(e: Expr) -> str:
    s = format_expr(e)
    if isinstance(e, (BinBool, Compare, Arith)) or (isinstance(e, IntLit) and e.value < 0):
        return f"({s})"
    return s


def format_spec(spec: Specification) -> str:
    lines = [f"{d.owner.value} {d.vtype} {d.name};" for d in spec.decls]
    for c in spec.constraints:
        if c.synthetic:
            continue
        prefix = f"{c.temporal.value} " if c.temporal.value else ""
        lines.append(f"{c.kind.value} {c.name}: {prefix}{format_expr(c.expr)};")
    return "\n".join(lines) + "\n"
