"""Symbolic game structure and controlled predecessors.

``compile`` turns a specification into BDDs over a :class:`DDManager`.
Integer terms become two's-complement bit vectors whose width is derived
from the interval of values the term can take, so sums and differences
never overflow.  Integer variables are stored offset-binary and every
bit pattern outside the declared range is removed by domain constraints
conjoined into the initial conditions and both transition relations.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .speclang import (
    Arith, BinBool, BoolArrayType, BoolLit, BoolType, Compare, Expr, IntLit,
    IntRangeType, Kind, Not, Specification, Temporal, VarRef, default_completion,
)
from .symcore import DDManager, SymbolicSet


def _width(lo: int, hi: int) -> int:
    w = 1
    while not (-(1 << (w - 1)) <= lo and hi < (1 << (w - 1))):
        w += 1
    return w


@dataclass
class _Vec:
    bits: list  # two's complement, least significant first
    lo: int
    hi: int


class ExprCompiler:
    """Compile expressions of one specification into symbolic sets."""

    def __init__(self, spec: Specification, mgr: DDManager):
        self.spec = spec
        self.mgr = mgr
        self.decls = {d.name: d for d in spec.decls}

    # bit vectors

    def _const(self, v: int) -> _Vec:
        m = self.mgr
        return _Vec([m.true if (v >> k) & 1 else m.false for k in range(_width(v, v))], v, v)

    @staticmethod
    def _fit(vec: _Vec, w: int) -> list:
        bits = vec.bits[:w]
        return bits + [bits[-1]] * (w - len(bits))

    def _addsub(self, a: _Vec, b: _Vec, sub: bool) -> _Vec:
        lo, hi = (a.lo - b.hi, a.hi - b.lo) if sub else (a.lo + b.lo, a.hi + b.hi)
        w = _width(lo, hi)
        xs, ys = self._fit(a, w), self._fit(b, w)
        carry = self.mgr.true if sub else self.mgr.false
        out = []
        for x, y in zip(xs, ys):
            if sub:
                y = ~y
            t = x ^ y
            out.append(t ^ carry)
            carry = (x & y) | (carry & t)
        return _Vec(out, lo, hi)

    def _var_vec(self, ref: VarRef) -> _Vec:
        d = self.decls[ref.name]
        t = d.vtype
        bits = [self.mgr.bit(ref.name, k, ref.primed) for k in range(d.nbits)]
        raw = _Vec(bits + [self.mgr.false], 0, (1 << d.nbits) - 1)
        if t.lo == 0:
            return _Vec(raw.bits, 0, t.hi)
        v = self._addsub(raw, self._const(t.lo), sub=False)
        return _Vec(v.bits, t.lo, t.hi)

    def term(self, e: Expr) -> _Vec:
        if isinstance(e, IntLit):
            return self._const(e.value)
        if isinstance(e, VarRef):
            return self._var_vec(e)
        if isinstance(e, Arith):
            return self._addsub(self.term(e.left), self.term(e.right), e.op == "-")
        raise TypeError(f"not an integer term: {e!r}")

    def _cmp_vec(self, op: str, a: _Vec, b: _Vec) -> SymbolicSet:
        d = self._addsub(a, b, sub=True)
        if d.lo > 0 or d.hi < 0:
            lt = self.mgr.true if d.hi < 0 else self.mgr.false
            eq = self.mgr.false
        else:
            lt = d.bits[-1]
            nz = self.mgr.false
            for bit in d.bits:
                nz = nz | bit
            eq = ~nz
        if op == "=":
            return eq
        if op == "!=":
            return ~eq
        if op == "<":
            return lt
        if op == "<=":
            return lt | eq
        if op == ">":
            return ~(lt | eq)
        return ~lt

    def _in_range(self, vec: _Vec, lo: int, hi: int) -> SymbolicSet:
        return self._cmp_vec(">=", vec, self._const(lo)) & self._cmp_vec("<=", vec, self._const(hi))

    def _is_int(self, e: Expr) -> bool:
        if isinstance(e, (IntLit, Arith)):
            return True
        return isinstance(e, VarRef) and isinstance(self.decls[e.name].vtype, IntRangeType)

    # boolean expressions

    def expr(self, e: Expr) -> SymbolicSet:
        m = self.mgr
        if isinstance(e, BoolLit):
            return m.true if e.value else m.false
        if isinstance(e, VarRef):
            return m.bit(e.name, e.index or 0, e.primed)
        if isinstance(e, Not):
            return ~self.expr(e.arg)
        if isinstance(e, BinBool):
            a, b = self.expr(e.left), self.expr(e.right)
            if e.op == "&":
                return a & b
            if e.op == "|":
                return a | b
            if e.op == "->":
                return a.implies(b)
            return ~(a ^ b)
        if isinstance(e, Compare):
            if not self._is_int(e.left):
                a, b = self.expr(e.left), self.expr(e.right)
                return ~(a ^ b) if e.op == "=" else a ^ b
            a, b = self.term(e.left), self.term(e.right)
            r = self._cmp_vec(e.op, a, b)
            # a compound term compared with a variable must stay in its range
            for var, other in ((e.left, e.right), (e.right, e.left)):
                if isinstance(var, VarRef) and isinstance(other, Arith):
                    t = self.decls[var.name].vtype
                    r = r & self._in_range(b if other is e.right else a, t.lo, t.hi)
            return r
        raise TypeError(f"cannot compile {e!r}")

    def domain(self, owners: tuple[str, ...], primed: bool) -> SymbolicSet:
        """Valid bit patterns of the integer variables of the given owners."""
        r = self.mgr.true
        for d in self.spec.decls:
            if d.owner.value not in owners or not isinstance(d.vtype, IntRangeType):
                continue
            span = d.vtype.hi - d.vtype.lo
            if span + 1 == 1 << d.nbits:
                continue
            raw = _Vec([self.mgr.bit(d.name, k, primed) for k in range(d.nbits)]
                       + [self.mgr.false], 0, (1 << d.nbits) - 1)
            r = r & self._cmp_vec("<=", raw, self._const(span))
        return r


@dataclass
class GameStructure:
    """θe, θs, ρe, ρs and the justice lists of a compiled specification."""

    mgr: DDManager
    spec: Specification
    theta_e: SymbolicSet
    theta_s: SymbolicSet
    rho_e: SymbolicSet
    rho_s: SymbolicSet
    J_e: list
    J_s: list
    J_e_names: list
    J_s_names: list
    domain: SymbolicSet  # valid current states
    env_levels: tuple = field(default=())
    sys_levels: tuple = field(default=())

    @property
    def n(self) -> int:
        return len(self.J_e)

    @property
    def m(self) -> int:
        return len(self.J_s)

    @property
    def state_levels(self) -> tuple:
        return tuple(sorted(self.env_levels + self.sys_levels))


def compile(spec: Specification, manager: DDManager | None = None) -> GameStructure:
    """Build the symbolic game for ``spec`` (completed first if needed)."""
    spec = default_completion(spec)
    mgr = manager if manager is not None else DDManager()
    for d in spec.decls:
        mgr.declare(d.name, d.owner.value, d.nbits)
    ec = ExprCompiler(spec, mgr)

    def conj(kind, temporal):
        r = mgr.true
        for c in spec.select(kind, temporal):
            r = r & ec.expr(c.expr)
        return r

    dom_env = ec.domain(("env",), False)
    dom_cur = ec.domain(("env", "sys"), False)
    dom_env_next = ec.domain(("env",), True)
    dom_next = ec.domain(("env", "sys"), True)

    theta_e = conj(Kind.ASM, Temporal.INIT) & dom_env
    theta_s = conj(Kind.GAR, Temporal.INIT) & dom_cur
    rho_e = conj(Kind.ASM, Temporal.SAFETY) & dom_cur & dom_env_next
    rho_s = conj(Kind.GAR, Temporal.SAFETY) & dom_cur & dom_next
    je = spec.select(Kind.ASM, Temporal.JUSTICE)
    js = spec.select(Kind.GAR, Temporal.JUSTICE)
    return GameStructure(
        mgr=mgr, spec=spec,
        theta_e=theta_e, theta_s=theta_s, rho_e=rho_e, rho_s=rho_s,
        J_e=[ec.expr(c.expr) for c in je], J_s=[ec.expr(c.expr) for c in js],
        J_e_names=[c.name for c in je], J_s_names=[c.name for c in js],
        domain=dom_cur,
        env_levels=tuple(lv for d in spec.decls if d.owner.value == "env"
                         for lv in mgr.var_levels(d.name)),
        sys_levels=tuple(lv for d in spec.decls if d.owner.value == "sys"
                         for lv in mgr.var_levels(d.name)),
    )


def _levels(g: GameStructure, owner: str, primed: bool) -> tuple:
    base = g.env_levels if owner == "env" else g.sys_levels
    return tuple(lv + int(primed) for lv in base)


def cpre_sys(g: GameStructure, R: SymbolicSet) -> SymbolicSet:
    """States from which the system can force the next state into ``R``."""
    m = g.mgr
    inner = m.and_exists(_levels(g, "sys", True), g.rho_s, m.prime_swap(R))
    return m.forall(_levels(g, "env", True), g.rho_e.implies(inner))


def cpre_env(g: GameStructure, R: SymbolicSet) -> SymbolicSet:
    """States from which the environment can force the next state into ``R``."""
    m = g.mgr
    escape = m.and_exists(_levels(g, "sys", True), g.rho_s, ~m.prime_swap(R))
    return m.and_exists(_levels(g, "env", True), g.rho_e, ~escape)


def check_initial_win_sys(g: GameStructure, W: SymbolicSet) -> bool:
    """True iff for every initial input some initial output lies in ``W``."""
    m = g.mgr
    ok = m.and_exists(g.sys_levels, g.theta_s, W)
    return m.forall(g.env_levels, g.theta_e.implies(ok)).is_true()


def check_initial_win_env(g: GameStructure, W: SymbolicSet) -> bool:
    """True iff some initial input puts every initial output in ``W``."""
    m = g.mgr
    forced = m.forall(g.sys_levels, g.theta_s.implies(W))
    return not m.and_exists(g.env_levels, g.theta_e, forced).is_false()


def decode_state(g: GameStructure, assignment: dict[int, bool], primed: bool = False) -> dict:
    """Variable values of a level assignment."""
    out = {}
    for d in g.spec.decls:
        lv = g.mgr.var_levels(d.name, primed)
        bits = [bool(assignment.get(x, False)) for x in lv]
        if isinstance(d.vtype, BoolType):
            out[d.name] = bits[0]
        elif isinstance(d.vtype, BoolArrayType):
            out[d.name] = bits
        else:
            out[d.name] = d.vtype.lo + sum(1 << k for k, b in enumerate(bits) if b)
    return out


def encode_values(g: GameStructure, values: dict, primed: bool = False) -> dict[int, bool]:
    """Level assignment for the given variable values (inverse of decode_state)."""
    out = {}
    for d in g.spec.decls:
        if d.name not in values:
            continue
        lv = g.mgr.var_levels(d.name, primed)
        v = values[d.name]
        if isinstance(d.vtype, BoolType):
            bits = [bool(v)]
        elif isinstance(d.vtype, BoolArrayType):
            bits = [bool(b) for b in v]
        else:
            raw = v - d.vtype.lo
            bits = [bool((raw >> k) & 1) for k in range(d.nbits)]
        out.update(zip(lv, bits))
    return out
