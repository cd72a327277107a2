"""Explicit-state game used as a brute-force oracle.

States are integers whose bit ``k`` is the ``k``-th state bit in
declaration order (variables in order, each variable's bits least
significant first).  This matches ``DDManager.to_mask`` over the current
levels of a freshly compiled game.

Expressions are evaluated with numpy straight from the AST, so nothing
here shares code with the symbolic compiler.  The system transition
relation is kept as a sparse edge list built chunk by chunk; the
environment relation is a dense ``[state, env input]`` table.
"""

from __future__ import annotations

import numpy as np

from ..speclang import (
    Arith, BinBool, BoolArrayType, BoolLit, BoolType, Compare, IntLit,
    IntRangeType, Kind, Not, Specification, Temporal, VarRef, default_completion,
)

MAX_BITS = 24
MAX_CELLS = 1 << 27
CHUNK_CELLS = 1 << 22


class _Values:
    """Variable values for a batch of current and next states."""

    def __init__(self, spec, cur_idx, nxt_idx, offsets, nxt_offsets):
        self.spec = spec
        self.cur_idx = cur_idx
        self.nxt_idx = nxt_idx
        self.offsets = offsets
        self.nxt_offsets = nxt_offsets

    def raw(self, name, primed):
        d = self.spec.decl(name)
        idx, offs = (self.nxt_idx, self.nxt_offsets) if primed else (self.cur_idx, self.offsets)
        base = offs[name]
        return (idx >> base) & ((1 << d.nbits) - 1)

    def ref(self, r: VarRef):
        d = self.spec.decl(r.name)
        raw = self.raw(r.name, r.primed)
        if isinstance(d.vtype, BoolType):
            return raw.astype(bool)
        if isinstance(d.vtype, BoolArrayType):
            return ((raw >> r.index) & 1).astype(bool)
        return raw.astype(np.int64) + d.vtype.lo


def _eval(e, vals: _Values):
    if isinstance(e, BoolLit):
        return np.bool_(e.value)
    if isinstance(e, IntLit):
        return np.int64(e.value)
    if isinstance(e, VarRef):
        return vals.ref(e)
    if isinstance(e, Not):
        return np.logical_not(_eval(e.arg, vals))
    if isinstance(e, Arith):
        a, b = _eval(e.left, vals), _eval(e.right, vals)
        return a + b if e.op == "+" else a - b
    if isinstance(e, BinBool):
        a, b = _eval(e.left, vals), _eval(e.right, vals)
        if e.op == "&":
            return a & b
        if e.op == "|":
            return a | b
        if e.op == "->":
            return ~a | b
        return a == b
    if isinstance(e, Compare):
        a, b = _eval(e.left, vals), _eval(e.right, vals)
        r = {"=": np.equal, "!=": np.not_equal, "<": np.less, "<=": np.less_equal,
             ">": np.greater, ">=": np.greater_equal}[e.op](a, b)
        for var, other in ((e.left, e.right), (e.right, e.left)):
            if isinstance(var, VarRef) and isinstance(other, Arith):
                t = vals.spec.decl(var.name).vtype
                if isinstance(t, IntRangeType):
                    v = b if other is e.right else a
                    r = r & (v >= t.lo) & (v <= t.hi)
        return r
    raise TypeError(e)


class ExplicitGame:
    """All assignments of a specification with its relations as arrays."""

    def __init__(self, spec: Specification):
        spec = default_completion(spec)
        self.spec = spec
        self.bits = spec.state_bits
        if self.bits > MAX_BITS:
            raise ValueError(f"{self.bits} state bits exceed the explicit-state cap of {MAX_BITS}")
        self.Q = 1 << self.bits
        self.offsets = {}
        pos = 0
        for d in spec.decls:
            self.offsets[d.name] = pos
            pos += d.nbits
        self.env_bits = [self.offsets[d.name] + k for d in spec.decls
                         if d.owner.value == "env" for k in range(d.nbits)]
        self.NX = 1 << len(self.env_bits)
        if self.Q * self.NX > MAX_CELLS:
            raise ValueError("environment relation too large for the explicit oracle")
        states = np.arange(self.Q, dtype=np.int64)
        # env-only offsets: env vars packed consecutively in an env index
        self.env_offsets = {}
        p = 0
        for d in spec.decls:
            if d.owner.value == "env":
                self.env_offsets[d.name] = p
                p += d.nbits
        self.env_of = np.zeros(self.Q, dtype=np.int64)
        for k, b in enumerate(self.env_bits):
            self.env_of |= ((states >> b) & 1) << k

        cur = _Values(spec, states, states, self.offsets, self.offsets)
        self.dom_env = self._domain(cur, ("env",), False)
        self.domain = self._domain(cur, ("env", "sys"), False)
        self.theta_e = self._conj(Kind.ASM, Temporal.INIT, cur) & self.dom_env
        self.theta_s = self._conj(Kind.GAR, Temporal.INIT, cur) & self.domain
        self.J_e = [np.broadcast_to(_eval(c.expr, cur), (self.Q,)).copy()
                    for c in spec.select(Kind.ASM, Temporal.JUSTICE)]
        self.J_s = [np.broadcast_to(_eval(c.expr, cur), (self.Q,)).copy()
                    for c in spec.select(Kind.GAR, Temporal.JUSTICE)]
        self.rho_e = self._build_rho_e()
        self.src, self.dst = self._build_rho_s()

    # construction

    def _domain(self, vals, owners, primed):
        r = np.ones(self.Q, dtype=bool)
        for d in self.spec.decls:
            if d.owner.value in owners and isinstance(d.vtype, IntRangeType):
                r &= vals.raw(d.name, primed) <= d.vtype.hi - d.vtype.lo
        return r

    def _conj(self, kind, temporal, vals, shape=None):
        shape = shape or (self.Q,)
        r = np.ones(shape, dtype=bool)
        for c in self.spec.select(kind, temporal):
            r &= np.broadcast_to(_eval(c.expr, vals), shape)
        return r

    def _build_rho_e(self):
        states = np.arange(self.Q, dtype=np.int64)[:, None]
        env_idx = np.arange(self.NX, dtype=np.int64)[None, :]
        vals = _Values(self.spec, states, env_idx, self.offsets, self.env_offsets)
        r = self._conj(Kind.ASM, Temporal.SAFETY, vals, (self.Q, self.NX))
        r &= self.domain[:, None]
        for d in self.spec.decls:
            if d.owner.value == "env" and isinstance(d.vtype, IntRangeType):
                r &= vals.raw(d.name, True) <= d.vtype.hi - d.vtype.lo
        return r

    def _build_rho_s(self):
        rows = max(1, CHUNK_CELLS // self.Q)
        nxt = np.arange(self.Q, dtype=np.int64)[None, :]
        srcs, dsts = [], []
        total = 0
        for start in range(0, self.Q, rows):
            cur = np.arange(start, min(self.Q, start + rows), dtype=np.int64)[:, None]
            vals = _Values(self.spec, cur, nxt, self.offsets, self.offsets)
            r = self._conj(Kind.GAR, Temporal.SAFETY, vals, (cur.shape[0], self.Q))
            r &= self.domain[cur[:, 0]][:, None] & self.domain[None, :]
            s, t = np.nonzero(r)
            total += len(s)
            if total > MAX_CELLS:
                raise ValueError("system relation too large for the explicit oracle")
            srcs.append(s + start)
            dsts.append(t)
        return np.concatenate(srcs), np.concatenate(dsts)

    # dense views for small games

    def rho_s_dense(self) -> np.ndarray:
        r = np.zeros((self.Q, self.Q), dtype=bool)
        r[self.src, self.dst] = True
        return r

    def successors(self, q: int) -> np.ndarray:
        lo, hi = np.searchsorted(self.src, [q, q + 1])
        return self.dst[lo:hi]

    # controlled predecessors

    def _hits(self, R: np.ndarray) -> np.ndarray:
        """hits[q, x'] = some sys response to input x' from q lands in R."""
        good = R[self.dst]
        ok = np.zeros(self.Q * self.NX, dtype=bool)
        ok[self.src[good] * self.NX + self.env_of[self.dst[good]]] = True
        return ok.reshape(self.Q, self.NX)

    def cpre_sys(self, R: np.ndarray) -> np.ndarray:
        return np.all(~self.rho_e | self._hits(R), axis=1)

    def cpre_env(self, R: np.ndarray) -> np.ndarray:
        return np.any(self.rho_e & ~self._hits(~R), axis=1)

    # fixed points by direct evaluation of the mu-calculus formulas

    def win_sys(self) -> np.ndarray:
        full = np.ones(self.Q, dtype=bool)
        Z = full
        while True:
            cz = self.cpre_sys(Z)
            newZ = full
            for js in self.J_s:
                Y = np.zeros(self.Q, dtype=bool)
                while True:
                    cy = self.cpre_sys(Y)
                    nY = np.zeros(self.Q, dtype=bool)
                    for je in self.J_e:
                        X = full
                        while True:
                            nX = (js & cz) | cy | (~je & self.cpre_sys(X))
                            if np.array_equal(nX, X):
                                break
                            X = nX
                        nY |= X
                    if np.array_equal(nY, Y):
                        break
                    Y = nY
                newZ = newZ & Y
            if np.array_equal(newZ, Z):
                return Z
            Z = newZ

    def win_env(self) -> np.ndarray:
        empty = np.zeros(self.Q, dtype=bool)
        Z = empty
        while True:
            cz = self.cpre_env(Z)
            newZ = empty
            for js in self.J_s:
                Y = np.ones(self.Q, dtype=bool)
                while True:
                    cy = self.cpre_env(Y)
                    nY = np.ones(self.Q, dtype=bool)
                    for je in self.J_e:
                        X = empty
                        while True:
                            nX = (~js | cz) & cy & (je | self.cpre_env(X))
                            if np.array_equal(nX, X):
                                break
                            X = nX
                        nY &= X
                    if np.array_equal(nY, Y):
                        break
                    Y = nY
                newZ = newZ | Y
            if np.array_equal(newZ, Z):
                return Z
            Z = newZ

    def initial_win_sys(self, W: np.ndarray) -> bool:
        ok = np.zeros(self.NX, dtype=bool)
        hit = self.theta_s & W
        ok[self.env_of[hit]] = True
        init_env = np.zeros(self.NX, dtype=bool)
        init_env[self.env_of[self.theta_e]] = True
        return bool(np.all(~init_env | ok))

    def initial_win_env(self, W: np.ndarray) -> bool:
        escape = np.zeros(self.NX, dtype=bool)
        escape[self.env_of[self.theta_s & ~W]] = True
        init_env = np.zeros(self.NX, dtype=bool)
        init_env[self.env_of[self.theta_e]] = True
        return bool(np.any(init_env & ~escape))

    def decode(self, q: int) -> dict:
        out = {}
        for d in self.spec.decls:
            raw = (q >> self.offsets[d.name]) & ((1 << d.nbits) - 1)
            if isinstance(d.vtype, BoolType):
                out[d.name] = bool(raw)
            elif isinstance(d.vtype, BoolArrayType):
                out[d.name] = [bool((raw >> k) & 1) for k in range(d.nbits)]
            else:
                out[d.name] = d.vtype.lo + raw
        return out
