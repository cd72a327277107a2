"""Symbolic sets over declared bit-variables.

A :class:`DDManager` owns one kernel.  Every declared bit gets two
adjacent levels, the current copy at an even level and its primed twin
right after it.  Variables are laid out in declaration order with their
bits consecutive (least significant bit first).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import _pykernel

AND = _pykernel.AND
OR = _pykernel.OR
XOR = _pykernel.XOR
IMPLIES = _pykernel.IMPLIES
DIFF = _pykernel.DIFF

_OP_NAMES = {"AND": AND, "OR": OR, "XOR": XOR, "IMPLIES": IMPLIES, "DIFF": DIFF}


class ManagerMismatch(ValueError):
    """Raised when sets from two different managers are combined."""


class Owner(enum.Enum):
    ENV = "env"
    SYS = "sys"


@dataclass(frozen=True)
class VarInfo:
    """Bit layout of one declared variable."""

    name: str
    owner: Owner
    nbits: int
    first_bit: int

    @property
    def bits(self) -> range:
        return range(self.first_bit, self.first_bit + self.nbits)

    def levels(self, primed: bool = False) -> list[int]:
        return [2 * b + int(primed) for b in self.bits]


class SymbolicSet:
    """A set of assignments, held as a root node of its manager."""

    __slots__ = ("mgr", "node")

    def __init__(self, mgr: "DDManager", node: int):
        self.mgr = mgr
        self.node = node

    def _check(self, other: "SymbolicSet") -> None:
        if other.mgr is not self.mgr:
            raise ManagerMismatch("sets belong to different managers")

    def __and__(self, other):
        self._check(other)
        return SymbolicSet(self.mgr, self.mgr.kernel.apply(AND, self.node, other.node))

    def __or__(self, other):
        self._check(other)
        return SymbolicSet(self.mgr, self.mgr.kernel.apply(OR, self.node, other.node))

    def __xor__(self, other):
        self._check(other)
        return SymbolicSet(self.mgr, self.mgr.kernel.apply(XOR, self.node, other.node))

    def __sub__(self, other):
        self._check(other)
        return SymbolicSet(self.mgr, self.mgr.kernel.apply(DIFF, self.node, other.node))

    def __invert__(self):
        return SymbolicSet(self.mgr, self.mgr.kernel.neg(self.node))

    def implies(self, other):
        self._check(other)
        return SymbolicSet(self.mgr, self.mgr.kernel.apply(IMPLIES, self.node, other.node))

    def __le__(self, other):
        self._check(other)
        return self.mgr.kernel.apply(DIFF, self.node, other.node) == 0

    def __ge__(self, other):
        return other <= self

    def __eq__(self, other):
        if not isinstance(other, SymbolicSet):
            return NotImplemented
        return self.mgr is other.mgr and self.node == other.node

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    def __hash__(self):
        return hash((id(self.mgr), self.node))

    def __bool__(self):
        raise TypeError("use is_false()/is_true() to test a symbolic set")

    def is_false(self) -> bool:
        return self.node == 0

    def is_true(self) -> bool:
        return self.node == 1

    def __repr__(self):
        if self.node < 2:
            return f"SymbolicSet({'TRUE' if self.node else 'FALSE'})"
        return f"SymbolicSet(node={self.node})"


@dataclass
class DDManager:
    """Owns a kernel plus the variable registry and the named bit groups."""

    kernel: object = None
    vars: dict = field(default_factory=dict)
    _nbits: int = 0
    _qids: dict = field(default_factory=dict)
    _rids: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kernel is None:
            from . import Kernel
            self.kernel = Kernel(0)
        self.true = SymbolicSet(self, 1)
        self.false = SymbolicSet(self, 0)

    # -- declarations ----------------------------------------------------

    @property
    def backend(self) -> str:
        return self.kernel.backend

    @property
    def nbits(self) -> int:
        return self._nbits

    def declare(self, name: str, owner: Owner | str, nbits: int) -> VarInfo:
        owner = Owner(owner) if not isinstance(owner, Owner) else owner
        if nbits < 1:
            raise ValueError("a variable needs at least one bit")
        old = self.vars.get(name)
        if old is not None:
            if old.owner != owner or old.nbits != nbits:
                raise ValueError(f"variable {name!r} redeclared with a different shape")
            return old
        info = VarInfo(name, owner, nbits, self._nbits)
        self.vars[name] = info
        self._nbits += nbits
        self.kernel.add_levels(2 * nbits)
        # cached groups depend on the declared bits
        self._qids.clear()
        self._rids.clear()
        return info

    def bit(self, name: str, k: int = 0, primed: bool = False) -> SymbolicSet:
        info = self.vars[name]
        if not 0 <= k < info.nbits:
            raise IndexError(f"bit {k} of {name!r} out of range")
        return SymbolicSet(self, self.kernel.var(2 * (info.first_bit + k) + int(primed)))

    def group(self, which: str | Iterable[int]) -> tuple[int, ...]:
        """Levels of a named group.

        Named groups: ``env``, ``sys``, ``env'``, ``sys'``, ``cur``,
        ``next`` and ``all``.  Any iterable of levels passes through.
        """
        if not isinstance(which, str):
            levels = tuple(sorted(set(which)))
            for lvl in levels:
                if not 0 <= lvl < 2 * self._nbits:
                    raise ValueError(f"unknown variable level {lvl}")
            return levels
        primed = which.endswith("'") or which == "next"
        base = which.rstrip("'")
        out = []
        for info in self.vars.values():
            if base in ("env", "sys") and info.owner.value != base:
                continue
            if base not in ("env", "sys", "cur", "next", "all"):
                raise ValueError(f"unknown variable group {which!r}")
            if base == "all":
                out.extend(info.levels(False))
                out.extend(info.levels(True))
            else:
                out.extend(info.levels(primed))
        return tuple(sorted(out))

    def var_levels(self, name: str, primed: bool = False) -> list[int]:
        return self.vars[name].levels(primed)

    # -- operations ----------------------------------------------------

    def apply(self, op: str | int, a: SymbolicSet, b: SymbolicSet) -> SymbolicSet:
        code = _OP_NAMES[op] if isinstance(op, str) else op
        if a.mgr is not self or b.mgr is not self:
            raise ManagerMismatch("sets belong to a different manager")
        return SymbolicSet(self, self.kernel.apply(code, a.node, b.node))

    def _qid(self, levels: tuple[int, ...]) -> int:
        qid = self._qids.get(levels)
        if qid is None:
            qid = self.kernel.register_qset(levels)
            self._qids[levels] = qid
        return qid

    def exists(self, which, s: SymbolicSet) -> SymbolicSet:
        if s.mgr is not self:
            raise ManagerMismatch("set belongs to a different manager")
        return SymbolicSet(self, self.kernel.exists(s.node, self._qid(self.group(which))))

    def forall(self, which, s: SymbolicSet) -> SymbolicSet:
        k = self.kernel
        qid = self._qid(self.group(which))
        return SymbolicSet(self, k.neg(k.exists(k.neg(s.node), qid)))

    def quantify(self, kind: str, which, s: SymbolicSet) -> SymbolicSet:
        if kind.upper() == "EXISTS":
            return self.exists(which, s)
        if kind.upper() == "FORALL":
            return self.forall(which, s)
        raise ValueError(f"unknown quantifier {kind!r}")

    def and_exists(self, which, a: SymbolicSet, b: SymbolicSet) -> SymbolicSet:
        """``EXISTS(which, a & b)`` without building the conjunction."""
        if a.mgr is not self or b.mgr is not self:
            raise ManagerMismatch("sets belong to a different manager")
        return SymbolicSet(self, self.kernel.and_exists(a.node, b.node,
                                                        self._qid(self.group(which))))

    def support(self, s: SymbolicSet) -> set[int]:
        k = self.kernel
        seen = set()
        levels = set()
        stack = [s.node]
        while stack:
            u = stack.pop()
            if u < 2 or u in seen:
                continue
            seen.add(u)
            levels.add(k.level(u))
            stack.append(k.low(u))
            stack.append(k.high(u))
        return levels

    def prime_swap(self, s: SymbolicSet) -> SymbolicSet:
        """Map every current bit to its primed twin, or every primed bit back."""
        sup = self.support(s)
        if not sup:
            return s
        parities = {lvl & 1 for lvl in sup}
        if len(parities) > 1:
            raise ValueError("prime_swap needs a set over only current or only primed bits")
        direction = parities.pop()
        rid = self._rids.get(direction)
        if rid is None:
            n = 2 * self._nbits
            if direction == 0:
                mapping = [lvl + 1 if lvl % 2 == 0 else lvl for lvl in range(n)]
            else:
                mapping = [lvl - 1 if lvl % 2 == 1 else lvl for lvl in range(n)]
            rid = self.kernel.register_rename(mapping)
            self._rids[direction] = rid
        return SymbolicSet(self, self.kernel.rename(s.node, rid))

    def sat_count(self, s: SymbolicSet, which) -> int:
        levels = self.group(which)
        sup = self.support(s)
        if not sup <= set(levels):
            raise ValueError("set depends on variables outside the counted group")
        pos = {lvl: i for i, lvl in enumerate(levels)}
        total = len(levels)
        k = self.kernel
        memo = {0: 0, 1: 1}

        def p(u):
            return total if u < 2 else pos[k.level(u)]

        def count(u):
            if u in memo:
                return memo[u]
            lo, hi = k.low(u), k.high(u)
            here = p(u)
            c = (count(lo) << (p(lo) - here - 1)) + (count(hi) << (p(hi) - here - 1))
            memo[u] = c
            return c

        return count(s.node) << p(s.node)

    def clear_cache(self) -> None:
        self.kernel.clear_cache()

    def node_count(self) -> int:
        return self.kernel.node_count()

    # -- building and reading sets ----------------------------------------

    def cube(self, assignment: dict[int, bool]) -> SymbolicSet:
        """Conjunction of literals, keyed by level."""
        k = self.kernel
        u = 1
        for lvl in sorted(assignment, reverse=True):
            u = k.mk(lvl, 0, u) if assignment[lvl] else k.mk(lvl, u, 0)
        return SymbolicSet(self, u)

    def to_mask(self, s: SymbolicSet, levels: Sequence[int]) -> np.ndarray:
        """Truth table of ``s`` over ``levels``; index bit ``i`` is ``levels[i]``."""
        sup = self.support(s)
        pos = {lvl: i for i, lvl in enumerate(levels)}
        if not sup <= pos.keys():
            raise ValueError("set depends on variables outside the given levels")
        if s.node < 2:
            return np.full(1 << len(levels), bool(s.node))
        lev, low, high = (np.asarray(a, dtype=np.int64) for a in self.kernel.export())
        shift = np.zeros(len(lev), dtype=np.int64)
        for u in range(2, len(lev)):
            shift[u] = pos.get(int(lev[u]), 0)
        idx = np.arange(1 << len(levels), dtype=np.int64)
        node = np.full(idx.shape, s.node, dtype=np.int64)
        active = node >= 2
        while active.any():
            cur = node[active]
            bit = (idx[active] >> shift[cur]) & 1
            node[active] = np.where(bit == 1, high[cur], low[cur])
            active = node >= 2
        return node == 1

    def from_mask(self, mask: np.ndarray, levels: Sequence[int]) -> SymbolicSet:
        """Inverse of :meth:`to_mask` (builds a BDD from a truth table)."""
        k = self.kernel
        order = sorted(range(len(levels)), key=lambda i: levels[i])
        mask = np.asarray(mask, dtype=bool)

        def build(depth: int, base: int) -> int:
            if depth == len(order):
                return int(mask[base])
            i = order[depth]
            r0 = build(depth + 1, base)
            r1 = build(depth + 1, base | (1 << i))
            return k.mk(levels[i], r0, r1)

        return SymbolicSet(self, build(0, 0))

    def pick(self, s: SymbolicSet, levels: Sequence[int]) -> dict[int, bool] | None:
        """Lexicographically least satisfying assignment over ``levels``."""
        if s.node == 0:
            return None
        k = self.kernel
        out = {lvl: False for lvl in levels}
        u = s.node
        while u >= 2:
            lvl = k.level(u)
            if k.low(u) != 0:
                out[lvl] = False
                u = k.low(u)
            else:
                out[lvl] = True
                u = k.high(u)
        return out

    def to_dot(self, s: SymbolicSet) -> str:
        k = self.kernel
        lines = ["digraph bdd {"]
        seen = set()
        stack = [s.node]
        names = {}
        for info in self.vars.values():
            for i, b in enumerate(info.bits):
                names[2 * b] = f"{info.name}.{i}"
                names[2 * b + 1] = f"{info.name}.{i}'"
        while stack:
            u = stack.pop()
            if u in seen:
                continue
            seen.add(u)
            if u < 2:
                lines.append(f'  n{u} [shape=box,label="{u}"];')
                continue
            lines.append(f'  n{u} [label="{names.get(k.level(u), k.level(u))}"];')
            lines.append(f"  n{u} -> n{k.low(u)} [style=dashed];")
            lines.append(f"  n{u} -> n{k.high(u)};")
            stack.extend((k.low(u), k.high(u)))
        lines.append("}")
        return "\n".join(lines)
