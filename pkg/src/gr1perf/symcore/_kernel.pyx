# cython: language_level=3, boundscheck=False, wraparound=False
# distutils: language = c++
"""Compiled decision-diagram kernel.

Same interface and node numbering as ``_pykernel.Kernel``; the unique
table and computed tables are C++ hash maps keyed by packed 64-bit
integers.  Node ids are limited to 26 bits and levels to 12 bits.
"""

from libc.stdint cimport uint64_t
from libcpp.unordered_map cimport unordered_map
from libcpp.vector cimport vector
from cython.operator cimport dereference as deref

DEF NODE_BITS = 26
DEF MAX_NODES = 1 << 26
DEF MAX_LEVELS = 1 << 12

cdef enum:
    OP_AND = 0
    OP_OR = 1
    OP_XOR = 2
    OP_IMPLIES = 3
    OP_DIFF = 4

AND = OP_AND
OR = OP_OR
XOR = OP_XOR
IMPLIES = OP_IMPLIES
DIFF = OP_DIFF

TERMINAL_LEVEL = 1 << 30
cdef int C_TERMINAL_LEVEL = 1 << 30

ctypedef unordered_map[uint64_t, int] table_t


cdef class Kernel:
    """Hash-consed reduced ordered BDD store with computed tables."""

    cdef vector[int] _level
    cdef vector[int] _low
    cdef vector[int] _high
    cdef table_t _unique
    cdef table_t _apply_cache
    cdef table_t _neg_cache
    cdef vector[vector[char]] _qsets
    cdef vector[int] _qmax
    cdef vector[table_t] _exists_cache
    cdef vector[table_t] _ae_cache
    cdef vector[vector[int]] _renames
    cdef vector[table_t] _rename_cache
    cdef public int num_levels

    backend = "compiled"

    def __cinit__(self, int num_levels=0):
        self._level.push_back(C_TERMINAL_LEVEL)
        self._level.push_back(C_TERMINAL_LEVEL)
        self._low.push_back(0)
        self._low.push_back(1)
        self._high.push_back(0)
        self._high.push_back(1)
        self.num_levels = num_levels

    # -- node table -----------------------------------------------------

    def add_levels(self, int count):
        cdef size_t k
        cdef int j
        if self.num_levels + count > MAX_LEVELS:
            raise MemoryError("too many decision-diagram levels")
        for k in range(self._qsets.size()):
            for j in range(count):
                self._qsets[k].push_back(0)
        for k in range(self._renames.size()):
            for j in range(count):
                self._renames[k].push_back(<int>self._renames[k].size())
        self.num_levels += count

    def level(self, int u):
        return self._level[u]

    def low(self, int u):
        return self._low[u]

    def high(self, int u):
        return self._high[u]

    def node_count(self):
        return self._level.size()

    cdef int _mk(self, int lvl, int lo, int hi) except -1:
        cdef table_t.iterator it
        cdef uint64_t key
        cdef int u
        if lo == hi:
            return lo
        key = ((<uint64_t>lvl) << (2 * NODE_BITS)) | ((<uint64_t>lo) << NODE_BITS) | (<uint64_t>hi)
        it = self._unique.find(key)
        if it != self._unique.end():
            return deref(it).second
        u = <int>self._level.size()
        if u >= MAX_NODES:
            raise MemoryError("decision-diagram node table full")
        self._level.push_back(lvl)
        self._low.push_back(lo)
        self._high.push_back(hi)
        self._unique[key] = u
        return u

    def mk(self, int lvl, int lo, int hi):
        return self._mk(lvl, lo, hi)

    def var(self, int lvl):
        if lvl < 0 or lvl >= self.num_levels:
            raise ValueError(f"level {lvl} out of range")
        return self._mk(lvl, 0, 1)

    def clear_cache(self):
        cdef size_t k
        self._apply_cache.clear()
        self._neg_cache.clear()
        for k in range(self._exists_cache.size()):
            self._exists_cache[k].clear()
            self._ae_cache[k].clear()
        for k in range(self._rename_cache.size()):
            self._rename_cache[k].clear()

    def export(self):
        return list(self._level), list(self._low), list(self._high)

    # -- boolean operators ----------------------------------------------

    cdef int _neg(self, int u) except -1:
        cdef table_t.iterator it
        cdef int r
        if u < 2:
            return 1 - u
        it = self._neg_cache.find(<uint64_t>u)
        if it != self._neg_cache.end():
            return deref(it).second
        r = self._mk(self._level[u], self._neg(self._low[u]), self._neg(self._high[u]))
        self._neg_cache[<uint64_t>u] = r
        return r

    def neg(self, int u):
        return self._neg(u)

    cdef int _apply(self, int op, int u, int v) except -1:
        cdef table_t.iterator it
        cdef int lu, lv, top, u0, u1, v0, v1, r, t
        cdef uint64_t key
        if op == OP_AND:
            if u == 0 or v == 0:
                return 0
            if u == 1 or u == v:
                return v
            if v == 1:
                return u
        elif op == OP_OR:
            if u == 1 or v == 1:
                return 1
            if u == 0 or u == v:
                return v
            if v == 0:
                return u
        elif op == OP_XOR:
            if u == v:
                return 0
            if u == 0:
                return v
            if v == 0:
                return u
            if u == 1:
                return self._neg(v)
            if v == 1:
                return self._neg(u)
        elif op == OP_IMPLIES:
            if u == 0 or v == 1 or u == v:
                return 1
            if u == 1:
                return v
            if v == 0:
                return self._neg(u)
        elif op == OP_DIFF:
            if u == 0 or v == 1 or u == v:
                return 0
            if v == 0:
                return u
            if u == 1:
                return self._neg(v)
        else:
            raise ValueError("unknown operator")
        if op <= OP_XOR and u > v:
            t = u
            u = v
            v = t
        key = ((<uint64_t>op) << (2 * NODE_BITS)) | ((<uint64_t>u) << NODE_BITS) | (<uint64_t>v)
        it = self._apply_cache.find(key)
        if it != self._apply_cache.end():
            return deref(it).second
        lu = self._level[u]
        lv = self._level[v]
        if lu == lv:
            top = lu
            u0 = self._low[u]
            u1 = self._high[u]
            v0 = self._low[v]
            v1 = self._high[v]
        elif lu < lv:
            top = lu
            u0 = self._low[u]
            u1 = self._high[u]
            v0 = v
            v1 = v
        else:
            top = lv
            u0 = u
            u1 = u
            v0 = self._low[v]
            v1 = self._high[v]
        r = self._mk(top, self._apply(op, u0, v0), self._apply(op, u1, v1))
        self._apply_cache[key] = r
        return r

    def apply(self, int op, int u, int v):
        if op < 0 or op > OP_DIFF:
            raise ValueError(f"unknown operator {op}")
        return self._apply(op, u, v)

    # -- quantification and renaming ------------------------------------

    def register_qset(self, levels):
        cdef vector[char] mask
        cdef int qmax = -1
        mask.resize(self.num_levels, 0)
        for lvl in levels:
            mask[lvl] = 1
            if lvl > qmax:
                qmax = lvl
        self._qsets.push_back(mask)
        self._qmax.push_back(qmax)
        self._exists_cache.push_back(table_t())
        self._ae_cache.push_back(table_t())
        return <int>self._qsets.size() - 1

    cdef int _exists(self, int u, int qid) except -1:
        cdef table_t.iterator it
        cdef int lvl, r0, r
        if u < 2:
            return u
        lvl = self._level[u]
        if lvl > self._qmax[qid]:
            return u
        it = self._exists_cache[qid].find(<uint64_t>u)
        if it != self._exists_cache[qid].end():
            return deref(it).second
        r0 = self._exists(self._low[u], qid)
        if self._qsets[qid][lvl]:
            if r0 == 1:
                r = 1
            else:
                r = self._apply(OP_OR, r0, self._exists(self._high[u], qid))
        else:
            r = self._mk(lvl, r0, self._exists(self._high[u], qid))
        self._exists_cache[qid][<uint64_t>u] = r
        return r

    def exists(self, int u, int qid):
        return self._exists(u, qid)

    cdef int _and_exists(self, int u, int v, int qid) except -1:
        cdef table_t.iterator it
        cdef int lu, lv, top, u0, u1, v0, v1, r0, r, t
        cdef uint64_t key
        if u == 0 or v == 0:
            return 0
        if u == 1 and v == 1:
            return 1
        if u == 1 or u == v:
            return self._exists(v, qid)
        if v == 1:
            return self._exists(u, qid)
        if u > v:
            t = u
            u = v
            v = t
        lu = self._level[u]
        lv = self._level[v]
        top = lu if lu < lv else lv
        if top > self._qmax[qid]:
            return self._apply(OP_AND, u, v)
        key = ((<uint64_t>u) << NODE_BITS) | (<uint64_t>v)
        it = self._ae_cache[qid].find(key)
        if it != self._ae_cache[qid].end():
            return deref(it).second
        if lu == top:
            u0 = self._low[u]
            u1 = self._high[u]
        else:
            u0 = u
            u1 = u
        if lv == top:
            v0 = self._low[v]
            v1 = self._high[v]
        else:
            v0 = v
            v1 = v
        r0 = self._and_exists(u0, v0, qid)
        if self._qsets[qid][top]:
            if r0 == 1:
                r = 1
            else:
                r = self._apply(OP_OR, r0, self._and_exists(u1, v1, qid))
        else:
            r = self._mk(top, r0, self._and_exists(u1, v1, qid))
        self._ae_cache[qid][key] = r
        return r

    def and_exists(self, int u, int v, int qid):
        return self._and_exists(u, v, qid)

    def register_rename(self, mapping):
        cdef vector[int] m
        if len(mapping) != self.num_levels:
            raise ValueError("rename map must cover every level")
        for lvl in mapping:
            m.push_back(lvl)
        self._renames.push_back(m)
        self._rename_cache.push_back(table_t())
        return <int>self._renames.size() - 1

    cdef int _rename(self, int u, int rid) except -1:
        cdef table_t.iterator it
        cdef int r
        if u < 2:
            return u
        it = self._rename_cache[rid].find(<uint64_t>u)
        if it != self._rename_cache[rid].end():
            return deref(it).second
        r = self._mk(self._renames[rid][self._level[u]],
                     self._rename(self._low[u], rid),
                     self._rename(self._high[u], rid))
        self._rename_cache[rid][<uint64_t>u] = r
        return r

    def rename(self, int u, int rid):
        # caller guarantees the map is order-preserving on the support of u
        return self._rename(u, rid)
