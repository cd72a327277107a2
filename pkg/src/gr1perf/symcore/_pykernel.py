"""Pure-Python decision-diagram kernel.

Reference implementation of the node store used when the compiled
extension is not available.  Nodes are plain integers: 0 is the false
terminal, 1 is the true terminal, and every other node is an index into
the parallel ``_level``/``_low``/``_high`` lists.  The compiled kernel in
``_kernel.pyx`` exposes the identical interface.
"""

AND = 0
OR = 1
XOR = 2
IMPLIES = 3
DIFF = 4

TERMINAL_LEVEL = 1 << 30

_COMMUTATIVE = (True, True, True, False, False)


class Kernel:
    """Hash-consed reduced ordered BDD store with computed tables."""

    backend = "python"

    def __init__(self, num_levels=0):
        self._level = [TERMINAL_LEVEL, TERMINAL_LEVEL]
        self._low = [0, 1]
        self._high = [0, 1]
        self._unique = {}
        self._apply_cache = {}
        self._neg_cache = {}
        self._qsets = []
        self._qmax = []
        self._exists_cache = []
        self._ae_cache = []
        self._renames = []
        self._rename_cache = []
        self.num_levels = num_levels

    # -- node table -----------------------------------------------------

    def add_levels(self, count):
        self.num_levels += count
        for mask in self._qsets:
            mask.extend([False] * count)
        for mapping in self._renames:
            mapping.extend(range(len(mapping), len(mapping) + count))

    def level(self, u):
        return self._level[u]

    def low(self, u):
        return self._low[u]

    def high(self, u):
        return self._high[u]

    def node_count(self):
        return len(self._level)

    def mk(self, lvl, lo, hi):
        if lo == hi:
            return lo
        key = (lvl, lo, hi)
        u = self._unique.get(key)
        if u is None:
            u = len(self._level)
            self._level.append(lvl)
            self._low.append(lo)
            self._high.append(hi)
            self._unique[key] = u
        return u

    def var(self, lvl):
        if not 0 <= lvl < self.num_levels:
            raise ValueError(f"level {lvl} out of range")
        return self.mk(lvl, 0, 1)

    def clear_cache(self):
        self._apply_cache.clear()
        self._neg_cache.clear()
        for c in self._exists_cache:
            c.clear()
        for c in self._ae_cache:
            c.clear()
        for c in self._rename_cache:
            c.clear()

    def export(self):
        return list(self._level), list(self._low), list(self._high)

    # -- boolean operators ----------------------------------------------

    def neg(self, u):
        if u < 2:
            return 1 - u
        r = self._neg_cache.get(u)
        if r is None:
            r = self.mk(self._level[u], self.neg(self._low[u]),
                        self.neg(self._high[u]))
            self._neg_cache[u] = r
        return r

    def apply(self, op, u, v):
        if op == AND:
            if u == 0 or v == 0:
                return 0
            if u == 1 or u == v:
                return v
            if v == 1:
                return u
        elif op == OR:
            if u == 1 or v == 1:
                return 1
            if u == 0 or u == v:
                return v
            if v == 0:
                return u
        elif op == XOR:
            if u == v:
                return 0
            if u == 0:
                return v
            if v == 0:
                return u
            if u == 1:
                return self.neg(v)
            if v == 1:
                return self.neg(u)
        elif op == IMPLIES:
            if u == 0 or v == 1 or u == v:
                return 1
            if u == 1:
                return v
            if v == 0:
                return self.neg(u)
        elif op == DIFF:
            if u == 0 or v == 1 or u == v:
                return 0
            if v == 0:
                return u
            if u == 1:
                return self.neg(v)
        else:
            raise ValueError(f"unknown operator {op}")
        if _COMMUTATIVE[op] and u > v:
            u, v = v, u
        key = (op, u, v)
        r = self._apply_cache.get(key)
        if r is not None:
            return r
        lu = self._level[u]
        lv = self._level[v]
        if lu == lv:
            top = lu
            u0, u1 = self._low[u], self._high[u]
            v0, v1 = self._low[v], self._high[v]
        elif lu < lv:
            top = lu
            u0, u1 = self._low[u], self._high[u]
            v0 = v1 = v
        else:
            top = lv
            u0 = u1 = u
            v0, v1 = self._low[v], self._high[v]
        r = self.mk(top, self.apply(op, u0, v0), self.apply(op, u1, v1))
        self._apply_cache[key] = r
        return r

    # -- quantification and renaming ------------------------------------

    def register_qset(self, levels):
        mask = [False] * self.num_levels
        for lvl in levels:
            mask[lvl] = True
        self._qsets.append(mask)
        self._qmax.append(max(levels) if levels else -1)
        self._exists_cache.append({})
        self._ae_cache.append({})
        return len(self._qsets) - 1

    def exists(self, u, qid):
        return self._exists(u, self._qsets[qid], self._qmax[qid],
                            self._exists_cache[qid])

    def _exists(self, u, mask, qmax, cache):
        if u < 2:
            return u
        lvl = self._level[u]
        if lvl > qmax:
            return u
        r = cache.get(u)
        if r is not None:
            return r
        r0 = self._exists(self._low[u], mask, qmax, cache)
        if mask[lvl]:
            if r0 == 1:
                r = 1
            else:
                r = self.apply(OR, r0, self._exists(self._high[u], mask, qmax, cache))
        else:
            r = self.mk(lvl, r0, self._exists(self._high[u], mask, qmax, cache))
        cache[u] = r
        return r

    def and_exists(self, u, v, qid):
        return self._and_exists(u, v, self._qsets[qid], self._qmax[qid],
                                self._exists_cache[qid], self._ae_cache[qid])

    def _and_exists(self, u, v, mask, qmax, ecache, cache):
        if u == 0 or v == 0:
            return 0
        if u == 1 and v == 1:
            return 1
        if u == 1 or u == v:
            return self._exists(v, mask, qmax, ecache)
        if v == 1:
            return self._exists(u, mask, qmax, ecache)
        if u > v:
            u, v = v, u
        lu = self._level[u]
        lv = self._level[v]
        top = lu if lu < lv else lv
        if top > qmax:
            return self.apply(AND, u, v)
        key = (u, v)
        r = cache.get(key)
        if r is not None:
            return r
        if lu == top:
            u0, u1 = self._low[u], self._high[u]
        else:
            u0 = u1 = u
        if lv == top:
            v0, v1 = self._low[v], self._high[v]
        else:
            v0 = v1 = v
        r0 = self._and_exists(u0, v0, mask, qmax, ecache, cache)
        if mask[top]:
            if r0 == 1:
                r = 1
            else:
                r = self.apply(OR, r0, self._and_exists(u1, v1, mask, qmax, ecache, cache))
        else:
            r = self.mk(top, r0, self._and_exists(u1, v1, mask, qmax, ecache, cache))
        cache[key] = r
        return r

    def register_rename(self, mapping):
        if len(mapping) != self.num_levels:
            raise ValueError("rename map must cover every level")
        self._renames.append(list(mapping))
        self._rename_cache.append({})
        return len(self._renames) - 1

    def rename(self, u, rid):
        # caller guarantees the map is order-preserving on the support of u
        return self._rename(u, self._renames[rid], self._rename_cache[rid])

    def _rename(self, u, mapping, cache):
        if u < 2:
            return u
        r = cache.get(u)
        if r is None:
            r = self.mk(mapping[self._level[u]],
                        self._rename(self._low[u], mapping, cache),
                        self._rename(self._high[u], mapping, cache))
            cache[u] = r
        return r
