"""Strategies from solver memory and their explicit-graph verification.

A system strategy keeps a justice counter ``j``.  From state ``q`` and
input ``x'`` it moves, in priority order,

1. to the winning region with ``j`` advanced, when ``q`` satisfies
   ``J^s_j`` and can force the winning region;
2. one attractor layer down towards ``J^s_j``;
3. back into the ``X`` cell it sits in, which is only possible while the
   environment avoids ``J^e_i``.

An environment counterstrategy keeps a justice-assumption counter ``i``
and ranks states by the outer index at which they became winning.

States, inputs and moves are integers in the explicit-state numbering
(bit ``k`` is the ``k``-th state bit in declaration order).
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field

import networkx as nx
import numpy as np

from .game import GameStructure, cpre_env, cpre_sys, decode_state
from .gr1solve import GR1Memory, SeedKind
from .rabinsolve import RabinMemory
from .symcore.explicit import ExplicitGame


class MemoryIncomplete(ValueError):
    """The solver stopped early or was seeded; its memory cannot drive a strategy."""


@dataclass
class StrategyAutomaton:
    role: str                       # "sys" or "env"
    initial: list                   # [(state, memory)]
    chooser: dict = field(default_factory=dict)
    # sys: (q, j, x') -> (q', j');  env: (q, i) -> (x', i')
    input0: int | None = None       # env: the initial input

    def to_json(self, g: GameStructure) -> str:
        """JSON list of chooser entries with decoded assignments."""
        env = {d.name for d in g.spec.decls if d.owner.value == "env"}
        rows = []
        for key, val in sorted(self.chooser.items()):
            if self.role == "sys":
                (q, j, x), (t, j2) = key, val
                nxt = _values(g, t)
                rows.append({"state": _values(g, q), "j": j,
                             "x": {k: v for k, v in nxt.items() if k in env},
                             "y": {k: v for k, v in nxt.items() if k not in env},
                             "j_next": j2})
            else:
                (q, i), (x, i2) = key, val
                rows.append({"state": _values(g, q), "i": i,
                             "x": _env_values(g, x), "i_next": i2})
        out = {"role": self.role, "initial": [[_values(g, q), mm] for q, mm in self.initial],
               "chooser": rows}
        if self.input0 is not None:
            out["input0"] = _env_values(g, self.input0)
        return json.dumps(out, sort_keys=True)


def _values(g: GameStructure, q: int) -> dict:
    levels = g.state_levels
    return decode_state(g, {lv: bool((q >> k) & 1) for k, lv in enumerate(levels)})


def _env_values(g: GameStructure, x: int) -> dict:
    levels = g.env_levels
    vals = decode_state(g, {lv: bool((x >> k) & 1) for k, lv in enumerate(levels)})
    return {d.name: vals[d.name] for d in g.spec.decls if d.owner.value == "env"}


class _Explorer:
    """Symbolic helpers for enumerating moves of single states."""

    def __init__(self, g: GameStructure):
        self.g = g
        self.m = g.mgr
        self.levels = g.state_levels
        self.env_pos = [self.levels.index(lv) for lv in g.env_levels]
        self.next_levels = tuple(lv + 1 for lv in self.levels)
        self.env_next = tuple(lv + 1 for lv in g.env_levels)
        self.sys_next = tuple(lv + 1 for lv in g.sys_levels)

    def cube(self, q: int, primed: bool = False):
        lv = self.next_levels if primed else self.levels
        return self.m.cube({l: bool((q >> k) & 1) for k, l in enumerate(lv)})

    def env_cube(self, x: int):
        return self.m.cube({l: bool((x >> k) & 1) for k, l in enumerate(self.env_next)})

    def state_of(self, assignment: dict, primed: bool = False) -> int:
        lv = self.next_levels if primed else self.levels
        return sum(1 << k for k, l in enumerate(lv) if assignment.get(l, False))

    def env_part(self, q: int) -> int:
        return sum(1 << k for k, p in enumerate(self.env_pos) if (q >> p) & 1)

    def inputs(self, q: int) -> list[int]:
        legal = self.m.and_exists(self.levels, self.g.rho_e, self.cube(q))
        mask = self.m.to_mask(legal, self.env_next)
        return [int(x) for x in np.flatnonzero(mask)]

    def respond(self, q: int, x: int, target) -> int | None:
        """Least legal successor of ``q`` under input ``x`` inside ``target``."""
        g, m = self.g, self.m
        moves = g.rho_s & self.cube(q) & self.env_cube(x) & m.prime_swap(target)
        moves = m.exists(self.levels, moves)
        a = m.pick(moves, self.next_levels)
        return None if a is None else self.state_of(a, primed=True)

    def forces(self, q: int, x: int, target) -> bool:
        """Every legal response to ``x`` from ``q`` lands in ``target``."""
        g, m = self.g, self.m
        bad = g.rho_s & self.cube(q) & self.env_cube(x) & ~m.prime_swap(target)
        return bad.is_false()

    def contains(self, s, q: int) -> bool:
        return not (s & self.cube(q)).is_false()


def build_strategy(g: GameStructure, mem: GR1Memory, winning=None) -> StrategyAutomaton:
    """System strategy from GR(1) memory."""
    if not mem.complete or mem.seeded not in (SeedKind.NONE, SeedKind.REUSE_PREFIX):
        raise MemoryIncomplete("memory incomplete")
    if any(z is None for z in mem.Z_by_j):
        raise MemoryIncomplete("memory incomplete")
    ex = _Explorer(g)
    m = g.mgr
    Z = winning if winning is not None else mem.Z_by_j[-1]
    jz = [g.J_s[j] & cpre_sys(g, Z) for j in range(g.m)]
    down = [[cpre_sys(g, lay) for lay in mem.Y_layers[j]] for j in range(g.m)]

    def choose(q, j, x):
        if ex.contains(jz[j], q):
            t = ex.respond(q, x, Z)
            return None if t is None else (t, (j + 1) % g.m)
        layers = mem.Y_layers[j]
        r = next((k for k, lay in enumerate(layers) if ex.contains(lay, q)), None)
        if r is None:
            return None
        if r > 0 and ex.contains(down[j][r - 1], q):
            t = ex.respond(q, x, layers[r - 1])
            if t is not None:
                return t, j
        for i in range(g.n):
            cell = mem.X_cells.get((j, i, r))
            if cell is not None and ex.contains(cell, q):
                t = ex.respond(q, x, cell)
                if t is not None:
                    return t, j
        return None

    strat = StrategyAutomaton("sys", [])
    init_ok = m.exists(g.sys_levels, g.theta_s & Z)
    for x in np.flatnonzero(m.to_mask(g.theta_e & init_ok, g.env_levels)):
        xa = {lv: bool((int(x) >> k) & 1) for k, lv in enumerate(g.env_levels)}
        a = m.pick(g.theta_s & Z & m.cube(xa), ex.levels)
        strat.initial.append((ex.state_of(a), 0))
    todo = deque(strat.initial)
    seen = set(strat.initial)
    while todo:
        q, j = todo.popleft()
        for x in ex.inputs(q):
            c = choose(q, j, x)
            if c is None:
                raise MemoryIncomplete(f"no move for state {q}, justice {j}, input {x}")
            strat.chooser[(q, j, x)] = c
            if c not in seen:
                seen.add(c)
                todo.append(c)
    return strat


def build_counterstrategy(g: GameStructure, mem: RabinMemory, winning=None) -> StrategyAutomaton:
    """Environment counterstrategy from Rabin(1) memory."""
    if not mem.complete or mem.seeded not in (SeedKind.NONE, SeedKind.REUSE_PREFIX):
        raise MemoryIncomplete("memory incomplete")
    ex = _Explorer(g)
    m = g.mgr
    W = m.false
    for y in mem.Z_cells:
        W = W | y
    if winning is not None:
        W = winning
    pre_before = [cpre_env(g, zb) for zb in mem.Z_before]
    starts = [~g.J_s[mem.cz_justice[c]] & cpre_env(g, mem.Z_cells[c]) for c in range(len(mem.Z_cells))]

    def force(q, target):
        for x in ex.inputs(q):
            if ex.forces(q, x, target):
                return x
        return None

    def choose(q, i):
        c = next((k for k, y in enumerate(mem.Z_cells) if ex.contains(y, q)), None)
        if c is None:
            return None
        if ex.contains(pre_before[c], q):
            x = force(q, mem.Z_before[c])
            return None if x is None else (x, i)
        if ex.contains(g.J_e[i] & starts[c], q):
            x = force(q, mem.Z_cells[c])
            return None if x is None else (x, (i + 1) % g.n)
        cells = []
        cx = 0
        while (c, i, cx) in mem.X_cells:
            cells.append(mem.X_cells[(c, i, cx)])
            cx += 1
        r = next((k for k, cell in enumerate(cells) if ex.contains(cell, q)), None)
        if r is None or r == 0:
            return None
        x = force(q, cells[r - 1])
        return None if x is None else (x, i)

    strat = StrategyAutomaton("env", [])
    forced = m.forall(g.sys_levels, g.theta_s.implies(W))
    good = m.to_mask(g.theta_e & forced, g.env_levels)
    xs = np.flatnonzero(good)
    if len(xs) == 0:
        raise MemoryIncomplete("the environment does not win from any initial input")
    strat.input0 = int(xs[0])
    xa = {lv: bool((strat.input0 >> k) & 1) for k, lv in enumerate(g.env_levels)}
    init_states = m.to_mask(g.theta_s & m.cube(xa), ex.levels)
    for q in np.flatnonzero(init_states):
        strat.initial.append((int(q), 0))
    todo = deque(strat.initial)
    seen = set(strat.initial)
    while todo:
        q, i = todo.popleft()
        c = choose(q, i)
        if c is None:
            raise MemoryIncomplete(f"no move for state {q}, assumption {i}")
        strat.chooser[(q, i)] = c
        x, i2 = c
        succ = g.rho_s & ex.cube(q) & ex.env_cube(x)
        succ = m.exists(ex.levels, succ)
        for t in np.flatnonzero(m.to_mask(succ, ex.next_levels)):
            node = (int(t), i2)
            if node not in seen:
                seen.add(node)
                todo.append(node)
    return strat


# -- verification -------------------------------------------------------------


@dataclass
class Verdict:
    ok: bool
    reason: str = ""

    def __bool__(self):
        return self.ok


def _has_cycle_through_all(graph: nx.DiGraph, nodes, groups) -> bool:
    sub = graph.subgraph(nodes)
    for comp in nx.strongly_connected_components(sub):
        if len(comp) == 1:
            v = next(iter(comp))
            if not sub.has_edge(v, v):
                continue
        if all(any(grp(v) for v in comp) for grp in groups):
            return True
    return False


def verify_on_graph(g: GameStructure, s: StrategyAutomaton, role: str | None = None,
                    oracle: ExplicitGame | None = None) -> Verdict:
    """Check a strategy on the explicit product of game and automaton."""
    role = role or s.role
    o = oracle or ExplicitGame(g.spec)
    if role == "sys":
        return _verify_sys(o, s)
    return _verify_env(o, s)


def _verify_sys(o: ExplicitGame, s: StrategyAutomaton) -> Verdict:
    init_env = set(int(x) for x in o.env_of[o.theta_e])
    covered = {int(o.env_of[q]) for q, _ in s.initial}
    if not init_env <= covered:
        return Verdict(False, "an initial input has no initial state")
    for q, j in s.initial:
        if not (o.theta_s[q] and o.theta_e[q]):
            return Verdict(False, f"initial state {q} violates the initial conditions")
    graph = nx.DiGraph()
    todo = deque(s.initial)
    seen = set(s.initial)
    graph.add_nodes_from(s.initial)
    while todo:
        q, j = todo.popleft()
        succ = set(int(t) for t in o.successors(q))
        for x in np.flatnonzero(o.rho_e[q]):
            c = s.chooser.get((q, j, int(x)))
            if c is None:
                return Verdict(False, f"no move at state {q}, justice {j}, input {x}")
            t, j2 = c
            if t not in succ or o.env_of[t] != x:
                return Verdict(False, f"illegal move {q} -> {t}")
            node = (t, j2)
            graph.add_edge((q, j), node)
            if node not in seen:
                seen.add(node)
                todo.append(node)
    for jj, js in enumerate(o.J_s):
        nodes = [v for v in graph if not js[v[0]]]
        groups = [lambda v, je=je: je[v[0]] for je in o.J_e]
        if _has_cycle_through_all(graph, nodes, groups):
            return Verdict(False, f"a fair run avoids justice guarantee {jj}")
    return Verdict(True)


def _verify_env(o: ExplicitGame, s: StrategyAutomaton) -> Verdict:
    x0 = s.input0
    if x0 is None or not (o.theta_e & (o.env_of == x0)).any():
        return Verdict(False, "initial input violates the initial assumptions")
    expected = {int(q) for q in np.flatnonzero(o.theta_s & (o.env_of == x0))}
    if expected != {q for q, _ in s.initial}:
        return Verdict(False, "initial states do not cover every system choice")
    graph = nx.DiGraph()
    graph.add_nodes_from(s.initial)
    todo = deque(s.initial)
    seen = set(s.initial)
    while todo:
        q, i = todo.popleft()
        c = s.chooser.get((q, i))
        if c is None:
            return Verdict(False, f"no move at state {q}, assumption {i}")
        x, i2 = c
        if not o.rho_e[q, x]:
            return Verdict(False, f"illegal input at state {q}")
        for t in o.successors(q):
            t = int(t)
            if o.env_of[t] != x:
                continue
            node = (t, i2)
            graph.add_edge((q, i), node)
            if node not in seen:
                seen.add(node)
                todo.append(node)
    everything = list(graph)
    if _has_cycle_through_all(graph, everything, [lambda v, js=js: js[v[0]] for js in o.J_s]):
        return Verdict(False, "a run satisfies every justice guarantee")
    for ii, je in enumerate(o.J_e):
        nodes = [v for v in graph if not je[v[0]]]
        if _has_cycle_through_all(graph, nodes, []):
            return Verdict(False, f"a run avoids justice assumption {ii}")
    return Verdict(True)


def mutate(s: StrategyAutomaton, rng: np.random.Generator, size: int) -> StrategyAutomaton:
    """Copy of ``s`` with one chooser entry redirected at random.

    ``size`` is the number of states (system role) or inputs (environment
    role) to draw the replacement from.
    """
    keys = sorted(s.chooser)
    if not keys or size < 2:
        return s
    key = keys[int(rng.integers(len(keys)))]
    target, mem = s.chooser[key]
    alt = int(rng.integers(size - 1))
    if alt >= target:
        alt += 1
    new = dict(s.chooser)
    new[key] = (alt, mem)
    return StrategyAutomaton(s.role, list(s.initial), new, s.input0)
