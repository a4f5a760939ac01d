"""Brute-force references.  Deliberately naive and independent of the main code paths."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations, product
from typing import Mapping

from .ribbon import RibbonDigraph, RibbonGraph


class BudgetExceeded(RuntimeError):
    """The instance or the search is too large for the oracle; result inconclusive."""


@dataclass(frozen=True)
class OracleBudget:
    max_vertices: int = 8
    max_arcs: int = 24
    max_depth: int = 200_000      # states / candidates visited
    max_subset: int = 200_000     # subsets tried

    def __post_init__(self):
        for k in ("max_vertices", "max_arcs", "max_depth", "max_subset"):
            if getattr(self, k) <= 0:
                raise ValueError(f"{k} must be positive")

    def admit(self, n_vertices: int, n_arcs: int) -> None:
        if n_vertices > self.max_vertices or n_arcs > self.max_arcs:
            raise BudgetExceeded(f"instance with {n_vertices} vertices / {n_arcs} arcs is over budget")


DEFAULT = OracleBudget()


def _outs(d: RibbonDigraph) -> dict[str, list[str]]:
    out: dict[str, list[str]] = {v: [] for v in d.vertices}
    for a, t, h in d.arcs:
        out[t].append(a)
    return out


def enumerate_arborescences(d: RibbonDigraph, root: str, budget: OracleBudget = DEFAULT) -> set[frozenset[str]]:
    """Arc sets of all in-arborescences rooted at `root`, by trying every out-arc choice."""
    budget.admit(len(d.vertices), len(d.arcs))
    heads = {a: h for a, _, h in d.arcs}
    outs = _outs(d)
    others = [v for v in d.vertices if v != root]
    choices = [[a for a in outs[v] if heads[a] != v] for v in others]
    total = 1
    for c in choices:
        total *= max(len(c), 1)
    if total > budget.max_subset:
        raise BudgetExceeded(f"{total} rotor choices exceed the oracle budget")
    found = set()
    for pick in product(*choices):
        nxt = {v: heads[a] for v, a in zip(others, pick)}
        good = True
        for v in others:
            steps = 0
            while v != root:
                v = nxt[v]
                steps += 1
                if steps > len(others):
                    good = False
                    break
            if not good:
                break
        if good:
            found.add(frozenset(pick))
    return found


def enumerate_spanning_trees(g: RibbonGraph, budget: OracleBudget = DEFAULT) -> set[frozenset[str]]:
    budget.admit(len(g.vertices), 2 * len(g.edges))
    n = len(g.vertices)
    cand = [(e, a, b) for e, a, b in g.edges if a != b]
    from math import comb
    if comb(len(cand), max(n - 1, 0)) > budget.max_subset:
        raise BudgetExceeded("too many edge subsets for the spanning-tree oracle")
    found = set()
    for sub in combinations(cand, n - 1):
        comp = {v: v for v in g.vertices}

        def root(v):
            while comp[v] != v:
                v = comp[v]
            return v

        ok = True
        for _, a, b in sub:
            ra, rb = root(a), root(b)
            if ra == rb:
                ok = False
                break
            comp[ra] = rb
        if ok:
            found.add(frozenset(e for e, _, _ in sub))
    return found


def _firing_rows(d: RibbonDigraph) -> dict[str, dict[str, int]]:
    rows = {v: {} for v in d.vertices}
    for _, t, h in d.arcs:
        rows[t][t] = rows[t].get(t, 0) - 1
        rows[t][h] = rows[t].get(h, 0) + 1
    return rows


def firing_reachability(d: RibbonDigraph, x: Mapping[str, int], y: Mapping[str, int],
                        box: int, budget: OracleBudget = DEFAULT) -> bool:
    """Breadth-first search from x by firing or un-firing single vertices, chips kept in [-box, box]."""
    budget.admit(len(d.vertices), len(d.arcs))
    vs = list(d.vertices)
    start = tuple(int(x.get(v, 0)) for v in vs)
    goal = tuple(int(y.get(v, 0)) for v in vs)
    if sum(start) != sum(goal):
        return False
    rows = _firing_rows(d)
    moves = []
    for v in vs:
        vec = tuple(rows[v].get(u, 0) for u in vs)
        moves.append(vec)
        moves.append(tuple(-c for c in vec))
    seen = {start}
    todo = deque([start])
    while todo:
        s = todo.popleft()
        if s == goal:
            return True
        for mv in moves:
            t = tuple(a + b for a, b in zip(s, mv))
            if t in seen or any(abs(c) > box for c in t):
                continue
            seen.add(t)
            if len(seen) > budget.max_depth:
                raise BudgetExceeded("firing search exceeded its state budget")
            todo.append(t)
    return False


def routing_reachability(d: RibbonDigraph, s1, s2, box: int, budget: OracleBudget = DEFAULT) -> bool:
    """Breadth-first search over genuine routing steps (any vertex, any order).

    States are (chips, rotor positions); chips must stay within [-box, box].
    A False answer means s2 is not reachable without leaving the box.
    """
    budget.admit(len(d.vertices), len(d.arcs))
    vs = list(d.vertices)
    outs = _outs_in_rotation(d)
    heads = {a: h for a, _, h in d.arcs}
    vidx = {v: i for i, v in enumerate(vs)}

    def enc(s):
        chips = tuple(int(s.chips.get(v, 0)) for v in vs)
        rot = tuple(outs[v].index(s.rotors[v]) if outs[v] else -1 for v in vs)
        return chips + rot

    start, goal = enc(s1), enc(s2)
    n = len(vs)
    if sum(start[:n]) != sum(goal[:n]):
        return False
    seen = {start}
    todo = deque([start])
    while todo:
        s = todo.popleft()
        if s == goal:
            return True
        for i, v in enumerate(vs):
            if not outs[v]:
                continue
            p = (s[n + i] + 1) % len(outs[v])
            w = vidx[heads[outs[v][p]]]
            t = list(s)
            t[i] -= 1
            t[w] += 1
            t[n + i] = p
            t = tuple(t)
            if t in seen or abs(t[i]) > box or abs(t[w]) > box:
                continue
            seen.add(t)
            if len(seen) > budget.max_depth:
                raise BudgetExceeded("routing search exceeded its state budget")
            todo.append(t)
    return False


def _outs_in_rotation(d: RibbonDigraph) -> dict[str, list[str]]:
    rot = dict(d.rotation)
    return {v: [a for a, tag in rot.get(v, ()) if tag == "tail"] for v in d.vertices}
