"""Rotor-routing: routing steps, the legal game, and equivalence of states.

A rotor configuration is a dict vertex -> out-arc.  Routing v first advances
its rotor to the next out-arc in the rotation, then sends one chip along
the new rotor arc.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping

import numpy as np

from . import kernels
from .ribbon import RibbonDigraph, RibbonError, RibbonGraph, arc_edge, arc_name, bidirect, cycle_is_separating, twin
from .sandpile import chips_vector, group_structure, linearly_equivalent, require_eulerian

RotorConfig = dict


@dataclass(frozen=True)
class Arborescence:
    root: str
    out: tuple[tuple[str, str], ...]   # (vertex, out-arc), sorted by vertex

    @classmethod
    def make(cls, root: str, mapping: Mapping[str, str]) -> "Arborescence":
        return cls(root, tuple(sorted(mapping.items())))

    @property
    def arcs(self) -> frozenset[str]:
        return frozenset(a for _, a in self.out)

    def as_dict(self) -> dict[str, str]:
        return dict(self.out)

    def __str__(self) -> str:
        return " ".join([f"arb root={self.root}"] + [f"{v}={a}" for v, a in self.out])


def check_arborescence(d: RibbonDigraph, t: Arborescence) -> None:
    ix = d.index
    if t.root not in ix.vidx:
        raise RibbonError(f"unknown root {t.root}")
    m = t.as_dict()
    if set(m) != set(d.vertices) - {t.root}:
        raise RibbonError("arborescence must give exactly one out-arc per non-root vertex")
    for v, a in m.items():
        if a not in d.arc_map or d.tail(a) != v:
            raise RibbonError(f"{a} is not an out-arc of {v}")
    for v in m:
        seen = set()
        while v != t.root:
            if v in seen:
                raise RibbonError(f"arcs of the arborescence contain a cycle through {v}")
            seen.add(v)
            v = d.head(m[v])


@dataclass(frozen=True)
class ChipRotorState:
    chips: Mapping[str, int]
    rotors: Mapping[str, str]


def route(d: RibbonDigraph, s: ChipRotorState, v: str) -> ChipRotorState:
    if v not in d.index.vidx:
        raise RibbonError(f"unknown vertex {v}")
    if d.outdeg(v) == 0:
        raise RibbonError(f"cannot route {v}: no out-arcs")
    a = d.nextout(v, s.rotors[v])
    chips = dict(s.chips)
    chips[v] = chips.get(v, 0) - 1
    w = d.head(a)
    chips[w] = chips.get(w, 0) + 1
    rotors = dict(s.rotors)
    rotors[v] = a
    return ChipRotorState(chips, rotors)


def _check_rotors(d: RibbonDigraph, rotors: Mapping[str, str]) -> None:
    for v in d.vertices:
        if d.outdeg(v) == 0:
            continue
        a = rotors.get(v)
        if a is None:
            raise RibbonError(f"no rotor at {v}")
        if a not in d.arc_map or d.tail(a) != v:
            raise RibbonError(f"rotor {a} at {v} is not an out-arc of {v}")
    extra = set(rotors) - set(d.vertices)
    if extra:
        raise RibbonError(f"rotors on unknown vertices {sorted(extra)}")


def residue(d: RibbonDigraph, r1: Mapping[str, str], r2: Mapping[str, str]) -> list[int]:
    """Chips moved when every rotor is advanced from r1 to r2 (as a vertex-order vector)."""
    ix = d.index
    w = [0] * len(d.vertices)
    for vi, outs in enumerate(ix.out_arcs):
        if not outs:
            continue
        v = d.vertices[vi]
        p1 = ix.out_pos[ix.aidx[r1[v]]]
        p2 = ix.out_pos[ix.aidx[r2[v]]]
        k = len(outs)
        for step in range(1, (p2 - p1) % k + 1):
            a = outs[(p1 + step) % k]
            w[ix.tail[a]] -= 1
            w[ix.head[a]] += 1
    return w


def rotor_equivalent(d: RibbonDigraph, s1: ChipRotorState, s2: ChipRotorState) -> bool:
    """(x1, r1) ~ (x2, r2) by the residue method."""
    for s in (s1, s2):
        _check_rotors(d, s.rotors)
    x1, x2 = chips_vector(d, s1.chips), chips_vector(d, s2.chips)
    w = residue(d, s1.rotors, s2.rotors)
    diff = {v: b - a - c for v, a, b, c in zip(d.vertices, x1, x2, w)}
    return linearly_equivalent(d, diff, {})


# ------------------------------------------------------------ the game ---

@dataclass
class _GameArrays:
    out_heads: np.ndarray
    outdeg: np.ndarray


@lru_cache(maxsize=512)
def _arrays(d: RibbonDigraph) -> _GameArrays:
    ix = d.index
    n = len(d.vertices)
    width = max((len(o) for o in ix.out_arcs), default=1) or 1
    heads = np.zeros((n, width), dtype=np.int64)
    for v, outs in enumerate(ix.out_arcs):
        for k, a in enumerate(outs):
            heads[v, k] = ix.head[a]
    return _GameArrays(heads, np.array([len(o) for o in ix.out_arcs], dtype=np.int64))


def effectivize(d: RibbonDigraph, root: str, x: Mapping[str, int]) -> list[int]:
    """A configuration equivalent to x that is nonnegative off the root.

    Uses z = E*(1_u - 1_root) summed over u != root, E the group exponent;
    z is in the firing lattice because E kills every class.
    """
    ix = d.index
    vec = chips_vector(d, x)
    r = ix.vidx[root]
    E = group_structure(d).exponent
    need = max((-c for i, c in enumerate(vec) if i != r), default=0)
    N = -(-need // E) if need > 0 else 0
    n = len(vec)
    return [c + N * E if i != r else c - N * E * (n - 1) for i, c in enumerate(vec)]


def _play(d: RibbonDigraph, root: str, chips: list[int], rotors: Mapping[str, str],
          rng: random.Random | None) -> dict[str, str]:
    ix = d.index
    r = ix.vidx[root]
    pos = np.array([ix.out_pos[ix.aidx[rotors[v]]] if ix.out_arcs[i] else 0
                    for i, v in enumerate(d.vertices)], dtype=np.int64)
    positive = sum(c for i, c in enumerate(chips) if c > 0 and i != r)
    E = group_structure(d).exponent
    guard = len(d.arcs) * (1 + positive) * len(d.vertices) * E
    if rng is None and max(abs(c) for c in chips) < 2 ** 60 and guard < 2 ** 62:
        arr = _arrays(d)
        _, pos, steps = kernels.legal_game(np.array(chips, dtype=np.int64), pos, arr.out_heads,
                                           arr.outdeg, r, guard)
        if steps < 0:
            raise kernels.GameOverrun(f"legal game exceeded {guard} routings")
        pos = [int(p) for p in pos]
    else:
        pos = [int(p) for p in pos]
        chips = list(chips)
        steps = 0
        live = [i for i, c in enumerate(chips) if c > 0 and i != r]
        while live:
            u = rng.choice(live) if rng else min(live)
            outs = ix.out_arcs[u]
            pos[u] = (pos[u] + 1) % len(outs)
            chips[u] -= 1
            w = ix.head[outs[pos[u]]]
            chips[w] += 1
            steps += 1
            if steps > guard:
                raise kernels.GameOverrun(f"legal game exceeded {guard} routings")
            live = [i for i, c in enumerate(chips) if c > 0 and i != r]
    return {v: ix.arc_ids[ix.out_arcs[i][pos[i]]] for i, v in enumerate(d.vertices) if i != r}


def rotor_action_digraph(d: RibbonDigraph, root: str, x: Mapping[str, int], t: Arborescence,
                         rng: random.Random | None = None) -> Arborescence:
    """r_root(x, t).  Passing `rng` randomizes both the routing order and the root's rotor."""
    require_eulerian(d)
    if t.root != root:
        raise RibbonError(f"arborescence is rooted at {t.root}, not {root}")
    check_arborescence(d, t)
    vec = chips_vector(d, x)
    if sum(vec):
        raise RibbonError("chip configuration must have sum 0")
    chips = effectivize(d, root, x)
    rotors = t.as_dict()
    outs = d.out_arcs(root)
    if outs:
        rotors[root] = rng.choice(outs) if rng else outs[0]
    return Arborescence.make(root, _play(d, root, chips, rotors, rng))


def negate(d: RibbonDigraph, x: Mapping[str, int]) -> dict[str, int]:
    """-x as (exponent - 1) * x, which stays a legal chip input for the game."""
    E = group_structure(d).exponent
    return {v: (E - 1) * c for v, c in x.items()}


# ----------------------------------------------------- undirected version ---

def tree_arborescence(g: RibbonGraph, root: str, tree: Iterable[str]) -> Arborescence:
    """Orient a spanning tree of g toward root, as an arborescence of bidirect(g)."""
    t = set(tree)
    unknown = t - set(g.edge_map)
    if unknown:
        raise RibbonError(f"unknown edges {sorted(unknown)}")
    if root not in g.vertices:
        raise RibbonError(f"unknown root {root}")
    if len(t) != len(g.vertices) - 1 or any(g.is_loop(e) for e in t):
        raise RibbonError("edge set is not a spanning tree")
    nbrs: dict[str, list[tuple[str, str]]] = {v: [] for v in g.vertices}
    for e in t:
        a, b = g.edge_map[e]
        nbrs[a].append((b, arc_name(e, 1)))   # b -> a leaves along side 1
        nbrs[b].append((a, arc_name(e, 0)))
    out, stack = {}, [root]
    seen = {root}
    while stack:
        u = stack.pop()
        for w, arc in nbrs[u]:
            if w not in seen:
                seen.add(w)
                out[w] = arc
                stack.append(w)
    if len(seen) != len(g.vertices):
        raise RibbonError("edge set is not a spanning tree")
    return Arborescence.make(root, out)


def rotor_action_undirected(g: RibbonGraph, root: str, x: Mapping[str, int], tree: Iterable[str],
                            rng: random.Random | None = None) -> frozenset[str]:
    d = bidirect(g)
    arb = tree_arborescence(g, root, tree)
    res = rotor_action_digraph(d, root, x, arb, rng)
    return frozenset(arc_edge(a) for a in res.arcs)


# ------------------------------------------------------------ unicycles ---

def unicycle_cycle(d: RibbonDigraph, rotors: Mapping[str, str]) -> list[str]:
    """The arcs of the unique directed cycle of a unicycle rotor configuration."""
    _check_rotors(d, rotors)
    cycles = []
    state: dict[str, int] = {}
    for v0 in d.vertices:
        if v0 in state:
            continue
        path, v = [], v0
        while v not in state:
            state[v] = 1
            path.append(v)
            v = d.head(rotors[v])
        if state[v] == 1 and v in path:
            k = path.index(v)
            cycles.append([rotors[u] for u in path[k:]])
        for u in path:
            state[u] = 2
    if len(cycles) != 1:
        raise RibbonError(f"rotor configuration has {len(cycles)} cycles, not a unicycle")
    return cycles[0]


def reverse_on_cycle(d: RibbonDigraph, rotors: Mapping[str, str]) -> dict[str, str]:
    cyc = unicycle_cycle(d, rotors)
    out = dict(rotors)
    for a in cyc:
        out[d.head(a)] = twin(a)
    return out


def reverse_unicycle_equivalent(g: RibbonGraph, rotors: Mapping[str, str]) -> bool:
    loops = [e for e, a, b in g.edges if a == b]
    if loops:
        raise RibbonError(f"graph has loops {loops}; the unicycle reversal test needs a loop-free graph")
    d = bidirect(g)
    rev = reverse_on_cycle(d, rotors)
    return rotor_equivalent(d, ChipRotorState({}, rotors), ChipRotorState({}, rev))


def unicycle_separating(g: RibbonGraph, rotors: Mapping[str, str]) -> bool:
    """Whether the unicycle's cycle separates the surface.

    A 2-cycle running back and forth along one edge bounds a thin digon, so
    it counts as separating; otherwise the cycle's edge set is tested.
    """
    cyc = unicycle_cycle(bidirect(g), rotors)
    edges = {arc_edge(a) for a in cyc}
    if len(cyc) == 2 and len(edges) == 1:
        return True
    return cycle_is_separating(g, edges)
