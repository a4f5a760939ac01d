"""Chip-firing on ribbon digraphs and the sandpile group.

Chip configurations are plain dicts vertex id -> int; missing vertices count
as zero.  Firing u subtracts the row F[u] = d+(u)*1_u - sum over arcs u->w of 1_w
(so the lattice of firing moves is the row lattice of the Laplacian).
Because every row has coordinate sum zero, dropping one coordinate is
injective on degree-zero vectors; the lattice is kept in that reduced form.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Iterator, Mapping, Sequence

from .lattice import FiniteQuotient, IntegerLattice, det_bareiss
from .ribbon import RibbonDigraph, RibbonError, _components

ChipConfig = dict


class NotEulerian(RibbonError):
    pass


def chips_vector(d: RibbonDigraph, x: Mapping[str, int]) -> list[int]:
    ix = d.index
    unknown = set(x) - set(ix.vidx)
    if unknown:
        raise RibbonError(f"chips on unknown vertices {sorted(unknown)}")
    return [int(x.get(v, 0)) for v in d.vertices]


def chips_dict(d: RibbonDigraph, vec: Sequence[int]) -> ChipConfig:
    return {v: int(c) for v, c in zip(d.vertices, vec)}


def zero(d: RibbonDigraph) -> ChipConfig:
    return {v: 0 for v in d.vertices}


def chi(d: RibbonDigraph, a: str) -> ChipConfig:
    """-1 at the tail of a, +1 at its head (zero vector for loops)."""
    t, h = d.arc_map[a]
    x = zero(d)
    x[t] -= 1
    x[h] += 1
    return x


def add(*xs: Mapping[str, int]) -> ChipConfig:
    out: dict[str, int] = {}
    for x in xs:
        for v, c in x.items():
            out[v] = out.get(v, 0) + c
    return out


def scale(k: int, x: Mapping[str, int]) -> ChipConfig:
    return {v: k * c for v, c in x.items()}


def laplacian(d: RibbonDigraph) -> list[list[int]]:
    """Out-degree Laplacian D_out - A, rows and columns in vertex order."""
    ix = d.index
    n = len(d.vertices)
    L = [[0] * n for _ in range(n)]
    for t, h in zip(ix.tail, ix.head):
        L[t][t] += 1
        L[t][h] -= 1
    return L


def fire(d: RibbonDigraph, x: Mapping[str, int], v: str) -> ChipConfig:
    ix = d.index
    if v not in ix.vidx:
        raise RibbonError(f"unknown vertex {v}")
    out = {u: int(x.get(u, 0)) for u in d.vertices}
    for i in ix.out_arcs[ix.vidx[v]]:
        out[v] -= 1
        out[d.vertices[ix.head[i]]] += 1
    return out


@lru_cache(maxsize=256)
def firing_lattice(d: RibbonDigraph) -> IntegerLattice:
    L = laplacian(d)
    return IntegerLattice([row[1:] for row in L], len(d.vertices) - 1)


def linearly_equivalent(d: RibbonDigraph, x: Mapping[str, int], y: Mapping[str, int]) -> bool:
    xv, yv = chips_vector(d, x), chips_vector(d, y)
    diff = [a - b for a, b in zip(xv, yv)]
    if sum(diff):
        return False
    return firing_lattice(d).contains(diff[1:])


def require_eulerian(d: RibbonDigraph) -> None:
    if not d.is_eulerian():
        bad = [v for v in d.vertices if d.outdeg(v) != d.indeg(v)]
        raise NotEulerian(f"digraph is not Eulerian: in-degree differs from out-degree at {bad}")


@dataclass(frozen=True)
class GroupPresentation:
    """Z_0^V modulo the firing lattice (or, for the Jacobian, Z^E modulo cycles).

    `coords` names the coordinates; when `reduced` is true the first one is
    implied by the zero-sum condition and left out of the lattice.
    """

    coords: tuple[str, ...]
    quotient: FiniteQuotient
    reduced: bool = True

    @property
    def invariant_factors(self) -> list[int]:
        return self.quotient.invariant_factors

    @property
    def order(self) -> int:
        return self.quotient.order

    @property
    def exponent(self) -> int:
        return self.quotient.exponent

    def _vec(self, x: Mapping[str, int]) -> list[int]:
        vec = [int(x.get(c, 0)) for c in self.coords]
        if self.reduced:
            if sum(vec):
                raise ValueError("group elements must have coordinate sum 0")
            return vec[1:]
        return vec

    def _lift(self, vec: Sequence[int]) -> dict[str, int]:
        if self.reduced:
            vec = [-sum(vec)] + list(vec)
        return {c: int(a) for c, a in zip(self.coords, vec)}

    def key(self, x: Mapping[str, int]) -> tuple[int, ...]:
        return self.quotient.key(self._vec(x))

    def equivalent(self, x: Mapping[str, int], y: Mapping[str, int]) -> bool:
        return self.quotient.equivalent(self._vec(x), self._vec(y))

    def normalize(self, x: Mapping[str, int]) -> dict[str, int]:
        return self._lift(self.key(x))

    def elements(self) -> Iterator[dict[str, int]]:
        for v in self.quotient.elements():
            yield self._lift(v)

    def generators(self) -> list[dict[str, int]]:
        return [self._lift(self.quotient.generator(i)) for i in range(len(self.invariant_factors))]

    def random_element(self, rng: random.Random) -> dict[str, int]:
        coords = [rng.randrange(d) for d in self.invariant_factors]
        return self._lift(self.quotient.element(coords))

    def sample(self, rng: random.Random, limit: int) -> list[dict[str, int]]:
        """All classes when there are at most `limit`, else `limit` distinct random ones."""
        if self.order <= limit:
            return list(self.elements())
        seen, out = set(), []
        while len(out) < limit:
            x = self.random_element(rng)
            k = self.key(x)
            if k not in seen:
                seen.add(k)
                out.append(x)
        return out


@lru_cache(maxsize=256)
def group_structure(d: RibbonDigraph) -> GroupPresentation:
    require_eulerian(d)
    return GroupPresentation(d.vertices, FiniteQuotient(firing_lattice(d)))


def count_arborescences(d: RibbonDigraph, v: str) -> int:
    """In-arborescences rooted at v: det of the Laplacian with row and column v deleted."""
    ix = d.index
    if v not in ix.vidx:
        raise RibbonError(f"unknown vertex {v}")
    r = ix.vidx[v]
    L = laplacian(d)
    M = [[a for j, a in enumerate(row) if j != r] for i, row in enumerate(L) if i != r]
    return det_bareiss(M)


# ------------------------------------------------------------ cycles/cuts ---

@dataclass(frozen=True)
class CutPart:
    U: frozenset[str]
    W: frozenset[str]
    arcs: frozenset[str]


@dataclass(frozen=True)
class CyclePart:
    arcs: tuple[str, ...]


def _check_double(gbi: RibbonDigraph) -> None:
    mult: dict[tuple[str, str], int] = {}
    for _, t, h in gbi.arcs:
        mult[(t, h)] = mult.get((t, h), 0) + 1
    for (t, h), k in mult.items():
        if t == h:
            if k % 2:
                raise RibbonError(f"not a bidirected double: odd number of loops at {t}")
        elif mult.get((h, t), 0) != k:
            raise RibbonError(f"not a bidirected double: {k} arcs {t}->{h} but {mult.get((h, t), 0)} back")


def _connected(vs: Iterable[str], adj: Mapping[str, set]) -> bool:
    vs = set(vs)
    if not vs:
        return False
    start = next(iter(vs))
    seen, stack = {start}, [start]
    while stack:
        u = stack.pop()
        for w in adj[u]:
            if w in vs and w not in seen:
                seen.add(w)
                stack.append(w)
    return seen == vs


def elementary_cuts(gbi: RibbonDigraph) -> list[CutPart]:
    adj: dict[str, set] = {v: set() for v in gbi.vertices}
    for _, t, h in gbi.arcs:
        if t != h:
            adj[t].add(h)
            adj[h].add(t)
    verts = list(gbi.vertices)
    cuts = []
    for k in range(1, len(verts)):
        for U in combinations(verts, k):
            Us = frozenset(U)
            Ws = frozenset(verts) - Us
            if _connected(Us, adj) and _connected(Ws, adj):
                arcs = frozenset(a for a, t, h in gbi.arcs if t in Us and h in Ws)
                cuts.append(CutPart(Us, Ws, arcs))
    return cuts


def _split_cycles(gbi: RibbonDigraph, arcs: set[str]) -> list[CyclePart]:
    """Break a balanced arc set into simple directed cycles."""
    out_of: dict[str, list[str]] = {}
    for a in sorted(arcs):
        out_of.setdefault(gbi.tail(a), []).append(a)
    parts = []
    while any(out_of.values()):
        start = next(v for v in sorted(out_of) if out_of[v])
        path, pos, v = [], {}, start
        while v not in pos:
            pos[v] = len(path)
            a = out_of[v].pop()
            path.append(a)
            v = gbi.head(a)
        cyc = path[pos[v]:]
        for a in path[:pos[v]]:
            out_of[gbi.tail(a)].append(a)
        parts.append(CyclePart(tuple(cyc)))
    return parts


def decompose_cycles_cuts(gbi: RibbonDigraph, f: Iterable[str]) -> "list[CutPart | CyclePart] | None":
    """Partition f into directed cycles and elementary cuts, or None if impossible.

    Any balanced remainder splits into directed cycles, so the search only
    ranges over families of pairwise disjoint elementary cuts inside f.
    """
    _check_double(gbi)
    F = set(f)
    unknown = F - set(gbi.arc_map)
    if unknown:
        raise RibbonError(f"unknown arcs {sorted(unknown)}")
    cuts = [c for c in elementary_cuts(gbi) if c.arcs and c.arcs <= F]

    def balance(arcs) -> dict[str, int]:
        b: dict[str, int] = {}
        for a in arcs:
            t, h = gbi.arc_map[a]
            b[t] = b.get(t, 0) - 1
            b[h] = b.get(h, 0) + 1
        return b

    def search(start: int, remaining: frozenset[str], chosen: list[CutPart]):
        if not any(balance(remaining).values()):
            return list(chosen)
        for i in range(start, len(cuts)):
            c = cuts[i]
            if c.arcs <= remaining:
                chosen.append(c)
                got = search(i + 1, remaining - c.arcs, chosen)
                if got is not None:
                    return got
                chosen.pop()
        return None

    got = search(0, frozenset(F), [])
    if got is None:
        return None
    left = set(F)
    for c in got:
        left -= c.arcs
    return list(got) + _split_cycles(gbi, left)
