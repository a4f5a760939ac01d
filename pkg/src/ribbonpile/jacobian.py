"""Embedded graphs: quasi-trees, signed cycles, the Jacobian, phi, and the Bernardi action.

Corners are identified with half-edge integers h (see ribbon.py); the medial
arc of corner h is named `<edge>.<side>` and leads from v_e(h) to v_e(sigma h).
Walking the medial digraph, the arc of corner h arrives at node e(sigma h)
around the end sigma(h).  A *turn* there leaves around the same end (next
arc sigma h), a *straight* pass leaves around the opposite end (next arc
alpha sigma h).  A subset q of edges picks straight at v_e iff e is in q.

With the reference orientation, primal-/primal+ are the tail/head halves of
e and dual-/dual+ the tail/head halves of e*, where e* is e turned a quarter
counterclockwise.  Crossings: turn at tail -> primal-, turn at head -> primal+,
straight tail->head -> dual-, straight head->tail -> dual+.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import product
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import kernels
from .lattice import FiniteQuotient, IntegerLattice
from .ribbon import RibbonDigraph, RibbonError, RibbonGraph, cell_complex, complement_components, dual, medial, medial_arc
from .sandpile import GroupPresentation, chi, group_structure, linearly_equivalent
from .tours import EulerianTour, tour_rotor_action

MAX_CYCLE_EDGES = 10
PRIMAL_MINUS, PRIMAL_PLUS, DUAL_MINUS, DUAL_PLUS = "primal-", "primal+", "dual-", "dual+"


@dataclass(frozen=True)
class SignedCycle:
    support: frozenset[str]              # edge ids, dual ones with a trailing '*'
    signs: tuple[tuple[str, int], ...]   # sorted (token, +-1)

    def vector(self, edges: Sequence[str]) -> tuple[int, ...]:
        """Coordinates in the order e_1..e_m, e_1*..e_m*."""
        s = dict(self.signs)
        return tuple(s.get(e, 0) for e in edges) + tuple(s.get(e + "*", 0) for e in edges)

    def __neg__(self) -> "SignedCycle":
        return SignedCycle(self.support, tuple((k, -v) for k, v in self.signs))


def project_pi(z: Sequence[int]) -> tuple[int, ...]:
    """pi(z)(e) = z(e) + z(e*) for z laid out as (primal part; dual part)."""
    if len(z) % 2:
        raise ValueError("vector over E and E* must have even length")
    m = len(z) // 2
    return tuple(int(z[i]) + int(z[m + i]) for i in range(m))


@dataclass(frozen=True)
class EmbeddedGraph:
    base: RibbonGraph
    tail_side: tuple[tuple[str, int], ...]

    @classmethod
    def make(cls, g: RibbonGraph, orient: Mapping[str, int] | None = None) -> "EmbeddedGraph":
        g.check()
        orient = dict(orient or {})
        bad = set(orient) - set(g.edge_map)
        if bad:
            raise RibbonError(f"orientation given for unknown edges {sorted(bad)}")
        return cls(g, tuple((e, int(orient.get(e, 0))) for e, _, _ in g.edges))

    @property
    def edges(self) -> tuple[str, ...]:
        return tuple(e for e, _, _ in self.base.edges)

    @cached_property
    def tails(self) -> dict[str, int]:
        return dict(self.tail_side)

    @cached_property
    def dual(self) -> RibbonGraph:
        return dual(self.base)

    @cached_property
    def dual_orientation(self) -> dict[str, int]:
        # the head of e* sits on the left of e, i.e. in the face left of e's tail dart
        return {e + "*": 1 - s for e, s in self.tail_side}

    @cached_property
    def medial(self) -> RibbonDigraph:
        return medial(self.base)

    def med_plus(self, e: str) -> str:
        return medial_arc(e, self.tails[e])

    def med_minus(self, e: str) -> str:
        return medial_arc(e, 1 - self.tails[e])

    def half_edge_roles(self, e: str) -> dict[str, tuple[str, int]]:
        """Half-edges of e and e* by role; dual ones are (e*, side of e*)."""
        t = self.tails[e]
        return {PRIMAL_MINUS: (e, t), PRIMAL_PLUS: (e, 1 - t),
                DUAL_MINUS: (e + "*", 1 - t), DUAL_PLUS: (e + "*", t)}

    # -- integer helpers
    @cached_property
    def _sigma(self) -> tuple[int, ...]:
        return self.base._map.sigma

    @cached_property
    def _arc_of(self) -> dict[str, int]:
        return {a: h for h, (a, _, _) in enumerate(self.medial.arcs)}

    def _mask(self, q: Iterable[str]) -> int:
        idx = {e: i for i, e in enumerate(self.edges)}
        m = 0
        for e in q:
            if e not in idx:
                raise RibbonError(f"unknown edge {e}")
            m |= 1 << idx[e]
        return m

    def successor(self, h: int, mask: int) -> int:
        k = self._sigma[h]
        return k ^ 1 if (mask >> (k >> 1)) & 1 else k


# ----------------------------------------------------------- quasi-trees ---

def _trail_count(eg: EmbeddedGraph, mask: int) -> int:
    n = len(eg._sigma)
    seen = [False] * n
    c = 0
    for s in range(n):
        if seen[s]:
            continue
        c += 1
        h = s
        while not seen[h]:
            seen[h] = True
            h = eg.successor(h, mask)
    return c


def is_quasitree(eg: EmbeddedGraph, q: Iterable[str]) -> bool:
    if not eg.edges:
        return True
    return _trail_count(eg, eg._mask(q)) == 1


def _subset(eg: EmbeddedGraph, mask: int) -> frozenset[str]:
    return frozenset(e for i, e in enumerate(eg.edges) if (mask >> i) & 1)


def enumerate_quasitrees(eg: EmbeddedGraph, chunk: int = 1 << 15) -> list[frozenset[str]]:
    """All quasi-trees, in increasing bitmask order (edge i <-> bit i)."""
    m = len(eg.edges)
    if m == 0:
        return [frozenset()]
    if m > 30:
        raise RibbonError(f"{m} edges is too many for exhaustive quasi-tree search")
    sig = np.array(eg._sigma, dtype=np.int64)
    succ_off = sig
    succ_on = sig ^ 1
    bit = sig >> 1
    out = []
    for lo in range(0, 1 << m, chunk):
        masks = np.arange(lo, min(lo + chunk, 1 << m), dtype=np.int64)
        counts = kernels.batch_cycles(succ_off, succ_on, bit, masks)
        for mk in masks[counts == 1]:
            out.append(_subset(eg, int(mk)))
    return out


def quasitree_to_tour(eg: EmbeddedGraph, q: Iterable[str]) -> EulerianTour:
    mask = eg._mask(q)
    n = len(eg._sigma)
    seq, h = [], 0
    for _ in range(n):
        seq.append(h)
        h = eg.successor(h, mask)
        if h == 0:
            break
    if len(seq) != n:
        raise RibbonError(f"{sorted(q)} is not a quasi-tree: its transition system splits into several trails")
    arcs = eg.medial.arcs
    return EulerianTour.of(arcs[k][0] for k in seq)


def tour_to_quasitree(eg: EmbeddedGraph, e: EulerianTour) -> frozenset[str]:
    arc_of = eg._arc_of
    if sorted(e.order) != sorted(arc_of):
        raise RibbonError("tour does not cover the medial digraph")
    seq = [arc_of[a] for a in e.order]
    n = len(seq)
    straight: dict[int, set[bool]] = {}
    for i, h in enumerate(seq):
        k = eg._sigma[h]
        nxt = seq[(i + 1) % n]
        if nxt == k:
            straight.setdefault(k >> 1, set()).add(False)
        elif nxt == k ^ 1:
            straight.setdefault(k >> 1, set()).add(True)
        else:
            raise RibbonError("sequence is not an Eulerian tour of the medial digraph")
    if any(len(s) != 1 for s in straight.values()):
        raise RibbonError("tour mixes a straight and a turning pass at one node")
    return frozenset(eg.edges[i] for i, s in straight.items() if True in s)


# ----------------------------------------------------------------- cycles --

def _ternary_masks(m: int) -> tuple[np.ndarray, np.ndarray]:
    codes = np.arange(3 ** m, dtype=np.int64)
    pm = np.zeros_like(codes)
    dm = np.zeros_like(codes)
    rest = codes.copy()
    for i in range(m):
        dig = rest % 3
        rest //= 3
        pm |= (dig == 1).astype(np.int64) << i
        dm |= (dig == 2).astype(np.int64) << i
    return pm, dm


def enumerate_cycles(eg: EmbeddedGraph) -> list[SignedCycle]:
    """Every minimal subtransversal S with two complementary pieces, one sign each.

    Subtransversals are coded in base 3 (digit 1 = e, digit 2 = e*).  The
    negated cycles are implied.
    """
    m = len(eg.edges)
    if m > MAX_CYCLE_EDGES:
        raise RibbonError(f"cycle enumeration is brute force over 3^|E|; {m} edges exceeds the limit {MAX_CYCLE_EDGES}")
    cx = cell_complex(eg.base)
    arr = lambda t: np.array(t, dtype=np.int64)
    pm, dm = _ternary_masks(m)
    comps = kernels.batch_components(cx.n_cells, arr(cx.glue_a), arr(cx.glue_b), arr(cx.glue_edge),
                                     arr(cx.glue_dual), pm, dm)
    pw = [3 ** i for i in range(m)]
    out = []
    for code in np.nonzero(comps == 2)[0]:
        code = int(code)
        digits = [(code // pw[i]) % 3 for i in range(m)]
        if all(comps[code - digits[i] * pw[i]] == 1 for i in range(m) if digits[i]):
            support = [eg.edges[i] + ("*" if digits[i] == 2 else "") for i in range(m) if digits[i]]
            out.append(signed_cycle(eg, support))
    return out


def signed_cycle(eg: EmbeddedGraph, support: Iterable[str]) -> SignedCycle:
    """Signs from the boundary orientation of one side D (D on the left).

    D is the piece containing the first cell in the labelling.
    """
    support = list(support)
    count, labels = complement_components(eg.base, support)
    if count != 2:
        raise RibbonError(f"{support} does not cut the surface into two pieces")
    D = labels[eg.medial.arcs[0][0]]
    mp = eg.base._map
    signs = {}
    for tok in support:
        e = tok.rstrip("*")
        t = eg.tails[e]
        i = eg.edges.index(e)
        if tok.endswith("*"):
            cell = medial_arc(e, t)                       # out-arc around the tail
        else:
            h_head = 2 * i + (1 - t)
            cell = medial_arc(*mp.half_name(mp.sigma_inv[h_head]))   # in-arc around the head
        signs[tok] = 1 if labels[cell] == D else -1
    return SignedCycle(frozenset(support), tuple(sorted(signs.items())))


@dataclass(frozen=True)
class JacobianPresentation:
    group: GroupPresentation
    cycles: tuple[SignedCycle, ...]

    @property
    def invariant_factors(self) -> list[int]:
        return self.group.invariant_factors

    @property
    def order(self) -> int:
        return self.group.order


@lru_cache(maxsize=64)
def jacobian_group(eg: EmbeddedGraph) -> JacobianPresentation:
    cycles = tuple(enumerate_cycles(eg))
    gens = [project_pi(c.vector(eg.edges)) for c in cycles]
    lat = IntegerLattice(gens, len(eg.edges))
    return JacobianPresentation(GroupPresentation(eg.edges, FiniteQuotient(lat), reduced=False), cycles)


def _as_edge_vector(eg: EmbeddedGraph, x: "Mapping[str, int] | Sequence[int]") -> dict[str, int]:
    if isinstance(x, Mapping):
        bad = set(x) - set(eg.edges)
        if bad:
            raise RibbonError(f"unknown edges {sorted(bad)}")
        return {e: int(x.get(e, 0)) for e in eg.edges}
    x = list(x)
    if len(x) != len(eg.edges):
        raise RibbonError(f"expected {len(eg.edges)} entries, got {len(x)}")
    return dict(zip(eg.edges, (int(a) for a in x)))


def jac_equivalent(eg: EmbeddedGraph, x1, x2) -> bool:
    return jacobian_group(eg).group.equivalent(_as_edge_vector(eg, x1), _as_edge_vector(eg, x2))


def phi(eg: EmbeddedGraph, x) -> dict[str, int]:
    """Linear map 1_e -> -chi(med+(e)) into chips on the medial nodes."""
    xv = _as_edge_vector(eg, x)
    d = eg.medial
    out = {v: 0 for v in d.vertices}
    for e, c in xv.items():
        if c:
            for v, k in chi(d, eg.med_plus(e)).items():
                out[v] -= c * k
    return out


# --------------------------------------------------------------- Bernardi --

def crossings(eg: EmbeddedGraph, q: Iterable[str], e0: str) -> list[tuple[str, str]]:
    """Half-edges crossed by the tour of q, in order, starting with the crossing into med+(e0)."""
    q = frozenset(q)
    tour = quasitree_to_tour(eg, q)
    arc_of = eg._arc_of
    seq = [arc_of[a] for a in tour.starting_at(eg.med_plus(e0))]
    out = []
    for i, h in enumerate(seq):
        prev = seq[i - 1]
        k = eg._sigma[prev]
        e = eg.edges[k >> 1]
        at_tail = (k & 1) == eg.tails[e]
        if h == k:
            out.append((e, PRIMAL_MINUS if at_tail else PRIMAL_PLUS))
        else:
            out.append((e, DUAL_MINUS if at_tail else DUAL_PLUS))
    return out


def bernardi_orientation(eg: EmbeddedGraph, q: Iterable[str], e0: str) -> tuple[int, ...]:
    """Sign vector (entries +-1 standing for +-1/2) in edge order."""
    q = frozenset(q)
    if e0 not in eg.edges:
        raise RibbonError(f"unknown edge {e0}")
    first: dict[tuple[str, str], int] = {}
    for i, c in enumerate(crossings(eg, q, e0)):
        first.setdefault(c, i)
    signs = []
    for e in eg.edges:
        if e in q:
            signs.append(1 if first[(e, DUAL_MINUS)] < first[(e, DUAL_PLUS)] else -1)
        else:
            signs.append(1 if first[(e, PRIMAL_PLUS)] < first[(e, PRIMAL_MINUS)] else -1)
    return tuple(signs)


def bernardi_action(eg: EmbeddedGraph, x, q: Iterable[str], e0: str | None = None,
                    quasitrees: Sequence[frozenset[str]] | None = None) -> frozenset[str]:
    """The quasi-tree q' whose orientation is equivalent to x + orientation(q)."""
    q = frozenset(q)
    if not is_quasitree(eg, q):
        raise RibbonError(f"{sorted(q)} is not a quasi-tree")
    e0 = e0 if e0 is not None else eg.edges[0]
    xv = _as_edge_vector(eg, x)
    grp = jacobian_group(eg).group
    base = bernardi_orientation(eg, q, e0)
    hits = []
    for q2 in quasitrees if quasitrees is not None else enumerate_quasitrees(eg):
        o2 = bernardi_orientation(eg, q2, e0)
        # (o2 - base)/2 is integral since entries are +-1
        diff = {e: (b - a) // 2 for e, a, b in zip(eg.edges, base, o2)}
        if grp.equivalent(diff, xv):
            hits.append(frozenset(q2))
    if len(hits) != 1:
        raise AssertionError(f"expected exactly one quasi-tree in the orientation class, found {len(hits)}")
    return hits[0]


@dataclass(frozen=True)
class AgreementReport:
    pairs: int
    mismatches: tuple[tuple[tuple[tuple[str, int], ...], frozenset[str], EulerianTour, EulerianTour], ...]

    @property
    def ok(self) -> bool:
        return not self.mismatches


def verify_action_agreement(eg: EmbeddedGraph) -> AgreementReport:
    jac = jacobian_group(eg)
    qts = enumerate_quasitrees(eg)
    d = eg.medial
    bad = []
    pairs = 0
    for x in jac.group.elements():
        for q in qts:
            pairs += 1
            lhs = quasitree_to_tour(eg, bernardi_action(eg, x, q, quasitrees=qts))
            rhs = tour_rotor_action(d, phi(eg, x), quasitree_to_tour(eg, q))
            if lhs != rhs:
                bad.append((tuple(x.items()), q, lhs, rhs))
    return AgreementReport(pairs, tuple(bad))
