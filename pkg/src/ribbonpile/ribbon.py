"""Ribbon graphs and ribbon digraphs as combinatorial maps.

A half-edge of a ribbon graph is a pair (edge id, side) with side 0 or 1;
edge `e` listed as `edge e a b` has side 0 at `a` and side 1 at `b`.
The rotation at a vertex is its counterclockwise cyclic list of half-edges.

Internally half-edge (edge i, side s) gets the integer 2*i + s, so the
edge involution is `h ^ 1`.  sigma(h) is the next half-edge counterclockwise
around the vertex of h.  Faces are the orbits of phi = alpha . sigma; the face
of an orbit lies to the left of every half-edge in it, read as a dart leaving
its vertex.

A corner c(h) is the angular sector between h and sigma(h).  Corners double as
medial arcs and as the cells of the overlay of g with its dual.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

TAIL = "tail"
HEAD = "head"

HalfEdge = tuple[str, int]
ArcEnd = tuple[str, str]


class RibbonError(ValueError):
    """Raised when an object violates the ribbon-structure invariants."""


def _components(n: int, pairs: Iterable[tuple[int, int]]) -> int:
    parent = list(range(n))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    count = n
    for a, b in pairs:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
            count -= 1
    return count


@dataclass(frozen=True)
class _GraphMap:
    """Integer view of a valid ribbon graph."""

    edge_ids: tuple[str, ...]
    vertex_of: tuple[int, ...]        # half-edge -> vertex index
    sigma: tuple[int, ...]
    sigma_inv: tuple[int, ...]
    first_half: tuple[int, ...]       # vertex -> some half-edge, -1 if isolated

    def phi(self, h: int) -> int:
        return self.sigma[h] ^ 1

    def half_name(self, h: int) -> HalfEdge:
        return (self.edge_ids[h >> 1], h & 1)


@dataclass(frozen=True)
class FaceSet:
    faces: tuple[tuple[HalfEdge, ...], ...]
    genus: int


@dataclass(frozen=True)
class RibbonGraph:
    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str, str], ...]
    rotation: tuple[tuple[str, tuple[HalfEdge, ...]], ...]

    @classmethod
    def build(cls, vertices: Iterable[str], edges: Iterable[Sequence[str]],
              rotation: Mapping[str, Iterable[Sequence]]) -> "RibbonGraph":
        verts = tuple(str(v) for v in vertices)
        eds = tuple((str(e), str(a), str(b)) for e, a, b in edges)
        rot = tuple((v, tuple((str(e), int(s)) for e, s in rotation.get(v, ()))) for v in verts)
        extra = set(rotation) - set(verts)
        if extra:
            # keep them so validate() can report them
            rot += tuple((v, tuple((str(e), int(s)) for e, s in rotation[v])) for v in sorted(extra))
        return cls(verts, eds, rot)

    @cached_property
    def rotation_map(self) -> dict[str, tuple[HalfEdge, ...]]:
        return dict(self.rotation)

    @cached_property
    def edge_map(self) -> dict[str, tuple[str, str]]:
        return {e: (a, b) for e, a, b in self.edges}

    def endpoint(self, e: str, side: int) -> str:
        return self.edge_map[e][side]

    def is_loop(self, e: str) -> bool:
        a, b = self.edge_map[e]
        return a == b

    def validate(self) -> list[str]:
        out: list[str] = []
        vset = set(self.vertices)
        if len(vset) != len(self.vertices):
            out.append("duplicate vertex id")
        emap: dict[str, tuple[str, str]] = {}
        for e, a, b in self.edges:
            if e in emap:
                out.append(f"duplicate edge id {e}")
            emap[e] = (a, b)
            for v in (a, b):
                if v not in vset:
                    out.append(f"edge {e} has unknown endpoint {v}")
        seen: dict[HalfEdge, str] = {}
        for v, entries in self.rotation:
            if v not in vset:
                out.append(f"rotation given for unknown vertex {v}")
                continue
            for e, s in entries:
                if e not in emap:
                    out.append(f"dangling half-edge {e}:{s} at {v}: no such edge")
                    continue
                if s not in (0, 1):
                    out.append(f"bad side {e}:{s} at {v}")
                    continue
                if (e, s) in seen:
                    out.append(f"duplicate rotation entry {e}:{s}")
                    continue
                seen[(e, s)] = v
                if emap[e][s] != v:
                    out.append(f"half-edge {e}:{s} listed at {v} but that end is at {emap[e][s]}")
        for e, (a, b) in emap.items():
            for s, v in ((0, a), (1, b)):
                if (e, s) not in seen and v in vset:
                    out.append(f"half-edge missing: {e}:{s} at {v}")
        if not out and self.vertices:
            idx = {v: i for i, v in enumerate(self.vertices)}
            n = _components(len(self.vertices), ((idx[a], idx[b]) for _, a, b in self.edges))
            if n != 1:
                out.append(f"disconnected: {n} components")
        if not self.vertices:
            out.append("no vertices")
        return out

    def check(self) -> None:
        problems = self.validate()
        if problems:
            raise RibbonError("invalid ribbon graph: " + "; ".join(problems))

    @cached_property
    def _map(self) -> _GraphMap:
        self.check()
        eidx = {e: i for i, (e, _, _) in enumerate(self.edges)}
        m = 2 * len(self.edges)
        vertex_of = [0] * m
        sigma = [0] * m
        first = []
        for vi, v in enumerate(self.vertices):
            hs = [2 * eidx[e] + s for e, s in self.rotation_map.get(v, ())]
            first.append(hs[0] if hs else -1)
            for k, h in enumerate(hs):
                vertex_of[h] = vi
                sigma[h] = hs[(k + 1) % len(hs)]
        sigma_inv = [0] * m
        for h in range(m):
            sigma_inv[sigma[h]] = h
        return _GraphMap(tuple(e for e, _, _ in self.edges), tuple(vertex_of), tuple(sigma),
                         tuple(sigma_inv), tuple(first))

    @cached_property
    def face_orbits(self) -> tuple[tuple[int, ...], ...]:
        """phi-orbits in integer form, ordered by their least half-edge."""
        mp = self._map
        m = len(mp.sigma)
        seen = [False] * m
        faces = []
        for h in range(m):
            if seen[h]:
                continue
            orbit = []
            k = h
            while not seen[k]:
                seen[k] = True
                orbit.append(k)
                k = mp.phi(k)
            faces.append(tuple(orbit))
        return tuple(faces)

    @cached_property
    def face_of(self) -> tuple[int, ...]:
        out = [0] * (2 * len(self.edges))
        for i, orbit in enumerate(self.face_orbits):
            for h in orbit:
                out[h] = i
        return tuple(out)

    @property
    def num_faces(self) -> int:
        return len(self.face_orbits) if self.edges else 1

    @property
    def genus(self) -> int:
        chi = len(self.vertices) - len(self.edges) + self.num_faces
        return (2 - chi) // 2


def trace_faces(g: RibbonGraph) -> FaceSet:
    mp = g._map
    if not g.edges:
        return FaceSet(((),), 0)
    faces = tuple(tuple(mp.half_name(h) for h in orbit) for orbit in g.face_orbits)
    chi = len(g.vertices) - len(g.edges) + len(faces)
    if chi % 2:
        raise AssertionError("odd Euler characteristic; face tracing is broken")
    return FaceSet(faces, (2 - chi) // 2)


def genus(g: "RibbonGraph | RibbonDigraph") -> int:
    if isinstance(g, RibbonDigraph):
        g = g.underlying()
    return trace_faces(g).genus


@dataclass(frozen=True)
class _DigraphIndex:
    vertex_ids: tuple[str, ...]
    vidx: dict
    arc_ids: tuple[str, ...]
    aidx: dict
    tail: tuple[int, ...]
    head: tuple[int, ...]
    out_arcs: tuple[tuple[int, ...], ...]    # per vertex, rotation order
    out_pos: tuple[int, ...]                 # arc -> position in its tail's out list
    in_deg: tuple[int, ...]


@dataclass(frozen=True)
class RibbonDigraph:
    vertices: tuple[str, ...]
    arcs: tuple[tuple[str, str, str], ...]
    rotation: tuple[tuple[str, tuple[ArcEnd, ...]], ...]

    @classmethod
    def build(cls, vertices: Iterable[str], arcs: Iterable[Sequence[str]],
              rotation: Mapping[str, Iterable[Sequence[str]]]) -> "RibbonDigraph":
        verts = tuple(str(v) for v in vertices)
        arcs_t = tuple((str(a), str(t), str(h)) for a, t, h in arcs)
        rot = tuple((v, tuple((str(a), str(tag)) for a, tag in rotation.get(v, ()))) for v in verts)
        extra = set(rotation) - set(verts)
        if extra:
            rot += tuple((v, tuple((str(a), str(t)) for a, t in rotation[v])) for v in sorted(extra))
        return cls(verts, arcs_t, rot)

    @cached_property
    def rotation_map(self) -> dict[str, tuple[ArcEnd, ...]]:
        return dict(self.rotation)

    @cached_property
    def arc_map(self) -> dict[str, tuple[str, str]]:
        return {a: (t, h) for a, t, h in self.arcs}

    def tail(self, a: str) -> str:
        return self.arc_map[a][0]

    def head(self, a: str) -> str:
        return self.arc_map[a][1]

    def validate(self) -> list[str]:
        out: list[str] = []
        vset = set(self.vertices)
        if len(vset) != len(self.vertices):
            out.append("duplicate vertex id")
        amap: dict[str, tuple[str, str]] = {}
        for a, t, h in self.arcs:
            if a in amap:
                out.append(f"duplicate arc id {a}")
            amap[a] = (t, h)
            for v in (t, h):
                if v not in vset:
                    out.append(f"arc {a} has unknown endpoint {v}")
        seen: set[ArcEnd] = set()
        for v, entries in self.rotation:
            if v not in vset:
                out.append(f"rotation given for unknown vertex {v}")
                continue
            for a, tag in entries:
                if a not in amap:
                    out.append(f"dangling arc-end {a}:{tag} at {v}: no such arc")
                    continue
                if tag not in (TAIL, HEAD):
                    out.append(f"bad end tag {a}:{tag} at {v}")
                    continue
                if (a, tag) in seen:
                    out.append(f"duplicate rotation entry {a}:{tag}")
                    continue
                seen.add((a, tag))
                want = amap[a][0] if tag == TAIL else amap[a][1]
                if want != v:
                    out.append(f"arc-end {a}:{tag} listed at {v} but belongs at {want}")
        for a, (t, h) in amap.items():
            if (a, TAIL) not in seen and t in vset:
                out.append(f"arc-end missing: {a}:tail at {t}")
            if (a, HEAD) not in seen and h in vset:
                out.append(f"arc-end missing: {a}:head at {h}")
        if not self.vertices:
            out.append("no vertices")
        elif not out:
            idx = {v: i for i, v in enumerate(self.vertices)}
            n = _components(len(self.vertices), ((idx[t], idx[h]) for _, t, h in self.arcs))
            if n != 1:
                out.append(f"disconnected: {n} weak components")
        return out

    def check(self) -> None:
        problems = self.validate()
        if problems:
            raise RibbonError("invalid ribbon digraph: " + "; ".join(problems))

    @cached_property
    def index(self) -> _DigraphIndex:
        self.check()
        vidx = {v: i for i, v in enumerate(self.vertices)}
        aidx = {a: i for i, (a, _, _) in enumerate(self.arcs)}
        tail = tuple(vidx[t] for _, t, _ in self.arcs)
        head = tuple(vidx[h] for _, _, h in self.arcs)
        outs = []
        pos = [0] * len(self.arcs)
        for v in self.vertices:
            lst = tuple(aidx[a] for a, tag in self.rotation_map.get(v, ()) if tag == TAIL)
            for k, i in enumerate(lst):
                pos[i] = k
            outs.append(lst)
        indeg = [0] * len(self.vertices)
        for h in head:
            indeg[h] += 1
        return _DigraphIndex(self.vertices, vidx, tuple(a for a, _, _ in self.arcs), aidx,
                             tail, head, tuple(outs), tuple(pos), tuple(indeg))

    def out_arcs(self, v: str) -> tuple[str, ...]:
        ix = self.index
        return tuple(ix.arc_ids[i] for i in ix.out_arcs[ix.vidx[v]])

    def outdeg(self, v: str) -> int:
        ix = self.index
        return len(ix.out_arcs[ix.vidx[v]])

    def indeg(self, v: str) -> int:
        ix = self.index
        return ix.in_deg[ix.vidx[v]]

    def nextout(self, v: str, a: str) -> str:
        """Out-arc following `a` in the rotation at v (restricted to out-arcs)."""
        ix = self.index
        i = ix.aidx[a]
        if ix.tail[i] != ix.vidx[v]:
            raise RibbonError(f"arc {a} does not leave {v}")
        lst = ix.out_arcs[ix.tail[i]]
        return ix.arc_ids[lst[(ix.out_pos[i] + 1) % len(lst)]]

    def prevout(self, v: str, a: str) -> str:
        ix = self.index
        i = ix.aidx[a]
        if ix.tail[i] != ix.vidx[v]:
            raise RibbonError(f"arc {a} does not leave {v}")
        lst = ix.out_arcs[ix.tail[i]]
        return ix.arc_ids[lst[(ix.out_pos[i] - 1) % len(lst)]]

    def is_eulerian(self) -> bool:
        ix = self.index
        return all(len(o) == d for o, d in zip(ix.out_arcs, ix.in_deg))

    def is_balanced(self) -> bool:
        """In- and out-ends alternate around every vertex."""
        for _, entries in self.rotation:
            tags = [t for _, t in entries]
            if len(tags) % 2:
                return False
            if any(tags[k] == tags[(k + 1) % len(tags)] for k in range(len(tags))):
                return False
        return True

    def underlying(self) -> RibbonGraph:
        """Forget directions: arc a becomes edge a with side 0 at its tail."""
        side = {TAIL: 0, HEAD: 1}
        return RibbonGraph.build(self.vertices, self.arcs,
                                 {v: [(a, side[t]) for a, t in ents] for v, ents in self.rotation})


def arc_name(e: str, side: int) -> str:
    """Arc of the bidirected double leaving along half-edge (e, side)."""
    return f"{e}+" if side == 0 else f"{e}-"


def bidirect(g: RibbonGraph) -> RibbonDigraph:
    """Each edge e becomes e+ (side-0 end to side-1 end) and e- (reverse).

    At the rotation slot of half-edge h the double lists the arc leaving
    along h, then the arc arriving along h.
    """
    g.check()
    arcs = []
    for e, a, b in g.edges:
        arcs.append((arc_name(e, 0), a, b))
        arcs.append((arc_name(e, 1), b, a))
    rot = {}
    for v, hs in g.rotation:
        ents = []
        for e, s in hs:
            ents.append((arc_name(e, s), TAIL))
            ents.append((arc_name(e, 1 - s), HEAD))
        rot[v] = ents
    return RibbonDigraph.build(g.vertices, arcs, rot)


def twin(arc: str) -> str:
    """Reverse arc in a bidirected double."""
    return arc[:-1] + ("-" if arc.endswith("+") else "+")


def arc_edge(arc: str) -> str:
    return arc[:-1]


def face_id(i: int) -> str:
    return f"f{i}"


def dual_edge(e: str) -> str:
    return f"{e}*"


def dual(g: RibbonGraph) -> RibbonGraph:
    """Dual ribbon graph: one vertex per face, edge e* crossing e.

    Side s of e* sits in the face to the left of half-edge (e, s).  The
    counterclockwise rotation at a dual vertex sends (h)* to (sigma^-1 alpha h)*.
    """
    mp = g._map
    if not g.edges:
        return RibbonGraph.build([face_id(0)], [], {})
    orbits = g.face_orbits
    fo = g.face_of
    verts = [face_id(i) for i in range(len(orbits))]
    edges = []
    for i, e in enumerate(mp.edge_ids):
        edges.append((dual_edge(e), verts[fo[2 * i]], verts[fo[2 * i + 1]]))
    rot = {}
    for i, orbit in enumerate(orbits):
        start = orbit[0]
        seq = [start]
        k = mp.sigma_inv[start ^ 1]
        while k != start:
            seq.append(k)
            k = mp.sigma_inv[k ^ 1]
        rot[verts[i]] = [(dual_edge(mp.edge_ids[h >> 1]), h & 1) for h in seq]
    return RibbonGraph.build(verts, edges, rot)


def medial_arc(e: str, side: int) -> str:
    """Medial arc for the corner that starts at half-edge (e, side)."""
    return f"{e}.{side}"


def medial(g: RibbonGraph) -> RibbonDigraph:
    """Medial digraph: node v_e per edge, one arc per corner c(h) from v_e(h) to v_e(sigma h).

    Rotation at v_e: in-arc around the side-0 end, out-arc around the side-1
    end, in-arc around the side-1 end, out-arc around the side-0 end.
    """
    mp = g._map
    arcs = []
    for h in range(len(mp.sigma)):
        e, s = mp.half_name(h)
        f, _ = mp.half_name(mp.sigma[h])
        arcs.append((medial_arc(e, s), e, f))
    rot = {}
    for i, e in enumerate(mp.edge_ids):
        h0, h1 = 2 * i, 2 * i + 1
        rot[e] = [
            (medial_arc(*mp.half_name(mp.sigma_inv[h0])), HEAD),
            (medial_arc(e, 1), TAIL),
            (medial_arc(*mp.half_name(mp.sigma_inv[h1])), HEAD),
            (medial_arc(e, 0), TAIL),
        ]
    return RibbonDigraph.build(mp.edge_ids, arcs, rot)


def parse_subtransversal(g: RibbonGraph, s: Iterable[str]) -> tuple[frozenset[str], frozenset[str]]:
    """Split ids like 'e3' / 'e3*' into primal and dual parts and check them."""
    primal, dual_ = set(), set()
    for tok in s:
        if tok.endswith("*"):
            dual_.add(tok[:-1])
        else:
            primal.add(tok)
    unknown = (primal | dual_) - set(g.edge_map)
    if unknown:
        raise RibbonError(f"unknown edges in subtransversal: {sorted(unknown)}")
    both = primal & dual_
    if both:
        raise RibbonError(f"not a subtransversal: contains both e and e* for {sorted(both)}")
    return frozenset(primal), frozenset(dual_)


@dataclass(frozen=True)
class CellComplex:
    """Overlay cells of g and its dual, indexed by half-edge (= corner = medial arc).

    glue_a[k], glue_b[k] are cells sharing a half-segment; the segment belongs
    to edge glue_edge[k], primal when glue_dual[k] is 0, dual half otherwise.
    """

    n_cells: int
    glue_a: tuple[int, ...]
    glue_b: tuple[int, ...]
    glue_edge: tuple[int, ...]
    glue_dual: tuple[int, ...]


def cell_complex(g: RibbonGraph) -> CellComplex:
    mp = g._map
    a, b, ed, du = [], [], [], []
    for h in range(len(mp.sigma)):
        # primal half h separates c(sigma^-1 h) and c(h)
        a.append(mp.sigma_inv[h]); b.append(h); ed.append(h >> 1); du.append(0)
        # dual half on the left of h separates c(h) and c(sigma^-1 alpha h)
        a.append(h); b.append(mp.sigma_inv[h ^ 1]); ed.append(h >> 1); du.append(1)
    return CellComplex(len(mp.sigma), tuple(a), tuple(b), tuple(ed), tuple(du))


def complement_components(g: RibbonGraph, s: Iterable[str] = ()) -> tuple[int, dict[str, int]]:
    """Components of the surface with the closed arcs of s removed.

    s holds edge ids, with a trailing '*' for dual edges.  Returns the count
    and a label per cell (cells are named like medial arcs).
    """
    primal, dual_ = parse_subtransversal(g, s)
    mp = g._map
    cx = cell_complex(g)
    if cx.n_cells == 0:
        return 1, {}
    parent = list(range(cx.n_cells))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b, ei, du in zip(cx.glue_a, cx.glue_b, cx.glue_edge, cx.glue_dual):
        e = mp.edge_ids[ei]
        if (e in dual_) if du else (e in primal):
            continue
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    roots: dict[int, int] = {}
    labels = {}
    for h in range(cx.n_cells):
        r = find(h)
        labels[medial_arc(*mp.half_name(h))] = roots.setdefault(r, len(roots))
    return len(roots), labels


def _is_cycle(g: RibbonGraph, c: frozenset[str]) -> bool:
    if not c:
        return False
    deg: dict[str, int] = {}
    for e in c:
        a, b = g.edge_map[e]
        deg[a] = deg.get(a, 0) + 1
        deg[b] = deg.get(b, 0) + 1
    if any(d != 2 for d in deg.values()):
        return False
    vs = sorted(deg)
    idx = {v: i for i, v in enumerate(vs)}
    return _components(len(vs), ((idx[g.edge_map[e][0]], idx[g.edge_map[e][1]]) for e in c)) == 1


def cycle_is_separating(g: RibbonGraph, c: Iterable[str]) -> bool:
    """Does the cycle with edge set c cut the surface in two?

    Glues faces across every edge outside c and counts the pieces.
    """
    cs = frozenset(c)
    unknown = cs - set(g.edge_map)
    if unknown:
        raise RibbonError(f"unknown edges {sorted(unknown)}")
    if not _is_cycle(g, cs):
        raise RibbonError(f"edge set {sorted(cs)} is not a cycle")
    fo = g.face_of
    mp = g._map
    pairs = [(fo[2 * i], fo[2 * i + 1]) for i, e in enumerate(mp.edge_ids) if e not in cs]
    return _components(len(g.face_orbits), pairs) >= 2


def ribbon_isomorphic(g1: RibbonGraph, g2: RibbonGraph) -> bool:
    """Orientation-preserving isomorphism of connected ribbon graphs (ids ignored)."""
    m1, m2 = g1._map, g2._map
    if len(g1.vertices) != len(g2.vertices) or len(m1.sigma) != len(m2.sigma):
        return False
    if not m1.sigma:
        return True
    n = len(m1.sigma)
    for target in range(n):
        f = [-1] * n
        f[0] = target
        stack = [0]
        ok = True
        while stack and ok:
            h = stack.pop()
            for x, y in ((m1.sigma[h], m2.sigma[f[h]]), (h ^ 1, f[h] ^ 1)):
                if f[x] == -1:
                    f[x] = y
                    stack.append(x)
                elif f[x] != y:
                    ok = False
                    break
        if ok and len(set(f)) == n:
            return True
    return False
