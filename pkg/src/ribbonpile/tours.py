"""Eulerian tours, compatibility, the last-exit (BEST) bijection and the tour-rotor action."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .ribbon import RibbonDigraph, RibbonError, RibbonGraph, arc_edge, arc_name, bidirect
from .rotor import Arborescence, ChipRotorState, residue, rotor_action_digraph, tree_arborescence
from .sandpile import chips_vector, require_eulerian


@dataclass(frozen=True)
class EulerianTour:
    """A cyclic arc sequence, stored rotated so its least arc id comes first."""

    order: tuple[str, ...]

    @classmethod
    def of(cls, seq: Iterable[str]) -> "EulerianTour":
        s = tuple(seq)
        if not s:
            return cls(())
        k = s.index(min(s))
        return cls(s[k:] + s[:k])

    def starting_at(self, a: str) -> tuple[str, ...]:
        k = self.order.index(a)
        return self.order[k:] + self.order[:k]

    def __len__(self) -> int:
        return len(self.order)

    def __str__(self) -> str:
        return " ".join(("tour",) + self.order)


def check_tour(d: RibbonDigraph, e: EulerianTour) -> None:
    if sorted(e.order) != sorted(d.arc_map):
        raise RibbonError("sequence does not use every arc exactly once")
    n = len(e.order)
    for i, a in enumerate(e.order):
        b = e.order[(i + 1) % n]
        if d.head(a) != d.tail(b):
            raise RibbonError(f"tour breaks between {a} and {b}: head {d.head(a)} != tail {d.tail(b)}")


def is_compatible(d: RibbonDigraph, e: EulerianTour) -> bool:
    check_tour(d, e)
    seen: dict[str, list[str]] = {}
    for a in e.order:
        seen.setdefault(d.tail(a), []).append(a)
    for v, deps in seen.items():
        outs = d.out_arcs(v)
        k = outs.index(deps[0])
        if list(outs[k:] + outs[:k]) != deps:
            return False
    return True


def _require_compatible(d: RibbonDigraph, e: EulerianTour) -> None:
    if not is_compatible(d, e):
        raise RibbonError("tour is not compatible with the ribbon structure")


def tour_to_arb(d: RibbonDigraph, e: EulerianTour, first_arc: str) -> Arborescence:
    """Last-exit arborescence A_first(e), rooted at the tail of first_arc."""
    _require_compatible(d, e)
    seq = e.starting_at(first_arc)
    root = d.tail(first_arc)
    last = {}
    for a in seq:
        last[d.tail(a)] = a
    last.pop(root, None)
    return Arborescence.make(root, last)


def arb_to_tour(d: RibbonDigraph, t: Arborescence, first_arc: str) -> EulerianTour:
    """Inverse of tour_to_arb: walk by last-exit scheduling."""
    require_eulerian(d)
    if d.tail(first_arc) != t.root:
        raise RibbonError(f"first arc {first_arc} does not leave the root {t.root}")
    tree = t.as_dict()
    queue: dict[str, list[str]] = {}
    for v in d.vertices:
        outs = list(d.out_arcs(v))
        if not outs:
            continue
        if v == t.root:
            k = outs.index(first_arc)
        else:
            k = (outs.index(tree[v]) + 1) % len(outs)
        queue[v] = outs[k:] + outs[:k]
    walk = []
    v = t.root
    while queue.get(v):
        a = queue[v].pop(0)
        walk.append(a)
        v = d.head(a)
    if v != t.root or len(walk) != len(d.arcs):
        raise RibbonError("last-exit walk did not close up into an Eulerian tour")
    return EulerianTour.of(walk)


def enumerate_compatible_tours(d: RibbonDigraph) -> set[EulerianTour]:
    """All compatible tours by depth-first search.

    Every tour is started at the least arc id.  Once a vertex has been left
    through some out-arc, compatibility forces all of its later departures, so
    the only branching is the first departure from each vertex.
    """
    require_eulerian(d)
    if not d.arcs:
        return {EulerianTour(())}
    ix = d.index
    m = len(d.arcs)
    a0 = ix.aidx[min(ix.arc_ids)]
    root = ix.tail[a0]
    nxt = [-1] * len(d.vertices)     # next out position for departed vertices
    used = [False] * m
    seq = [a0]
    used[a0] = True
    nxt[root] = (ix.out_pos[a0] + 1) % len(ix.out_arcs[root])
    found: set[EulerianTour] = set()

    def go(v: int) -> None:
        if len(seq) == m:
            if v == root and nxt[root] == ix.out_pos[a0]:
                found.add(EulerianTour.of(ix.arc_ids[i] for i in seq))
            return
        outs = ix.out_arcs[v]
        if nxt[v] >= 0:
            options = [outs[nxt[v]]]
        else:
            options = list(outs)
        for a in options:
            if used[a]:
                continue
            saved = nxt[v]
            used[a] = True
            seq.append(a)
            nxt[v] = (ix.out_pos[a] + 1) % len(outs)
            go(ix.head[a])
            nxt[v] = saved
            seq.pop()
            used[a] = False

    go(ix.head[a0])
    return found


def tour_rotor_action(d: RibbonDigraph, x: Mapping[str, int], e: EulerianTour,
                      arc: str | None = None, verify: bool = False) -> EulerianTour:
    """The tour-rotor action of the class of x on the compatible tour e.

    `arc` picks the auxiliary arc (default: least arc id).  With verify=True
    the result is recomputed through every arc and must agree.
    """
    _require_compatible(d, e)
    if sum(chips_vector(d, x)):
        raise RibbonError("chip configuration must have sum 0")
    arcs = [arc if arc is not None else min(d.arc_map)]
    if verify:
        arcs = sorted(d.arc_map)
    results = set()
    for a in arcs:
        root = d.tail(a)
        t = rotor_action_digraph(d, root, x, tour_to_arb(d, e, a))
        results.add(arb_to_tour(d, t, a))
    if len(results) != 1:
        raise AssertionError(f"tour-rotor action depends on the auxiliary arc: {len(results)} results")
    return results.pop()


def first_edge_shift(d: RibbonDigraph, uv: str, wz: str) -> dict[str, int]:
    """1_v - 1_z for arcs uv, wz."""
    x = {w: 0 for w in d.vertices}
    x[d.head(uv)] += 1
    x[d.head(wz)] -= 1
    return x


def first_edge_states(d: RibbonDigraph, e: EulerianTour, uv: str, wz: str) -> tuple[ChipRotorState, ChipRotorState]:
    a1 = tour_to_arb(d, e, uv).as_dict()
    a1[d.tail(uv)] = uv
    a2 = tour_to_arb(d, e, wz).as_dict()
    a2[d.tail(wz)] = wz
    return ChipRotorState(first_edge_shift(d, uv, wz), a1), ChipRotorState({}, a2)


# ---------------------------------------------------- root independence ---

@dataclass(frozen=True)
class RootWitness:
    tree: frozenset[str]
    roots: tuple[str, str]
    y: tuple[tuple[str, int], ...]


def spanning_trees(g: RibbonGraph) -> list[frozenset[str]]:
    """Spanning trees by include/exclude branching over the edges."""
    edges = [(e, a, b) for e, a, b in g.edges if a != b]
    need = len(g.vertices) - 1
    out: list[frozenset[str]] = []

    def find(comp, v):
        while comp[v] != v:
            v = comp[v]
        return v

    def go(i, chosen, comp):
        if len(chosen) == need:
            out.append(frozenset(chosen))
            return
        if len(edges) - i < need - len(chosen):
            return
        e, a, b = edges[i]
        ra, rb = find(comp, a), find(comp, b)
        if ra != rb:
            c2 = dict(comp)
            c2[ra] = rb
            go(i + 1, chosen + [e], c2)
        go(i + 1, chosen, comp)

    go(0, [], {v: v for v in g.vertices})
    return sorted(out, key=sorted)


def check_root_independence(g: RibbonGraph) -> tuple[bool, RootWitness | None]:
    """Compare the rotor-routing actions at the two ends of every non-loop edge.

    For an adjacent pair (u, w) with arcs a1 = u->w and a2 = the next out-arc at
    w after the reverse arc, y is the element with (y, T1^u + a1) ~ (0, A_a1(A_a2^-1(T1^w)) + a1)
    for the first tree T1; then r(y, A^-1_a1(T^u)) must equal A^-1_a2(T^w) for all T.
    Connectivity makes adjacent pairs enough.
    """
    d = bidirect(g)
    trees = spanning_trees(g)
    pairs = []
    for e, a, b in g.edges:
        if a != b:
            pairs.append((a, b, arc_name(e, 0)))
            pairs.append((b, a, arc_name(e, 1)))
    done = set()
    for u, w, a1 in pairs:
        if (u, w) in done:
            continue
        done.add((u, w))
        back = [x for x, t, h in d.arcs if t == w and h == u and arc_edge(x) == arc_edge(a1)][0]
        a2 = d.nextout(w, back)
        t1 = trees[0]
        tour_w = arb_to_tour(d, tree_arborescence(g, w, t1), a2)
        target = tour_to_arb(d, tour_w, a1).as_dict()
        target[u] = a1
        start = tree_arborescence(g, u, t1).as_dict()
        start[u] = a1
        y = [-c for c in residue(d, start, target)]
        ymap = dict(zip(d.vertices, y))
        for t in trees:
            tour_u = arb_to_tour(d, tree_arborescence(g, u, t), a1)
            got = tour_rotor_action(d, ymap, tour_u, arc=a1)
            want = arb_to_tour(d, tree_arborescence(g, w, t), a2)
            if got != want:
                return False, RootWitness(t, (u, w), tuple(ymap.items()))
    return True, None
