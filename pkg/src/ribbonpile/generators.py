"""Seeded random instances and small exhaustive catalogs."""
from __future__ import annotations

import random
from functools import lru_cache
from itertools import combinations_with_replacement, permutations, product

from .ribbon import HEAD, TAIL, RibbonDigraph, RibbonGraph


def _shuffled(rng: random.Random, xs):
    xs = list(xs)
    rng.shuffle(xs)
    return xs


def random_rotation_graph(rng: random.Random, vertices, edges) -> RibbonGraph:
    """Uniformly random rotation system on a fixed multigraph."""
    ends = {v: [] for v in vertices}
    for e, a, b in edges:
        ends[a].append((e, 0))
        ends[b].append((e, 1))
    return RibbonGraph.build(vertices, edges, {v: _shuffled(rng, hs) for v, hs in ends.items()})


def random_ribbon_graph(rng: random.Random, n: int, m: int, loops: bool = False) -> RibbonGraph:
    """Connected random multigraph (random tree plus extra edges) with a random rotation."""
    if m < n - 1:
        raise ValueError("need at least n - 1 edges for a connected graph")
    if n == 1 and m and not loops:
        raise ValueError("a loop-free graph on one vertex has no edges")
    vs = [f"v{i}" for i in range(n)]
    edges = []
    for i in range(1, n):
        edges.append((vs[rng.randrange(i)], vs[i]))
    while len(edges) < m:
        a, b = rng.choice(vs), rng.choice(vs)
        if a == b and not loops:
            continue
        edges.append((a, b))
    edges = [(f"e{i + 1}", a, b) if rng.random() < 0.5 else (f"e{i + 1}", b, a)
             for i, (a, b) in enumerate(edges)]
    return random_rotation_graph(rng, vs, edges)


def random_eulerian_digraph(rng: random.Random, max_vertices: int = 6, max_arcs: int = 12) -> RibbonDigraph:
    """Weakly connected Eulerian digraph built from one spanning cycle plus random cycles."""
    n = rng.randint(2, max_vertices)
    m_target = rng.randint(n, max(n, max_arcs))
    vs = [str(i) for i in range(n)]
    order = _shuffled(rng, vs)
    pairs = [(order[i], order[(i + 1) % n]) for i in range(n)]
    while len(pairs) < m_target:
        k = rng.randint(1, min(n, m_target - len(pairs)))
        cyc = rng.sample(vs, k)
        pairs.extend((cyc[i], cyc[(i + 1) % k]) for i in range(k))
    arcs = [(f"a{i}", t, h) for i, (t, h) in enumerate(pairs)]
    ends = {v: [] for v in vs}
    for a, t, h in arcs:
        ends[t].append((a, TAIL))
        ends[h].append((a, HEAD))
    return RibbonDigraph.build(vs, arcs, {v: _shuffled(rng, es) for v, es in ends.items()})


# -------------------------------------------------------------- catalogs ---

def _canonical(n: int, edges) -> tuple:
    return min(tuple(sorted(tuple(sorted((p[a], p[b]))) for a, b in edges)) for p in permutations(range(n)))


def _connected(n: int, edges) -> bool:
    adj = {i: set() for i in range(n)}
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    seen, stack = {0}, [0]
    while stack:
        u = stack.pop()
        for w in adj[u] - seen:
            seen.add(w)
            stack.append(w)
    return len(seen) == n


@lru_cache(maxsize=4)
def loopfree_graph_catalog(max_edges: int = 5) -> tuple[tuple[int, tuple[tuple[int, int], ...]], ...]:
    """Connected loop-free multigraphs with 1..max_edges edges, one per isomorphism class.

    Entries are (vertex count, edge list over range(n)).
    """
    out = []
    for m in range(1, max_edges + 1):
        for n in range(2, m + 2):
            seen = set()
            pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
            for multiset in combinations_with_replacement(pairs, m):
                if not _connected(n, multiset):
                    continue
                key = _canonical(n, multiset)
                if key in seen:
                    continue
                seen.add(key)
                out.append((n, key))
    return tuple(out)


def catalog_ribbon_graph(entry) -> RibbonGraph:
    """A ribbon graph on a catalog entry; rotation = edge order (the tests ignore it)."""
    n, edges = entry
    vs = [f"v{i}" for i in range(n)]
    eds = [(f"e{i + 1}", vs[a], vs[b]) for i, (a, b) in enumerate(edges)]
    ends = {v: [] for v in vs}
    for e, a, b in eds:
        ends[a].append((e, 0))
        ends[b].append((e, 1))
    return RibbonGraph.build(vs, eds, ends)


@lru_cache(maxsize=4)
def eulerian_digraph_catalog(max_vertices: int = 3, max_arcs: int = 6) -> tuple[tuple[int, tuple[tuple[int, int], ...]], ...]:
    """Weakly connected Eulerian multidigraphs (loops allowed), up to relabelling."""
    out = []
    for n in range(1, max_vertices + 1):
        slots = [(a, b) for a in range(n) for b in range(n)]
        seen = set()
        for m in range(1, max_arcs + 1):
            for multiset in combinations_with_replacement(slots, m):
                outd = [0] * n
                ind = [0] * n
                for a, b in multiset:
                    outd[a] += 1
                    ind[b] += 1
                if outd != ind or 0 in outd:
                    continue
                if not _connected(n, [(a, b) for a, b in multiset if a != b]):
                    continue
                key = min(tuple(sorted((p[a], p[b]) for a, b in multiset)) for p in permutations(range(n)))
                if key in seen:
                    continue
                seen.add(key)
                out.append((n, key))
    return tuple(out)


def _cyclic_orders(items):
    """Distinct cyclic arrangements of a multiset (first element pinned)."""
    first, rest = items[0], items[1:]
    seen = set()
    for p in permutations(rest):
        if p in seen:
            continue
        seen.add(p)
        yield (first,) + p


def catalog_digraph_variants(entry, rng: random.Random, cap: int = 8) -> list[RibbonDigraph]:
    """Ribbon digraphs on a catalog entry, one per distinct cyclic order of out-heads (capped, seeded).

    Parallel arcs are interchangeable for routing, so only the cyclic order of
    out-arc heads at each vertex matters; in-ends are appended after the out-ends.
    """
    n, arcs = entry
    vs = [str(i) for i in range(n)]
    per_vertex = []
    for v in range(n):
        heads = sorted(b for a, b in arcs if a == v)
        per_vertex.append(list(_cyclic_orders(tuple(heads))))
    combos = list(product(*per_vertex))
    if len(combos) > cap:
        combos = rng.sample(combos, cap)
    out = []
    for combo in combos:
        pool = {}
        for i, (a, b) in enumerate(arcs):
            pool.setdefault((a, b), []).append(f"a{i}")
        alist = [(f"a{i}", vs[a], vs[b]) for i, (a, b) in enumerate(arcs)]
        rot = {}
        for v in range(n):
            used = {k: list(x) for k, x in pool.items()}
            ents = [(used[(v, h)].pop(0), TAIL) for h in combo[v]]
            ents += [(name, HEAD) for name, t, h in alist if h == vs[v]]
            rot[vs[v]] = ents
        out.append(RibbonDigraph.build(vs, alist, rot))
    return out


ROOT_BATTERY_GRAPHS = {
    # small loop-free multigraphs with several possible genera
    "k4": (4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]),
    "theta": (2, [(0, 1), (0, 1), (0, 1)]),
    "c4chord": (4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]),
    "k3double": (3, [(0, 1), (0, 1), (1, 2), (2, 0)]),
    "k23": (5, [(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)]),
}
