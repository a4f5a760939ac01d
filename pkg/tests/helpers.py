"""Small graph builders shared by the tests."""
from ribbonpile.ribbon import RibbonGraph


def single_edge():
    return RibbonGraph.build(["u", "v"], [("e", "u", "v")], {"u": [("e", 0)], "v": [("e", 1)]})


def single_loop():
    # one contractible loop: both ends adjacent in the rotation
    return RibbonGraph.build(["v"], [("e", "v", "v")], {"v": [("e", 0), ("e", 1)]})


def single_vertex():
    return RibbonGraph.build(["v"], [], {"v": []})


def cycle_graph(n):
    vs = [f"v{i}" for i in range(n)]
    edges = [(f"e{i}", vs[i], vs[(i + 1) % n]) for i in range(n)]
    rot = {vs[i]: [(f"e{i}", 0), (f"e{(i - 1) % n}", 1)] for i in range(n)}
    return RibbonGraph.build(vs, edges, rot)


def rand_graph(rng, max_n, lo_m, hi_m, loops=True):
    from ribbonpile.generators import random_ribbon_graph
    n = rng.randint(1 if loops else 2, max_n)
    m = rng.randint(max(lo_m, n - 1), max(hi_m, n - 1))
    return random_ribbon_graph(rng, n, m, loops=loops)
