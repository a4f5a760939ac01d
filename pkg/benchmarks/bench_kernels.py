"""Time the numba kernels against their numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat N]

Each kernel gets a warm-up call first so numba compile time is not counted.
"""
import argparse
import random
import time

import numpy as np

from ribbonpile import kernels
from ribbonpile.generators import random_eulerian_digraph, random_ribbon_graph
from ribbonpile.jacobian import EmbeddedGraph, _ternary_masks
from ribbonpile.ribbon import cell_complex
from ribbonpile.rotor import _arrays


def best_of(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def game_case(rng):
    d = random_eulerian_digraph(rng, 40, 160)
    arr = _arrays(d)
    n = len(d.vertices)
    chips = np.array([rng.randint(0, 400) for _ in range(n)], dtype=np.int64)
    pos = np.zeros(n, dtype=np.int64)
    args = (chips, pos, arr.out_heads, arr.outdeg, 0, 10 ** 9)
    return (f"legal_game ({n} vertices, {len(d.arcs)} arcs, {int(chips.sum())} chips)",
            lambda: kernels.legal_game_numba(*args), lambda: kernels.legal_game_numpy(*args))


def components_case(rng):
    g = random_ribbon_graph(rng, 4, 9, loops=True)
    cx = cell_complex(g)
    arr = lambda t: np.array(t, dtype=np.int64)
    pm, dm = _ternary_masks(len(g.edges))
    args = (cx.n_cells, arr(cx.glue_a), arr(cx.glue_b), arr(cx.glue_edge), arr(cx.glue_dual), pm, dm)
    return (f"batch_components ({len(pm)} subtransversals, {cx.n_cells} cells)",
            lambda: kernels.batch_components_numba(*args), lambda: kernels.batch_components_numpy(*args))


def cycles_case(rng):
    g = random_ribbon_graph(rng, 6, 16, loops=True)
    eg = EmbeddedGraph.make(g)
    sigma = np.array(eg._sigma, dtype=np.int64)
    masks = np.arange(1 << len(eg.edges), dtype=np.int64)
    args = (sigma, sigma ^ 1, sigma >> 1, masks)
    return (f"batch_cycles ({len(masks)} edge subsets, {len(sigma)} corners)",
            lambda: kernels.batch_cycles_numba(*args), lambda: kernels.batch_cycles_numpy(*args))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args()
    if not kernels.NUMBA_AVAILABLE:
        raise SystemExit("numba is not importable; nothing to compare")
    rng = random.Random(a.seed)
    print(f"seed {a.seed}")
    print(f"{'kernel':<60} {'numba':>10} {'numpy':>10} {'ratio':>8}")
    for case in (game_case, components_case, cycles_case):
        label, jit, ref = case(rng)
        tj, tn = best_of(jit, a.repeat), best_of(ref, a.repeat)
        print(f"{label:<60} {tj * 1e3:>8.2f}ms {tn * 1e3:>8.2f}ms {tn / tj:>7.1f}x")


if __name__ == "__main__":
    main()
