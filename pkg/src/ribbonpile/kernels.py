"""Hot loops, each in a numba-compiled and a plain numpy flavour.

Set RIBBONPILE_DISABLE_NUMBA=1 to force the numpy versions (they are also
used automatically when numba cannot be imported).  Both flavours are always
importable under explicit names so tests and the benchmark can compare them.

Kernels:
  legal_game         rotor-routing game until off-root chips are exhausted
  batch_components   component counts of the overlay cell complex per mask
  batch_cycles       number of cycles of a mask-dependent permutation
"""
from __future__ import annotations

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

NUMBA_AVAILABLE = numba is not None
USE_NUMBA = NUMBA_AVAILABLE and os.environ.get("RIBBONPILE_DISABLE_NUMBA", "").lower() not in ("1", "true", "yes")


class GameOverrun(RuntimeError):
    """The legal game did not settle within its step guard."""


# ---------------------------------------------------------------- numpy ----

def legal_game_numpy(chips, rotor_pos, out_heads, outdeg, root, max_steps):
    """Rounds of simultaneous routing: every positive off-root vertex routes once.

    Any legal schedule gives the same final rotors, so the parallel rounds are
    fine.  Returns the number of routings performed, or -1 on overrun.
    """
    chips = chips.copy()
    pos = rotor_pos.copy()
    n = chips.shape[0]
    off_root = np.ones(n, dtype=bool)
    off_root[root] = False
    steps = 0
    while True:
        active = np.nonzero((chips > 0) & off_root)[0]
        if active.size == 0:
            return chips, pos, steps
        steps += active.size
        if steps > max_steps:
            return chips, pos, -1
        pos[active] = (pos[active] + 1) % outdeg[active]
        chips[active] -= 1
        np.add.at(chips, out_heads[active, pos[active]], 1)


def batch_components_numpy(n_cells, glue_a, glue_b, glue_edge, glue_dual, primal_masks, dual_masks):
    """Min-label propagation, vectorised over all masks at once."""
    B = primal_masks.shape[0]
    if n_cells == 0:
        return np.ones(B, dtype=np.int64)
    edge_bit = (np.int64(1) << glue_edge.astype(np.int64))
    primal_hit = (primal_masks[:, None] & edge_bit[None, :]) != 0
    dual_hit = (dual_masks[:, None] & edge_bit[None, :]) != 0
    blocked = np.where(glue_dual[None, :] == 1, dual_hit, primal_hit)
    open_ = ~blocked
    labels = np.broadcast_to(np.arange(n_cells, dtype=np.int64), (B, n_cells)).copy()
    rows = np.arange(B)[:, None]
    while True:
        la = labels[:, glue_a]
        lb = labels[:, glue_b]
        m = np.where(open_, np.minimum(la, lb), np.iinfo(np.int64).max)
        new = labels.copy()
        np.minimum.at(new, (np.broadcast_to(rows, m.shape), np.broadcast_to(glue_a, m.shape)), m)
        np.minimum.at(new, (np.broadcast_to(rows, m.shape), np.broadcast_to(glue_b, m.shape)), m)
        # pointer jumping keeps the number of rounds logarithmic-ish
        new = np.take_along_axis(new, new, axis=1)
        if np.array_equal(new, labels):
            break
        labels = new
    return (labels == np.arange(n_cells)[None, :]).sum(axis=1).astype(np.int64)


def batch_cycles_numpy(succ_off, succ_on, switch_bit, masks):
    """Cycle count of h -> (succ_on[h] if bit switch_bit[h] of mask else succ_off[h])."""
    n = succ_off.shape[0]
    B = masks.shape[0]
    if n == 0:
        return np.zeros(B, dtype=np.int64)
    on = (masks[:, None] >> switch_bit.astype(np.int64)[None, :]) & 1
    perm = np.where(on == 1, succ_on[None, :], succ_off[None, :]).astype(np.int64)
    label = np.broadcast_to(np.arange(n, dtype=np.int64), (B, n)).copy()
    span = 1
    while span < n:
        label = np.minimum(label, np.take_along_axis(label, perm, axis=1))
        perm = np.take_along_axis(perm, perm, axis=1)
        span *= 2
    return (label == np.arange(n)[None, :]).sum(axis=1).astype(np.int64)


# ---------------------------------------------------------------- numba ----

if NUMBA_AVAILABLE:

    @numba.njit(cache=True)
    def _legal_game_jit(chips, pos, out_heads, outdeg, root, max_steps):
        n = chips.shape[0]
        steps = 0
        u = 0
        while u < n:
            if u == root or chips[u] <= 0:
                u += 1
                continue
            # least-index positive vertex routes once
            steps += 1
            if steps > max_steps:
                return -1
            p = pos[u] + 1
            if p == outdeg[u]:
                p = 0
            pos[u] = p
            chips[u] -= 1
            w = out_heads[u, p]
            chips[w] += 1
            if w < u:
                u = w
        return steps

    @numba.njit(cache=True)
    def _batch_components_jit(n_cells, glue_a, glue_b, glue_edge, glue_dual, primal_masks, dual_masks):
        B = primal_masks.shape[0]
        out = np.empty(B, dtype=np.int64)
        parent = np.empty(n_cells, dtype=np.int64)
        for k in range(B):
            if n_cells == 0:
                out[k] = 1
                continue
            for i in range(n_cells):
                parent[i] = i
            count = n_cells
            pm = primal_masks[k]
            dm = dual_masks[k]
            for g in range(glue_a.shape[0]):
                bit = np.int64(1) << glue_edge[g]
                if glue_dual[g] == 1:
                    if dm & bit:
                        continue
                elif pm & bit:
                    continue
                a = glue_a[g]
                while parent[a] != a:
                    parent[a] = parent[parent[a]]
                    a = parent[a]
                b = glue_b[g]
                while parent[b] != b:
                    parent[b] = parent[parent[b]]
                    b = parent[b]
                if a != b:
                    parent[a] = b
                    count -= 1
            out[k] = count
        return out

    @numba.njit(cache=True)
    def _batch_cycles_jit(succ_off, succ_on, switch_bit, masks):
        n = succ_off.shape[0]
        B = masks.shape[0]
        out = np.zeros(B, dtype=np.int64)
        seen = np.zeros(n, dtype=np.bool_)
        for k in range(B):
            m = masks[k]
            seen[:] = False
            c = 0
            for s in range(n):
                if seen[s]:
                    continue
                c += 1
                h = s
                while not seen[h]:
                    seen[h] = True
                    if (m >> switch_bit[h]) & 1:
                        h = succ_on[h]
                    else:
                        h = succ_off[h]
            out[k] = c
        return out


def legal_game_numba(chips, rotor_pos, out_heads, outdeg, root, max_steps):
    chips = chips.copy()
    pos = rotor_pos.copy()
    steps = _legal_game_jit(chips, pos, out_heads, outdeg, np.int64(root), np.int64(max_steps))
    return chips, pos, int(steps)


def batch_components_numba(n_cells, glue_a, glue_b, glue_edge, glue_dual, primal_masks, dual_masks):
    return _batch_components_jit(np.int64(n_cells), glue_a, glue_b, glue_edge, glue_dual,
                                 primal_masks, dual_masks)


def batch_cycles_numba(succ_off, succ_on, switch_bit, masks):
    return _batch_cycles_jit(succ_off, succ_on, switch_bit, masks)


if USE_NUMBA:
    legal_game = legal_game_numba
    batch_components = batch_components_numba
    batch_cycles = batch_cycles_numba
else:
    legal_game = legal_game_numpy
    batch_components = batch_components_numpy
    batch_cycles = batch_cycles_numpy

BACKEND = "numba" if USE_NUMBA else "numpy"
