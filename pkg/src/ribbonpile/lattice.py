"""Exact integer lattice algebra: Hermite and Smith normal forms.

Everything here works on plain Python ints, so entries never overflow.
Matrices are lists of row lists.  A lattice is always the *row* span of
its generator matrix.
"""
from __future__ import annotations

from itertools import product
from math import gcd
from typing import Iterable, Iterator, Sequence

Vector = tuple[int, ...]


def _copy(rows: Iterable[Sequence[int]]) -> list[list[int]]:
    return [[int(a) for a in r] for r in rows]


def hermite_normal_form(rows: Iterable[Sequence[int]], dim: int) -> tuple[list[list[int]], list[int]]:
    """Row-style Hermite normal form of the lattice spanned by `rows`.

    Returns (basis, pivots): basis rows are in echelon form with positive
    pivots, entries above each pivot reduced into [0, pivot).  Zero rows
    are dropped.
    """
    work = [r for r in _copy(rows) if any(r)]
    for r in work:
        if len(r) != dim:
            raise ValueError(f"row of length {len(r)} in a lattice of dimension {dim}")
    basis: list[list[int]] = []
    pivots: list[int] = []
    for col in range(dim):
        live = [r for r in work if r[col] != 0]
        if not live:
            continue
        rest = [r for r in work if r[col] == 0]
        # Euclid on the column until a single row carries it
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[col]))
            p = live[0]
            nxt = [p]
            for r in live[1:]:
                q = r[col] // p[col]
                r = [a - q * b for a, b in zip(r, p)]
                if r[col] != 0:
                    nxt.append(r)
                elif any(r):
                    rest.append(r)
            live = nxt
        piv = live[0]
        if piv[col] < 0:
            piv = [-a for a in piv]
        basis.append(piv)
        pivots.append(col)
        work = rest
    # reduce above pivots
    for i in range(len(basis)):
        c, p = pivots[i], basis[i][pivots[i]]
        for j in range(i):
            q = basis[j][c] // p
            if q:
                basis[j] = [a - q * b for a, b in zip(basis[j], basis[i])]
    return basis, pivots


def smith_normal_form(rows: Sequence[Sequence[int]], dim: int) -> tuple[list[int], list[list[int]], list[list[int]]]:
    """Smith form of an m x dim matrix A.

    Returns (diag, V, Vinv) with U A V = D for some unimodular U, D having
    `diag` (length min(m, dim), divisibility chain, nonnegative) on its
    diagonal.  V and Vinv are dim x dim and mutually inverse.
    The row operations are not tracked; nothing downstream needs U.
    """
    A = _copy(rows)
    m = len(A)
    V = [[int(i == j) for j in range(dim)] for i in range(dim)]
    Vi = [[int(i == j) for j in range(dim)] for i in range(dim)]

    def col_swap(i: int, j: int) -> None:
        if i == j:
            return
        for r in A:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]
        Vi[i], Vi[j] = Vi[j], Vi[i]

    def col_sub(j: int, t: int, q: int) -> None:
        # col_j -= q * col_t
        for r in A:
            r[j] -= q * r[t]
        for r in V:
            r[j] -= q * r[t]
        rt, rj = Vi[t], Vi[j]
        for k in range(dim):
            rt[k] += q * rj[k]

    diag: list[int] = []
    for t in range(min(m, dim)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, dim):
                    a = A[i][j]
                    if a and (best is None or abs(a) < best[0]):
                        best = (abs(a), i, j)
            if best is None:
                break
            _, i, j = best
            A[t], A[i] = A[i], A[t]
            col_swap(t, j)
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // p
                    A[i] = [a - q * b for a, b in zip(A[i], A[t])]
                    dirty = dirty or A[i][t] != 0
            for j in range(t + 1, dim):
                if A[t][j]:
                    col_sub(j, t, A[t][j] // p)
                    dirty = dirty or A[t][j] != 0
            if dirty:
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, dim) if A[i][j] % p), None)
            if bad is None:
                break
            A[t] = [a + b for a, b in zip(A[t], A[bad[0]])]
        if best is None and all(A[i][j] == 0 for i in range(t, m) for j in range(t, dim)):
            diag.extend([0] * (min(m, dim) - t))
            break
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
        diag.append(A[t][t])
    return diag, V, Vi


def det_bareiss(M: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free elimination."""
    a = _copy(M)
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            sw = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if sw is None:
                return 0
            a[k], a[sw] = a[sw], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


class IntegerLattice:
    """Row lattice with an exact membership test and canonical coset representatives."""

    def __init__(self, generators: Iterable[Sequence[int]], dim: int):
        self.dim = dim
        self.generators = [tuple(int(a) for a in g) for g in generators]
        basis, pivots = hermite_normal_form(self.generators, dim)
        self.basis = [tuple(b) for b in basis]
        self.pivots = pivots

    @property
    def rank(self) -> int:
        return len(self.basis)

    def reduce(self, v: Sequence[int]) -> Vector:
        """Canonical representative of v + L (pivot coordinates in [0, pivot))."""
        w = [int(a) for a in v]
        if len(w) != self.dim:
            raise ValueError(f"expected a vector of length {self.dim}, got {len(w)}")
        for b, c in zip(self.basis, self.pivots):
            q = w[c] // b[c]
            if q:
                w = [x - q * y for x, y in zip(w, b)]
        return tuple(w)

    def contains(self, v: Sequence[int]) -> bool:
        return not any(self.reduce(v))


class FiniteQuotient:
    """The group Z^dim / L for a full-rank lattice L.

    Group elements are handled through integer vectors; `key` gives a hashable
    canonical label of a class, `elements` walks one representative per class.
    """

    def __init__(self, lattice: IntegerLattice):
        if lattice.rank != lattice.dim:
            raise ValueError("quotient is infinite: lattice is not of full rank")
        self.lattice = lattice
        gens = lattice.basis if lattice.basis else []
        if lattice.dim:
            diag, V, Vi = smith_normal_form(gens, lattice.dim)
        else:
            diag, V, Vi = [], [], []
        self._diag = diag
        self._V = V
        self._Vi = Vi
        self._nontrivial = [i for i, d in enumerate(diag) if d != 1]

    @property
    def invariant_factors(self) -> list[int]:
        return [self._diag[i] for i in self._nontrivial]

    @property
    def order(self) -> int:
        out = 1
        for d in self._diag:
            out *= d
        return out

    @property
    def exponent(self) -> int:
        e = 1
        for d in self.invariant_factors:
            e = e * d // gcd(e, d)
        return e

    def key(self, v: Sequence[int]) -> Vector:
        return self.lattice.reduce(v)

    def equivalent(self, v: Sequence[int], w: Sequence[int]) -> bool:
        return self.lattice.contains([a - b for a, b in zip(v, w)])

    def coordinates(self, v: Sequence[int]) -> tuple[int, ...]:
        """Coordinates of the class of v in the cyclic decomposition."""
        n = self.lattice.dim
        out = []
        for i in self._nontrivial:
            s = sum(int(v[k]) * self._V[k][i] for k in range(n))
            out.append(s % self._diag[i])
        return tuple(out)

    def generator(self, i: int) -> Vector:
        """Representative of the i-th cyclic generator (order invariant_factors[i])."""
        return tuple(self._Vi[self._nontrivial[i]])

    def element(self, coords: Sequence[int]) -> Vector:
        n = self.lattice.dim
        v = [0] * n
        for c, i in zip(coords, self._nontrivial):
            row = self._Vi[i]
            for k in range(n):
                v[k] += c * row[k]
        return self.key(v)

    def elements(self) -> Iterator[Vector]:
        """One canonical representative per class."""
        for coords in product(*(range(d) for d in self.invariant_factors)):
            yield self.element(coords)
