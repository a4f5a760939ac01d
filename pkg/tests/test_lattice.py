import random

import pytest
from hypothesis import given, settings, strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from ribbonpile.lattice import FiniteQuotient, IntegerLattice, det_bareiss, hermite_normal_form, smith_normal_form

small = st.integers(-6, 6)


def matrices(max_rows=4, max_cols=4):
    return st.integers(1, max_cols).flatmap(
        lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=1, max_size=max_rows))


def sympy_diag(rows):
    M = sympy_snf(Matrix(rows), domain=ZZ)
    return sorted(abs(int(M[i, i])) for i in range(min(M.shape)))


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_snf_diagonal_matches_sympy(rows):
    diag, V, Vi = smith_normal_form(rows, len(rows[0]))
    assert sorted(diag) == sympy_diag(rows)
    for a, b in zip(diag, diag[1:]):
        if a:
            assert b % a == 0
    n = len(rows[0])
    prod = [[sum(V[i][k] * Vi[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    assert prod == [[int(i == j) for j in range(n)] for i in range(n)]


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 5).flatmap(lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n)))
def test_bareiss_matches_sympy(M):
    assert det_bareiss(M) == int(Matrix(M).det())


@settings(max_examples=100, deadline=None)
@given(matrices(), st.lists(small, min_size=4, max_size=4))
def test_hnf_membership(rows, coeffs):
    n = len(rows[0])
    lat = IntegerLattice(rows, n)
    comb = [sum(c * r[j] for c, r in zip(coeffs, rows)) for j in range(n)]
    assert lat.contains(comb)
    # same lattice, same basis
    basis, _ = hermite_normal_form(rows + [comb], n)
    assert [tuple(b) for b in basis] == lat.basis


def test_hnf_shape():
    basis, piv = hermite_normal_form([[2, 4, 4], [-6, 6, 12], [10, 4, 16]], 3)
    assert piv == [0, 1, 2]
    for i, (b, c) in enumerate(zip(basis, piv)):
        assert b[c] > 0
        assert all(x == 0 for x in b[:c])
        for above in basis[:i]:
            assert 0 <= above[c] < b[c]


def test_reduce_is_canonical():
    lat = IntegerLattice([[3, 0], [1, 5]], 2)
    assert lat.reduce([4, 5]) == lat.reduce([0, 0])
    assert lat.reduce([1, 0]) == lat.reduce([4, 0])
    assert not lat.contains([1, 0])


def test_quotient_z4():
    q = FiniteQuotient(IntegerLattice([[4]], 1))
    assert q.invariant_factors == [4]
    assert q.order == 4 and q.exponent == 4
    assert len(set(q.elements())) == 4


def test_quotient_elements_are_distinct_classes():
    rng = random.Random(3)
    for _ in range(20):
        n = rng.randint(1, 3)
        rows = [[rng.randint(-4, 4) for _ in range(n)] for _ in range(n + 1)]
        lat = IntegerLattice(rows, n)
        if lat.rank < n:
            continue
        q = FiniteQuotient(lat)
        els = list(q.elements())
        assert len(els) == q.order == abs(int(Matrix([list(b) for b in lat.basis]).det()))
        assert len({q.key(e) for e in els}) == q.order
        for e in els:
            assert q.element(q.coordinates(e)) == q.key(e)


def test_infinite_quotient_rejected():
    with pytest.raises(ValueError):
        FiniteQuotient(IntegerLattice([[1, 1]], 2))
