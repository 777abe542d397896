from fractions import Fraction
from itertools import combinations
from math import gcd

import pytest
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import invariant_factors

from k3lattice import linalg


def random_matrix(rng, rows, cols, bound=9):
    return [[rng.randint(-bound, bound) for _ in range(cols)] for _ in range(rows)]


def random_unimodular(rng, n, steps=12):
    u = linalg.identity(n)
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        f = rng.randint(-3, 3)
        u[i] = [a + f * b for a, b in zip(u[i], u[j])]
    return u


def minor_gcd(a):
    """gcd of the maximal minors: the covolume invariant of the row lattice."""
    m = Matrix(a)
    r = m.rank()
    g = 0
    for rows in combinations(range(m.rows), r):
        for cols in combinations(range(m.cols), r):
            g = gcd(g, int(m.extract(list(rows), list(cols)).det()))
    return g


def spans_same(a, h):
    """Row lattice of a equals that of the independent rows h."""
    for row in a:
        x = linalg.solve_left(h, row)
        if x is None or any(c.denominator != 1 for c in x):
            return False
    return minor_gcd(a) == minor_gcd(h)


def test_xgcd():
    for a, b in [(12, 18), (-7, 3), (0, 5), (5, 0), (240, 46)]:
        g, s, t = linalg.xgcd(a, b)
        assert g >= 0 and s * a + t * b == g
        assert a % g == 0 if g else a == 0


def test_determinant_matches_sympy(rng):
    for _ in range(30):
        n = rng.randint(1, 6)
        m = random_matrix(rng, n, n)
        assert linalg.determinant(m) == Matrix(m).det()


def test_determinant_of_fractions():
    m = [[Fraction(1, 2), 1], [3, Fraction(2, 3)]]
    assert linalg.determinant(m) == Fraction(1, 3) - 3


def test_inverse_roundtrip(rng):
    for _ in range(20):
        n = rng.randint(1, 5)
        m = random_matrix(rng, n, n)
        if linalg.determinant(m) == 0:
            continue
        assert linalg.matmul(m, linalg.inverse(m)) == linalg.identity(n)


def test_inverse_of_singular_raises():
    with pytest.raises(Exception):
        linalg.inverse([[1, 2], [2, 4]])


def test_rank_matches_sympy(rng):
    for _ in range(20):
        m = random_matrix(rng, rng.randint(1, 5), rng.randint(1, 5), bound=2)
        assert linalg.rank(m) == Matrix(m).rank()


def test_hnf_shape_and_span(rng):
    for _ in range(40):
        a = random_matrix(rng, rng.randint(1, 6), rng.randint(1, 5))
        h = linalg.hermite_normal_form(a)
        assert len(h) == linalg.rank(a)
        assert spans_same(a, h)
        pivots = [next(j for j, x in enumerate(row) if x) for row in h]
        assert pivots == sorted(set(pivots))
        for r, c in enumerate(pivots):
            assert h[r][c] > 0
            assert all(0 <= h[i][c] < h[r][c] for i in range(r))


def test_hnf_is_canonical_under_unimodular_change(rng):
    for _ in range(30):
        n = rng.randint(2, 5)
        a = random_matrix(rng, n, rng.randint(n, 6))
        u = random_unimodular(rng, n)
        assert linalg.hermite_normal_form(linalg.matmul(u, a)) == linalg.hermite_normal_form(a)


def test_snf_matches_sympy_invariant_factors(rng):
    for _ in range(40):
        a = random_matrix(rng, rng.randint(1, 5), rng.randint(1, 5))
        diag, p, q = linalg.smith_normal_form(a)
        d = linalg.matmul(linalg.matmul(p, a), q)
        assert all(d[i][j] == (diag[i] if i == j else 0)
                   for i in range(len(d)) for j in range(len(d[0])))
        assert abs(linalg.determinant(p)) == 1 and abs(linalg.determinant(q)) == 1
        nonzero = [x for x in diag if x]
        assert all(b % a == 0 for a, b in zip(nonzero, nonzero[1:]))
        expected = [int(x) for x in invariant_factors(Matrix(a), domain=ZZ)]
        assert nonzero == [x for x in expected if x]


def test_integer_left_kernel(rng):
    for _ in range(20):
        a = random_matrix(rng, rng.randint(2, 6), rng.randint(1, 3), bound=4)
        k = linalg.integer_left_kernel(a)
        assert len(k) == len(a) - linalg.rank(a)
        for row in k:
            assert linalg.vecmat(row, a) == [0] * len(a[0])


def test_quotient_structure():
    big = linalg.identity(3)
    small = [[2, 0, 0], [0, 4, 0], [1, 1, 6]]
    basis, diag = linalg.quotient_structure(big, small)
    assert diag == [1, 2, 24]
    assert abs(linalg.determinant(basis)) == 1
    cyc = linalg.quotient_basis(big, small)
    assert [d for _, d in cyc] == [2, 24]


def test_quotient_structure_rejects_non_containment():
    with pytest.raises(ValueError):
        linalg.quotient_structure([[2, 0], [0, 2]], [[1, 0], [0, 1]])
