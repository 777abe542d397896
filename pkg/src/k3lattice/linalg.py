"""Exact integer and rational matrix routines.

Matrices are plain lists of rows. Entries are ``int`` or ``fractions.Fraction``;
nothing here ever touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

Matrix = list[list]


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with g = gcd(a, b) >= 0 and s*a + t*b = g."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        return -a, -s0, -t0
    return a, s0, t0


def identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def transpose(a: Sequence[Sequence]) -> Matrix:
    return [list(col) for col in zip(*a)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def vecmat(v: Sequence, a: Sequence[Sequence]) -> list:
    if not a:
        return []
    return [sum(x * row[j] for x, row in zip(v, a)) for j in range(len(a[0]))]


def dot(u: Sequence, v: Sequence):
    return sum(x * y for x, y in zip(u, v))


def bilinear(u: Sequence, gram: Sequence[Sequence], v: Sequence):
    return dot(vecmat(u, gram), v)


def to_fraction_matrix(a) -> Matrix:
    return [[Fraction(x) for x in row] for row in a]


def common_denominator(a: Sequence[Sequence]) -> int:
    den = 1
    for row in a:
        for x in row:
            den = lcm(den, Fraction(x).denominator)
    return den


def scale_to_integer(a: Sequence[Sequence]) -> tuple[Matrix, int]:
    """Return (A*den, den) with den the least common denominator."""
    den = common_denominator(a)
    return [[int(Fraction(x) * den) for x in row] for row in a], den


def is_integral(a: Sequence[Sequence]) -> bool:
    return all(Fraction(x).denominator == 1 for row in a for x in row)


def determinant(a: Sequence[Sequence]):
    """Fraction-free Bareiss determinant; exact for int or Fraction entries."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(row) for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[i][j] * m[k][k] - m[i][k] * m[k][j]
                if isinstance(num, int) and isinstance(prev, int):
                    m[i][j] = num // prev
                else:
                    m[i][j] = Fraction(num) / prev
        prev = m[k][k]
    det = sign * m[n - 1][n - 1]
    if isinstance(det, Fraction) and det.denominator == 1:
        return int(det)
    return det


def rref(a: Sequence[Sequence]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form over Q; returns (nonzero rows, pivot columns)."""
    m = [[Fraction(x) for x in row] for row in a]
    rows = len(m)
    cols = len(m[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m[:r], pivots


def rank(a: Sequence[Sequence]) -> int:
    if not a:
        return 0
    return len(rref(a)[1])


def inverse(a: Sequence[Sequence]) -> Matrix:
    n = len(a)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(a)]
    red, piv = rref(aug)
    if piv[:n] != list(range(n)) or len(red) < n:
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in red]


def solve_left(a: Sequence[Sequence], v: Sequence) -> list[Fraction] | None:
    """Find x with x*A = v over Q (A has independent rows); None if v not in row space."""
    if not a:
        return [] if all(x == 0 for x in v) else None
    k = len(a)
    # columns of the augmented system: A^T x = v
    aug = [[Fraction(a[i][j]) for i in range(k)] + [Fraction(v[j])] for j in range(len(v))]
    red, piv = rref(aug)
    if k in piv:
        return None
    x = [Fraction(0)] * k
    for row, c in zip(red, piv):
        x[c] = row[k]
    return x


def hermite_normal_form(a: Sequence[Sequence[int]]) -> Matrix:
    """Row-style HNF of an integer matrix, zero rows dropped.

    Pivots are positive; entries above a pivot lie in [0, pivot).
    """
    m = [list(map(int, row)) for row in a]
    rows = len(m)
    cols = len(m[0]) if m else 0
    r = 0
    for c in range(cols):
        if r == rows:
            break
        for i in range(r + 1, rows):
            if m[i][c] == 0:
                continue
            g, s, t = xgcd(m[r][c], m[i][c])
            u, w = m[r][c] // g, m[i][c] // g
            top = [s * x + t * y for x, y in zip(m[r], m[i])]
            bot = [-w * x + u * y for x, y in zip(m[r], m[i])]
            m[r], m[i] = top, bot
        if m[r][c] == 0:
            continue
        if m[r][c] < 0:
            m[r] = [-x for x in m[r]]
        p = m[r][c]
        for i in range(r):
            f = m[i][c] // p
            if f:
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        r += 1
    return m[:r]


def integer_left_kernel(a: Sequence[Sequence[int]]) -> Matrix:
    """Basis (rows) of {x in Z^m : x*A = 0} for an integer m x n matrix A.

    The returned basis spans a saturated sublattice of Z^m.
    """
    m = len(a)
    if m == 0:
        return []
    n = len(a[0])
    aug = [list(map(int, row)) + [int(i == j) for j in range(m)] for i, row in enumerate(a)]
    h = hermite_normal_form(aug)
    return [row[n:] for row in h if all(x == 0 for x in row[:n])]


def smith_normal_form(a: Sequence[Sequence[int]]) -> tuple[list[int], Matrix, Matrix]:
    """Smith form of an integer m x n matrix.

    Returns (diag, P, Q) with P*A*Q diagonal, P and Q unimodular and
    diag[i] | diag[i+1]; diag has min(m, n) entries, all >= 0.
    """
    m = [list(map(int, row)) for row in a]
    rows = len(m)
    cols = len(m[0]) if m else 0
    p = identity(rows)
    q = identity(cols)

    def add_row(dst, src, f):
        for mat in (m, p):
            mat[dst] = [x + f * y for x, y in zip(mat[dst], mat[src])]

    def add_col(dst, src, f):
        for mat in (m, q):
            for row in mat:
                row[dst] += f * row[src]

    def swap_cols(i, j):
        for mat in (m, q):
            for row in mat:
                row[i], row[j] = row[j], row[i]

    for k in range(min(rows, cols)):
        while True:
            best = None
            for i in range(k, rows):
                for j in range(k, cols):
                    if m[i][j] and (best is None or abs(m[i][j]) < abs(m[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                return [m[i][i] for i in range(min(rows, cols))], p, q
            i, j = best
            if i != k:
                m[i], m[k] = m[k], m[i]
                p[i], p[k] = p[k], p[i]
            if j != k:
                swap_cols(j, k)
            piv = m[k][k]
            for i in range(k + 1, rows):
                if m[i][k]:
                    add_row(i, k, -(m[i][k] // piv))
            for j in range(k + 1, cols):
                if m[k][j]:
                    add_col(j, k, -(m[k][j] // piv))
            # remainders are strictly smaller than the pivot: pick again
            if any(m[i][k] for i in range(k + 1, rows)) or any(m[k][j] for j in range(k + 1, cols)):
                continue
            bad = next((i for i in range(k + 1, rows)
                        if any(m[i][j] % piv for j in range(k + 1, cols))), None)
            if bad is None:
                break
            add_row(k, bad, 1)
        if m[k][k] < 0:
            m[k] = [-x for x in m[k]]
            p[k] = [-x for x in p[k]]
    return [m[i][i] for i in range(min(rows, cols))], p, q


def elementary_divisors(a: Sequence[Sequence[int]]) -> list[int]:
    return smith_normal_form(a)[0]


def quotient_structure(big: Sequence[Sequence], small: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Adapted basis for full-rank lattices small <= big in Q^n.

    Returns (B, d) where the rows of B form a basis of ``big`` and the rows
    d_i * B_i form a basis of ``small``; d is a divisibility chain.
    """
    den = lcm(common_denominator(big), common_denominator(small))
    bint = hermite_normal_form([[int(Fraction(x) * den) for x in row] for row in big])
    sint = hermite_normal_form([[int(Fraction(x) * den) for x in row] for row in small])
    n = len(bint)
    if len(sint) != n or (bint and len(bint[0]) != n):
        raise ValueError("quotient_structure needs full-rank lattices")
    coords = matmul(sint, inverse(bint))
    if not is_integral(coords):
        raise ValueError("small lattice is not contained in big lattice")
    coords = [[int(x) for x in row] for row in coords]
    diag, _, q = smith_normal_form(coords)
    # small = rowspan(P^-1 S Q^-1 B) = rowspan(S * Q^-1 B)
    bprime = matmul(inverse(q), bint)
    return [[Fraction(x, den) for x in row] for row in bprime], diag


def quotient_basis(big: Sequence[Sequence], small: Sequence[Sequence]) -> list[tuple[list[Fraction], int]]:
    """Cyclic decomposition of big/small: [(generator, order)] for the nontrivial factors."""
    basis, diag = quotient_structure(big, small)
    return [(row, d) for row, d in zip(basis, diag) if d != 1]
