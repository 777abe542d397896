"""Even lattices presented by generators inside a rational quadratic space."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from . import linalg
from .errors import DegenerateSpace, NonIntegralPairing, NotSublattice, OddNorm

Vector = tuple[Fraction, ...]


def _frac_rows(rows) -> tuple[Vector, ...]:
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


@dataclass(frozen=True)
class QuadSpace:
    """Q^dim with a nondegenerate symmetric bilinear form."""

    gram: tuple[Vector, ...]

    def __post_init__(self):
        g = _frac_rows(self.gram)
        object.__setattr__(self, "gram", g)
        n = len(g)
        if n == 0:
            raise DegenerateSpace("empty quadratic space")
        if any(len(row) != n for row in g):
            raise ValueError("gram matrix must be square")
        if any(g[i][j] != g[j][i] for i in range(n) for j in range(i)):
            raise ValueError("gram matrix must be symmetric")
        if linalg.determinant(g) == 0:
            raise DegenerateSpace("gram matrix is degenerate")

    @property
    def dim(self) -> int:
        return len(self.gram)

    def product(self, u: Sequence, v: Sequence) -> Fraction:
        return linalg.bilinear(u, self.gram, v)

    def norm(self, v: Sequence) -> Fraction:
        return self.product(v, v)


@dataclass(frozen=True)
class Signature:
    plus: int
    minus: int

    def __iter__(self):
        return iter((self.plus, self.minus))

    def __add__(self, other: "Signature") -> "Signature":
        return Signature(self.plus + other.plus, self.minus + other.minus)


@dataclass(frozen=True)
class Lattice:
    """A finitely generated subgroup of a QuadSpace.

    ``basis`` is the row-style Hermite normal form of the generators (taken over
    a common denominator), so equal lattices have equal bases.
    """

    space: QuadSpace
    generators: tuple[Vector, ...]
    basis: tuple[Vector, ...]
    gram: tuple[tuple[int, ...], ...]
    even: bool = field(default=True)

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def dim(self) -> int:
        return self.space.dim

    def coordinates(self, v: Sequence) -> list[int] | None:
        """Integer coordinates of v in ``basis`` or None when v is not in the lattice."""
        x = linalg.solve_left(self.basis, v)
        if x is None or any(c.denominator != 1 for c in x):
            return None
        return [int(c) for c in x]

    def __contains__(self, v) -> bool:
        return self.coordinates(v) is not None

    def __repr__(self) -> str:
        return f"Lattice(rank={self.rank}, dim={self.dim}, gram={[list(r) for r in self.gram]})"


def _hnf_basis(generators: Sequence[Sequence]) -> tuple[Vector, ...]:
    if not generators:
        return ()
    scaled, den = linalg.scale_to_integer(generators)
    h = linalg.hermite_normal_form(scaled)
    return tuple(tuple(Fraction(x, den) for x in row) for row in h)


def _build(space: QuadSpace, generators, require_even: bool) -> Lattice:
    gens = _frac_rows(generators)
    if any(len(v) != space.dim for v in gens):
        raise ValueError(f"generators must have length {space.dim}")
    basis = _hnf_basis(gens)
    gram_q = linalg.matmul(linalg.matmul(basis, space.gram), linalg.transpose(basis)) if basis else []
    for i, row in enumerate(gram_q):
        for j, x in enumerate(row):
            if x.denominator != 1:
                raise NonIntegralPairing(f"basis vectors {i},{j} pair to {x}")
    gram = tuple(tuple(int(x) for x in row) for row in gram_q)
    even = all(gram[i][i] % 2 == 0 for i in range(len(gram)))
    if require_even and not even:
        raise OddNorm("lattice has a vector of odd norm")
    return Lattice(space, gens, basis, gram, even)


def lattice_from_generators(space: QuadSpace, generators) -> Lattice:
    """Even lattice spanned by ``generators`` (rows, exact rationals)."""
    return _build(space, generators, require_even=True)


def odd_lattice_from_generators(space: QuadSpace, generators) -> Lattice:
    """Integral lattice without the evenness check.

    Kept out of the classification path; used for oracle searches only.
    """
    return _build(space, generators, require_even=False)


def lattice_from_gram(gram) -> Lattice:
    """The lattice Z^n with the given (even, nondegenerate) Gram matrix."""
    space = QuadSpace(gram)
    return lattice_from_generators(space, linalg.identity(space.dim))


def sublattice(ambient: Lattice, generators) -> Lattice:
    """Lattice spanned by ``generators`` inside the space of ``ambient``."""
    return lattice_from_generators(ambient.space, generators)


def determinant(lat: Lattice) -> int:
    return int(linalg.determinant(lat.gram))


def signature_of_gram(gram) -> Signature:
    """Sylvester inertia by exact symmetric elimination; zero directions are dropped."""
    m = [[Fraction(x) for x in row] for row in gram]
    plus = minus = 0
    while m:
        n = len(m)
        k = next((i for i in range(n) if m[i][i] != 0), None)
        if k is None:
            pair = next(((i, j) for i in range(n) for j in range(i + 1, n) if m[i][j] != 0), None)
            if pair is None:
                break
            i, j = pair
            # congruence row_i += row_j, col_i += col_j gives diagonal 2*m[i][j]
            m[i] = [a + b for a, b in zip(m[i], m[j])]
            for row in m:
                row[i] += row[j]
            k = i
        piv = m[k][k]
        if piv > 0:
            plus += 1
        else:
            minus += 1
        rest = [i for i in range(n) if i != k]
        m = [[m[i][j] - m[i][k] * m[k][j] / piv for j in rest] for i in rest]
    return Signature(plus, minus)


def signature(lat: Lattice) -> Signature:
    return signature_of_gram(lat.gram)


def rescale(lat: Lattice, m: int) -> Lattice:
    """S(m): same module, form multiplied by m."""
    if m == 0:
        raise ValueError("rescale factor must be nonzero")
    space = QuadSpace([[x * m for x in row] for row in lat.space.gram])
    return _build(space, lat.generators, require_even=lat.even)


def direct_sum(a: Lattice, b: Lattice) -> Lattice:
    n, k = a.dim, b.dim
    gram = [list(row) + [0] * k for row in a.space.gram] + [[0] * n + list(row) for row in b.space.gram]
    gens = [list(v) + [0] * k for v in a.basis] + [[0] * n + list(v) for v in b.basis]
    return _build(QuadSpace(gram), gens, require_even=a.even and b.even)


def direct_sum_all(lattices: Iterable[Lattice]) -> Lattice:
    it = iter(lattices)
    out = next(it)
    for lat in it:
        out = direct_sum(out, lat)
    return out


def _check_same_space(a: Lattice, b: Lattice):
    if a.space != b.space:
        raise NotSublattice("lattices live in different quadratic spaces")


def coordinate_matrix(sub: Lattice, sup: Lattice) -> list[list[int]]:
    """Coordinates of sub's basis in sup's basis; NotSublattice if not contained."""
    _check_same_space(sub, sup)
    rows = []
    for v in sub.basis:
        c = sup.coordinates(v)
        if c is None:
            raise NotSublattice("basis vector not contained in the super lattice")
        rows.append(c)
    return rows


def is_sublattice(sub: Lattice, sup: Lattice) -> bool:
    try:
        coordinate_matrix(sub, sup)
    except NotSublattice:
        return False
    return True


def index_in(sub: Lattice, sup: Lattice) -> int:
    """[sup : sub] for a full-rank sublattice, via Smith normal form."""
    coords = coordinate_matrix(sub, sup)
    if sub.rank != sup.rank:
        raise NotSublattice("index is only defined for sublattices of equal rank")
    out = 1
    for d in linalg.elementary_divisors(coords):
        out *= d
    return out


def orthogonal_complement(sub: Lattice, ambient: Lattice) -> Lattice:
    """All vectors of ``ambient`` orthogonal to ``sub`` (a primitive sublattice)."""
    coordinate_matrix(sub, ambient)
    if sub.rank == 0:
        return ambient
    pair = linalg.matmul(linalg.matmul(ambient.basis, ambient.space.gram), linalg.transpose(sub.basis))
    scaled, _ = linalg.scale_to_integer(pair)
    kernel = linalg.integer_left_kernel(scaled)
    gens = [linalg.vecmat(c, ambient.basis) for c in kernel]
    return _build(ambient.space, gens, require_even=ambient.even)


def saturation(sub: Lattice, ambient: Lattice) -> Lattice:
    """(sub tensor Q) intersected with ambient."""
    coords = coordinate_matrix(sub, ambient)
    if not coords:
        return _build(ambient.space, [], require_even=ambient.even)
    # integer relations killed by coords, then everything annihilated by those relations
    rel = linalg.integer_left_kernel(linalg.transpose(coords))
    if not rel:
        return ambient
    sat = linalg.integer_left_kernel(linalg.transpose(rel))
    gens = [linalg.vecmat(c, ambient.basis) for c in sat]
    return _build(ambient.space, gens, require_even=ambient.even)


def is_primitive(sub: Lattice, ambient: Lattice) -> bool:
    return saturation(sub, ambient).basis == sub.basis


def is_member(v: Sequence, lat: Lattice) -> bool:
    return lat.coordinates(v) is not None


def dual_basis(lat: Lattice) -> list[list[Fraction]]:
    """Rows of gram^-1 * basis: the dual lattice inside lat tensor Q."""
    ginv = linalg.inverse(lat.gram)
    return linalg.matmul(ginv, lat.basis)


# Standard lattices used throughout.

def hyperbolic_plane(m: int = 1) -> Lattice:
    """U(m)."""
    return lattice_from_gram([[0, m], [m, 0]])


def rank_one(n: int) -> Lattice:
    """<n>."""
    return lattice_from_gram([[n]])


E8_EDGES = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (2, 7)]


def e8_gram(sign: int = -1) -> list[list[int]]:
    """E8 Gram on the Dynkin labelling chain e1..e7 with e8 attached to e3."""
    g = [[0] * 8 for _ in range(8)]
    for i in range(8):
        g[i][i] = 2 * sign
    for i, j in E8_EDGES:
        g[i][j] = g[j][i] = -sign
    return g


def e8(m: int = -1) -> Lattice:
    """E8(m); m = -1 gives the negative definite E8(-1)."""
    return lattice_from_gram([[x * abs(m) for x in row] for row in e8_gram(-1 if m < 0 else 1)])


# Definite lattices: short vectors and isometry search.

def _ldl(gram) -> tuple[list[Fraction], list[list[Fraction]]]:
    """q(x) = sum_i d_i (x_i + sum_{j>i} mu_ij x_j)^2 for a positive definite Gram."""
    n = len(gram)
    a = [[Fraction(x) for x in row] for row in gram]
    d = [Fraction(0)] * n
    mu = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        d[i] = a[i][i] - sum(mu[k][i] ** 2 * d[k] for k in range(i))
        if d[i] <= 0:
            raise ValueError("Gram matrix is not positive definite")
        for j in range(i + 1, n):
            mu[i][j] = (a[i][j] - sum(mu[k][i] * mu[k][j] * d[k] for k in range(i))) / d[i]
    return d, mu


def short_vectors(gram, bound: int) -> list[tuple[int, ...]]:
    """Nonzero integer x with x G x^T <= bound for positive definite G (one of each +-x pair)."""
    from math import ceil, floor, isqrt

    d, mu = _ldl(gram)
    n = len(gram)
    out = []
    x = [0] * n

    def rec(i: int, rem: Fraction):
        if i < 0:
            if any(x):
                out.append(tuple(x))
            return
        c = sum(mu[i][j] * x[j] for j in range(i + 1, n))
        t = rem / d[i]
        r = isqrt(floor(t)) + 1
        for xi in range(ceil(-c - r), floor(-c + r) + 1):
            used = d[i] * (xi + c) ** 2
            if used <= rem:
                x[i] = xi
                rec(i - 1, rem - used)
        x[i] = 0

    rec(n - 1, Fraction(bound))
    seen = set()
    canon = []
    for v in out:
        neg = tuple(-a for a in v)
        if neg in seen:
            continue
        seen.add(v)
        canon.append(v)
    return canon


def find_isometry(source, target) -> list[list[int]] | None:
    """Integer matrix M with M * source * M^T = target, for definite Grams of equal determinant.

    Rows of M are coordinates (in the source basis) of images of the target basis.
    """
    n = len(target)
    if len(source) != n or linalg.determinant(source) != linalg.determinant(target):
        return None
    sign = 1 if target[0][0] > 0 else -1
    src = [[sign * x for x in row] for row in source]
    tgt = [[sign * x for x in row] for row in target]
    vecs = short_vectors(src, max(tgt[i][i] for i in range(n)))
    vecs += [tuple(-a for a in v) for v in vecs]
    by_norm: dict[int, list] = {}
    for v in vecs:
        by_norm.setdefault(linalg.bilinear(v, src, v), []).append(v)

    def rec(chosen):
        k = len(chosen)
        if k == n:
            return chosen
        for v in by_norm.get(tgt[k][k], []):
            if all(linalg.bilinear(v, src, w) == tgt[k][j] for j, w in enumerate(chosen)):
                found = rec(chosen + [v])
                if found:
                    return found
        return None

    found = rec([])
    return [list(v) for v in found] if found else None
