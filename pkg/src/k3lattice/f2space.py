"""The quadratic space (F_2^5, x1x2 + x3x4 + x5^2), its subspaces and orthogonal group.

Vectors are 5-bit integers; bit i (value 1 << i) holds the coordinate x_{i+1}.
A subspace is stored as its reduced row echelon basis, a sorted tuple of ints.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

N = 5
FULL = (1 << N) - 1
RADICAL = 1 << 4  # e5


def bit(v: int, i: int) -> int:
    return (v >> i) & 1


def quad_value(v: int) -> int:
    return (bit(v, 0) & bit(v, 1)) ^ (bit(v, 2) & bit(v, 3)) ^ bit(v, 4)


def polar(u: int, v: int) -> int:
    """b(u, v) = q(u + v) + q(u) + q(v) over F_2."""
    return quad_value(u ^ v) ^ quad_value(u) ^ quad_value(v)


def to_string(v: int) -> str:
    """'x1x2x3x4x5' as a bit string."""
    return "".join(str(bit(v, i)) for i in range(N))


def from_string(s: str) -> int:
    return sum(int(c) << i for i, c in enumerate(s))


def span(vectors) -> set[int]:
    out = {0}
    for v in vectors:
        out |= {x ^ v for x in out}
    return out


def rref(vectors) -> tuple[int, ...]:
    """Canonical basis: reduced echelon form, pivot = highest set bit of each row."""
    pivots: dict[int, int] = {}
    for v in vectors:
        for lead in sorted(pivots, reverse=True):
            if bit(v, lead):
                v ^= pivots[lead]
        if v:
            pivots[v.bit_length() - 1] = v
    leads = sorted(pivots)
    for i, lead in enumerate(leads):
        r = pivots[lead]
        for other in leads[i + 1:]:
            if bit(pivots[other], lead):
                pivots[other] ^= r
    return tuple(sorted(pivots.values()))


@dataclass(frozen=True, order=True)
class F2Subspace:
    basis: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def alpha(self) -> int:
        return N - self.dim

    def elements(self) -> set[int]:
        return span(self.basis)

    def strings(self) -> list[str]:
        return [to_string(v) for v in self.basis]

    @classmethod
    def spanned_by(cls, vectors) -> "F2Subspace":
        return cls(rref(vectors))

    def image(self, matrix: tuple[int, ...]) -> "F2Subspace":
        return F2Subspace.spanned_by(apply(matrix, v) for v in self.basis)

    def invariants(self) -> tuple:
        """(dim, dim of the intersection with the radical, q-value counts)."""
        elems = self.elements()
        zeros = sum(1 for v in elems if quad_value(v) == 0)
        return (self.dim, int(RADICAL in elems), zeros, len(elems) - zeros)


def apply(matrix: tuple[int, ...], v: int) -> int:
    """Matrix given by the images of e1..e5."""
    out = 0
    for i in range(N):
        if bit(v, i):
            out ^= matrix[i]
    return out


def compose(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    """a after b."""
    return tuple(apply(a, b[i]) for i in range(N))


IDENTITY = tuple(1 << i for i in range(N))


@lru_cache(maxsize=None)
def enumerate_subspaces() -> tuple[F2Subspace, ...]:
    """All 374 subspaces, ordered by dimension then canonical basis."""
    seen = {F2Subspace(())}
    frontier = {F2Subspace(())}
    for _ in range(N):
        nxt = set()
        for s in frontier:
            elems = s.elements()
            for v in range(1, FULL + 1):
                if v not in elems:
                    nxt.add(F2Subspace.spanned_by(s.basis + (v,)))
        seen |= nxt
        frontier = nxt
    return tuple(sorted(seen, key=lambda s: (s.dim, s.basis)))


def _preserves_form(images: tuple[int, ...]) -> bool:
    return all(quad_value(apply(images, v)) == quad_value(v) for v in range(1, FULL + 1))


@lru_cache(maxsize=None)
def orthogonal_group() -> tuple[tuple[int, ...], ...]:
    """O(F_2^5, q), each element as the tuple of images of e1..e5.

    Backtracking over column images constrained by q(Me_i) = q(e_i),
    b(Me_i, Me_j) = b(e_i, e_j) and linear independence; this is the full
    2^25 scan with impossible branches cut early.
    """
    basis = IDENTITY
    out = []

    def search(cols: list[int], spanned: set[int]):
        i = len(cols)
        if i == N:
            out.append(tuple(cols))
            return
        target_q = quad_value(basis[i])
        for w in range(1, FULL + 1):
            if w in spanned or quad_value(w) != target_q:
                continue
            if any(polar(w, cols[j]) != polar(basis[i], basis[j]) for j in range(i)):
                continue
            search(cols + [w], spanned | {x ^ w for x in spanned})

    search([], {0})
    group = tuple(sorted(m for m in out if _preserves_form(m)))
    return group


@dataclass(frozen=True)
class Orbit:
    rep: F2Subspace
    size: int
    members: tuple[F2Subspace, ...]

    @property
    def dim(self) -> int:
        return self.rep.dim

    @property
    def alpha(self) -> int:
        return self.rep.alpha


def orbits(subspaces=None, group=None) -> list[Orbit]:
    """Orbit partition of the nonzero subspaces; representative = least canonical basis."""
    if subspaces is None:
        subspaces = [s for s in enumerate_subspaces() if s.dim >= 1]
    if group is None:
        group = orthogonal_group()
    remaining = set(subspaces)
    out = []
    for s in sorted(subspaces, key=lambda s: (s.dim, s.basis)):
        if s not in remaining:
            continue
        orbit = {s.image(g) for g in group}
        remaining -= orbit
        members = tuple(sorted(orbit, key=lambda t: (t.dim, t.basis)))
        out.append(Orbit(rep=members[0], size=len(orbit), members=members))
    out.sort(key=lambda o: (-o.dim, o.rep.basis))
    return out
