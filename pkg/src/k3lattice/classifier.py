"""Sublattices T_U of T_A = U + U + <-2> and their identification with the 17 table rows."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .discform import (
    DiscriminantForm,
    FiniteQuadraticForm,
    PadicDetClass,
    Subgroup,
    direct_sum_forms,
    discriminant_form,
    form_from_polynomial,
    form_iso,
    has_odd_order2_summand,
    length_p,
    overlattice_subgroup,
    p_part,
    subgroup,
    u_form,
)
from .embedding import kq_det
from .errors import AmbiguousMatch
from .f2space import N, F2Subspace, Orbit, bit, orbits
from .records import Discrepancy
from .lattice import (
    Lattice,
    Signature,
    determinant,
    direct_sum_all,
    hyperbolic_plane,
    lattice_from_generators,
    lattice_from_gram,
    rank_one,
    signature,
)

F = Fraction
HALF = F(1, 2)
EIGHTH = F(1, 8)

N3_GRAM = [[2, 1, 2], [1, -2, 0], [2, 0, 0]]


def n3() -> Lattice:
    """The rank-3 lattice N of the table."""
    return lattice_from_gram(N3_GRAM)


def t_a() -> Lattice:
    """T_A = U + U + <-2> with q(x)/2 = x1x2 + x3x4 + x5^2 mod 2 on T_A / 2T_A."""
    return direct_sum_all([hyperbolic_plane(), hyperbolic_plane(), rank_one(-2)])


def lift(v: int) -> list[int]:
    """0/1 lift of an F_2^5 vector to T_A coordinates."""
    return [bit(v, i) for i in range(N)]


def sublattice_from_subspace(u: F2Subspace, lifts=None) -> Lattice:
    """Preimage of U under T_A -> T_A / 2T_A.

    ``lifts`` optionally replaces the 0/1 lifts of U's basis (any integral lift works).
    """
    ta = t_a()
    gens = [[2 * int(i == j) for j in range(N)] for i in range(N)]
    gens += lifts if lifts is not None else [lift(v) for v in u.basis]
    return lattice_from_generators(ta.space, gens)


@dataclass
class CatalogRow:
    row: int
    name: str
    lattice: Lattice
    size: int
    printed: FiniteQuadraticForm
    printed_text: str

    @property
    def disc_orders(self) -> list[int]:
        return list(self.printed.orders)


def _row(row, name, blocks, size, orders, coeffs, text):
    lat = direct_sum_all(blocks)
    return CatalogRow(row, name, lat, size, form_from_polynomial(orders, coeffs), text)


def _u(m=1):
    return hyperbolic_plane(m)


def _r(n):
    return rank_one(n)


@lru_cache(maxsize=None)
def catalog() -> tuple[CatalogRow, ...]:
    """The 17 rows as printed: lattice, orbit size, group and q as a polynomial."""
    rows = [
        _row(1, "U+U+<-2>", [_u(), _u(), _r(-2)], 1, (2,), {(0, 0): HALF}, "1/2 x^2"),
        _row(2, "U(2)+U+<-2>", [_u(2), _u(), _r(-2)], 15, (2, 2, 2),
             {(0, 1): 1, (2, 2): -HALF}, "x1x2 - 1/2 x3^2"),
        _row(3, "U+U+<-8>", [_u(), _u(), _r(-8)], 10, (8,), {(0, 0): -EIGHTH}, "-1/8 x^2"),
        _row(4, "U+N", [_u(), n3()], 6, (8,), {(0, 0): 3 * EIGHTH}, "3/8 x^2"),
        _row(5, "U(4)+U+<-2>", [_u(4), _u(), _r(-2)], 20, (4, 4, 2),
             {(0, 1): HALF, (2, 2): -HALF}, "1/2 x1x2 - 1/2 x3^2"),
        _row(6, "U(2)+U(2)+<-2>", [_u(2), _u(2), _r(-2)], 15, (2, 2, 2, 2, 2),
             {(0, 1): 1, (2, 3): 1, (4, 4): -HALF}, "x1x2 + x3x4 - 1/2 x5^2"),
        _row(7, "U(2)+U+<-8>", [_u(2), _u(), _r(-8)], 45, (2, 2, 8),
             {(0, 1): 1, (2, 2): -EIGHTH}, "x1x2 - 1/8 x3^2"),
        _row(8, "U+<-2>+<2>+<-8>", [_u(), _r(-2), _r(2), _r(-8)], 60, (2, 2, 8),
             {(0, 0): -HALF, (1, 1): HALF, (2, 2): -EIGHTH}, "-1/2 x1^2 + 1/2 x2^2 - 1/8 x3^2"),
        _row(9, "U(2)+N", [_u(2), n3()], 15, (2, 2, 8),
             {(0, 1): 1, (2, 2): 3 * EIGHTH}, "x1x2 + 3/8 x3^2"),
        _row(10, "U(4)+U(2)+<-2>", [_u(4), _u(2), _r(-2)], 15, (4, 4, 2, 2, 2),
             {(0, 1): HALF, (2, 3): 1, (4, 4): -HALF}, "1/2 x1x2 + x3x4 - 1/2 x5^2"),
        _row(11, "U(4)+U+<-8>", [_u(4), _u(), _r(-8)], 60, (4, 4, 8),
             {(0, 1): HALF, (2, 2): -EIGHTH}, "1/2 x1x2 - 1/8 x3^2"),
        _row(12, "U(4)+N", [_u(4), n3()], 20, (4, 4, 8),
             {(0, 1): HALF, (0, 0): -HALF, (0, 2): 1, (2, 2): 3 * EIGHTH},
             "1/2 x1x2 - 1/2 x1^2 + x1x3 + 3/8 x3^2"),
        _row(13, "U(2)+U(2)+<-8>", [_u(2), _u(2), _r(-8)], 15, (2, 2, 2, 2, 8),
             {(0, 1): 1, (2, 3): 1, (4, 4): -EIGHTH}, "x1x2 + x3x4 - 1/8 x5^2"),
        _row(14, "<2>^2+<-2>^2+<-8>", [_r(2), _r(2), _r(-2), _r(-2), _r(-8)], 45, (2, 2, 2, 2, 8),
             {(0, 0): HALF, (1, 1): HALF, (2, 2): -HALF, (3, 3): -HALF, (4, 4): -EIGHTH},
             "1/2 (x1^2 + x2^2 - x3^2 - x4^2) - 1/8 x5^2"),
        _row(15, "U(4)+U(4)+<-2>", [_u(4), _u(4), _r(-2)], 1, (4, 4, 4, 4, 2),
             {(0, 1): HALF, (2, 3): HALF, (4, 4): -HALF}, "1/2 x1x2 + 1/2 x3x4 - 1/2 x5^2"),
        _row(16, "U(4)+U(2)+<-8>", [_u(4), _u(2), _r(-8)], 15, (2, 2, 4, 4, 8),
             {(0, 1): 1, (2, 3): HALF, (4, 4): -EIGHTH}, "x1x2 + 1/2 x3x4 - 1/8 x5^2"),
        _row(17, "U(4)+<2>+<-2>+<-8>", [_u(4), _r(2), _r(-2), _r(-8)], 15, (2, 2, 4, 4, 8),
             {(0, 0): HALF, (1, 1): -HALF, (2, 3): HALF, (4, 4): -EIGHTH},
             "1/2 x1^2 - 1/2 x2^2 + 1/2 x3x4 - 1/8 x5^2"),
    ]
    return tuple(rows)


@lru_cache(maxsize=None)
def catalog_forms() -> tuple[DiscriminantForm, ...]:
    return tuple(discriminant_form(r.lattice) for r in catalog())


@dataclass
class CatalogCheck:
    row: int
    printed_matches: bool
    note: str = ""


def check_catalog() -> tuple[list[CatalogCheck], bool]:
    """Recompute each row's form from its Gram; compare with the printed q.

    Returns the per-row checks and whether the 17 computed forms are pairwise
    non-isomorphic.
    """
    checks = []
    forms = catalog_forms()
    for r, disc in zip(catalog(), forms):
        ok = form_iso(disc, r.printed) is not None
        note = ""
        if not ok:
            note = (f"row {r.row} ({r.name}): printed q = {r.printed_text} but the Gram matrix "
                    f"gives {disc}")
        checks.append(CatalogCheck(r.row, ok, note))
    distinct = all(form_iso(forms[i], forms[j]) is None
                   for i in range(len(forms)) for j in range(i + 1, len(forms)))
    return checks, distinct


def match_row(t: Lattice, disc: FiniteQuadraticForm | None = None) -> int | None:
    """Catalog row with the same rank, signature and discriminant form; None when unmatched."""
    disc = disc or discriminant_form(t)
    sig = signature(t)
    hits = []
    for r, form in zip(catalog(), catalog_forms()):
        if r.lattice.rank != t.rank or signature(r.lattice) != sig:
            continue
        if form_iso(disc, form) is not None:
            hits.append(r.row)
    if len(hits) > 1:
        raise AmbiguousMatch(f"lattice matches rows {hits}")
    return hits[0] if hits else None


@dataclass
class Condition3Trace:
    alpha: int
    l2: int
    triggered_by_alpha: bool
    excluded: bool
    compared: bool
    holds: bool
    lhs: PadicDetClass | None = None
    rhs: PadicDetClass | None = None

    @property
    def status(self) -> str:
        """untriggered, excluded (odd order-2 summand), pass, or fail."""
        if not self.triggered_by_alpha:
            return "untriggered"
        if self.excluded:
            return "excluded"
        return "pass" if self.holds else "fail"


def condition3_check(t: Lattice, alpha: int, disc: FiniteQuadraticForm | None = None) -> Condition3Trace:
    """The 2-adic arithmetic condition on T_X with T_A / T_X = (Z/2)^alpha."""
    disc = disc or discriminant_form(t)
    q2 = p_part(disc, 2)
    l2 = length_p(q2, 2)
    trig = 2 * (alpha + 3) == t.rank + l2
    with_u = direct_sum_forms(q2, *[u_form(2)] * (4 - alpha))
    excluded = has_odd_order2_summand(with_u)
    compared = trig and not excluded
    lhs = rhs = None
    holds = True
    if compared:
        lhs = PadicDetClass.of(disc.size, 2)
        rhs = kq_det(q2, 2)
        holds = lhs.same_up_to_sign(rhs)
    return Condition3Trace(alpha, l2, trig, excluded, compared, holds, lhs, rhs)


@dataclass
class ClassRow:
    rep: F2Subspace
    orbit_size: int
    alpha: int
    lattice: Lattice
    disc: DiscriminantForm
    matched_row: int | None
    condition3: Condition3Trace

    @property
    def name(self) -> str:
        if self.matched_row is None:
            return "Unmatched"
        return catalog()[self.matched_row - 1].name


@dataclass
class Classification:
    rows: list[ClassRow]
    discrepancies: list[Discrepancy] = field(default_factory=list)
    failures: list[str] = field(default_factory=list)

    @property
    def total(self) -> int:
        return sum(r.orbit_size for r in self.rows)

    @property
    def ok(self) -> bool:
        return not self.failures


def classify_orbit(orbit: Orbit) -> ClassRow:
    lat = sublattice_from_subspace(orbit.rep)
    disc = discriminant_form(lat)
    return ClassRow(
        rep=orbit.rep,
        orbit_size=orbit.size,
        alpha=orbit.alpha,
        lattice=lat,
        disc=disc,
        matched_row=match_row(lat, disc),
        condition3=condition3_check(lat, orbit.alpha, disc),
    )


@lru_cache(maxsize=None)
def _classify() -> Classification:
    rows = [classify_orbit(o) for o in orbits()]
    rows.sort(key=lambda r: (r.matched_row is None, r.matched_row or 0, r.rep.basis))
    result = Classification(rows)
    cat = catalog()
    if len(rows) != len(cat):
        result.failures.append(f"expected {len(cat)} orbits, found {len(rows)}")
    if result.total != 373:
        result.failures.append(f"expected 373 subspaces, found {result.total}")
    seen = set()
    for r in rows:
        if r.matched_row is None:
            result.failures.append(f"orbit {r.rep.strings()} (size {r.orbit_size}) matches no row")
            continue
        if r.matched_row in seen:
            result.failures.append(f"row {r.matched_row} matched by two orbits")
        seen.add(r.matched_row)
        expected = cat[r.matched_row - 1].size
        if expected != r.orbit_size:
            result.failures.append(
                f"row {r.matched_row}: orbit size {r.orbit_size}, table says {expected}")
        if not r.condition3.holds:
            result.failures.append(f"row {r.matched_row}: arithmetic condition fails")
    checks, distinct = check_catalog()
    if not distinct:
        result.failures.append("catalog forms are not pairwise non-isomorphic")
    bad = [c for c in checks if not c.printed_matches]
    if bad:
        kind = "row1-q" if [c.row for c in bad] == [1] else "table-q"
        result.discrepancies.append(Discrepancy(
            kind, "; ".join(c.note for c in bad),
            "rows are identified by the form recomputed from the Gram matrix"))
    return result


def classify() -> Classification:
    """Orbits -> sublattices -> arithmetic condition -> catalog match."""
    return _classify()


def ta_subgroup(t: Lattice, disc: DiscriminantForm | None = None) -> Subgroup:
    """H = T_A / T inside D_T."""
    return overlattice_subgroup(t, t_a(), disc)


def independent_generators(form: FiniteQuadraticForm, gens) -> list:
    """Greedy F_2-independent subset of generators of an elementary 2-group."""
    kept: list = []
    span = {form.zero}
    for g in gens:
        g = tuple(g)
        if g in span:
            continue
        kept.append(g)
        span |= {form.add(x, g) for x in span}
    return kept


def isotropic_frame(form: FiniteQuadraticForm, k: int) -> list | None:
    """k independent elements with q = 0 and pairwise b = 0 (a totally singular k-space)."""
    singular = [x for x in form.elements if x != form.zero and form.q(x) == 0]

    def search(chosen, span):
        if len(chosen) == k:
            return chosen
        for x in singular:
            if x in span or any(form.b(x, y) != 0 for y in chosen):
                continue
            found = search(chosen + [x], span | {form.add(s, x) for s in span})
            if found:
                return found
        return None

    return search([], {form.zero})


@dataclass
class GlueResult:
    lattice: Lattice
    disc: DiscriminantForm
    expected: FiniteQuadraticForm
    disc_matches: bool


def glue_with_e8(t: Lattice, alpha: int | None = None) -> GlueResult:
    """M = primitive closure of T + E8(-2) glued along H = T_A / T."""
    from .discform import glue
    from .lattice import e8

    dt = discriminant_form(t)
    h = ta_subgroup(t, dt)
    hg = independent_generators(dt, h.generators)
    if alpha is not None and len(hg) != alpha:
        raise ValueError(f"H has rank {len(hg)}, expected {alpha}")
    s = e8(-2)
    ds = discriminant_form(s)
    xi = isotropic_frame(ds, len(hg))
    m = glue(t, s, hg, xi, dt, ds)
    dm = discriminant_form(m)
    expected = direct_sum_forms(dt, *[u_form(2)] * (4 - len(hg)))
    return GlueResult(m, dm, expected, form_iso(dm, expected) is not None)
