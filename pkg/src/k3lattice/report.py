"""Golden checks and discrepancy records shared by the CLI and the acceptance suite."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .classifier import (
    catalog,
    check_catalog,
    classify,
    condition3_check,
    glue_with_e8,
    sublattice_from_subspace,
    t_a,
)
from .discform import (
    discriminant_form,
    form_iso,
    isotropic_subgroups,
    u_form,
    cyclic_form,
)
from .embedding import nikulin_embedding_exists
from .f2space import enumerate_subspaces, orbits, orthogonal_group
from .fibration import known_audits
from .kummer import (
    HALF_SUM_WITNESSES,
    build_sy,
    alpha_checks,
    even_eight,
    fibers_b,
    fibers_d,
    format_class,
    incidence_16_6,
    is_even_eight,
    node_names,
    pairing,
    parse_divisor,
    preset_classes,
    trope_names,
    twist_check,
)
from .lattice import Signature, determinant, e8, hyperbolic_plane, signature
from .records import Discrepancy

PRINTED = "printed"
DERIVED = "derived"

ORBIT_SIZES = [1, 15, 10, 6, 20, 15, 45, 60, 15, 15, 60, 20, 15, 45, 1, 15, 15]


KNOWN_DISCREPANCIES = frozenset({
    "row1-q",
    "e5-sign",
    "x0-fibers",
    "twist-generators",
    "fiber-b-f5",
    "a-half-sum",
})


def row1_discrepancy() -> Discrepancy | None:
    found = classify().discrepancies
    return found[0] if found else None


def e5_discrepancy() -> Discrepancy | None:
    c = preset_classes()
    plus, minus = c["e5_printed"], c["e5"]
    if pairing(plus, c["E34"]) == 2 and plus + c["E34"] == c["D"]:
        return None
    return Discrepancy(
        "e5-sign",
        f"with +(E24+E25+E34+E36+E45): e5.E34 = {pairing(plus, c['E34'])}, "
        f"e5 + E34 == D is {plus + c['E34'] == c['D']}",
        f"minus sign: e5.E34 = {pairing(minus, c['E34'])}, e5 + E34 == D is "
        f"{minus + c['E34'] == c['D']}")


def x0_discrepancy() -> Discrepancy | None:
    audits = known_audits()
    printed, corrected = audits["x0-printed"], audits["x0-corrected"]
    if printed.passed:
        return None
    return Discrepancy(
        "x0-fibers",
        f"{printed.config.label}: Euler sum {printed.item('euler').value} != 24",
        f"{corrected.config.label} passes every audit: {corrected.passed}")


def twist_discrepancy() -> Discrepancy | None:
    r = twist_check()
    note = "generator list repeats E14"
    if r.outside_complement:
        note += f"; not orthogonal to the a_i: {', '.join(r.outside_complement)}"
    if r.direct_solutions:
        note += f"; {r.direct_solutions} labelled subsets among the listed classes"
    else:
        note += "; no labelled subset of the listed node/trope/combination classes"
    return Discrepancy("twist-generators", note,
                       f"{r.resolution}; primitive {r.found_primitive}; "
                       f"completion by {r.completion[-1]} has index {r.completion_index}")


def f5_discrepancy() -> Discrepancy | None:
    c = preset_classes()
    if fibers_b()["F5"] == c["B"]:
        return None
    fixes = [n for n in node_names() + trope_names() if fibers_b(n)["F5"] == c["B"]]
    return Discrepancy(
        "fiber-b-f5",
        "F5 of the |B| fibration repeats E14 and differs from B by "
        f"{format_class(fibers_b()['F5'] - c['B'])}",
        f"first E14 read as {', '.join(fixes)} gives F5 = B" if fixes else "no single-class fix")


def a_half_sum_discrepancy() -> Discrepancy | None:
    v = is_even_eight(even_eight("a"))
    shown = parse_divisor(HALF_SUM_WITNESSES["a"])
    if v.half_sum == shown:
        return None
    return Discrepancy(
        "a-half-sum",
        f"(a1+...+a8)/2 minus the displayed half-sum = {format_class(v.half_sum - shown)}",
        f"(a1+...+a8)/2 = {format_class(v.half_sum)} lies in S_Y: {v.witness is not None}")


DISCREPANCY_SOURCES: dict[str, Callable[[], Discrepancy | None]] = {
    "row1-q": row1_discrepancy,
    "e5-sign": e5_discrepancy,
    "x0-fibers": x0_discrepancy,
    "twist-generators": twist_discrepancy,
    "fiber-b-f5": f5_discrepancy,
    "a-half-sum": a_half_sum_discrepancy,
}


def discrepancies(kinds=None) -> list[Discrepancy]:
    out = []
    for kind, fn in DISCREPANCY_SOURCES.items():
        if kinds is None or kind in kinds:
            d = fn()
            if d:
                out.append(d)
    return out


@dataclass(frozen=True)
class GoldenCheck:
    id: str
    origin: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.id} (origin={self.origin}) {self.detail}"

    def to_json(self) -> dict:
        return {"id": self.id, "origin": self.origin, "pass": self.passed, "detail": self.detail}


def _check(id_, origin, passed, detail="") -> GoldenCheck:
    return GoldenCheck(id_, origin, bool(passed), detail)


def orbit_checks() -> list[GoldenCheck]:
    orbs = orbits()
    sizes = [o.size for o in orbs]
    per_dim = Counter()
    for o in orbs:
        per_dim[o.dim] += o.size
    subs = Counter(s.dim for s in enumerate_subspaces())
    g = len(orthogonal_group())
    return [
        _check("orbits.count", PRINTED, len(orbs) == 17, f"{len(orbs)} orbits"),
        _check("orbits.total", PRINTED, sum(sizes) == 373, f"total={sum(sizes)}"),
        _check("orbits.sizes", PRINTED, sorted(sizes) == sorted(ORBIT_SIZES), f"{sorted(sizes)}"),
        _check("orbits.per-dim", DERIVED,
               all(per_dim[d] == subs[d] for d in range(1, 6))
               and [subs[d] for d in range(6)] == [1, 31, 155, 155, 31, 1],
               f"{dict(sorted(per_dim.items()))}"),
        _check("orthogonal-group.order", DERIVED, g == 720 and all(g % s == 0 for s in sizes),
               f"|O(q)|={g}"),
    ]


def classification_checks() -> list[GoldenCheck]:
    c = classify()
    rows = {r.matched_row: r for r in c.rows}
    cat = catalog()
    _, distinct = check_catalog()
    out = [
        _check("classify.matched", PRINTED, c.ok and sorted(rows) == list(range(1, 18)),
               "; ".join(c.failures) or "17 orbits matched to 17 rows"),
        _check("classify.sizes", PRINTED,
               all(rows[k].orbit_size == cat[k - 1].size for k in rows if k),
               "orbit sizes equal the size column"),
        _check("catalog.distinct", DERIVED, distinct, "17 forms pairwise non-isomorphic"),
    ]
    r1 = rows[1]
    tr = r1.condition3
    out.append(_check("condition3.row1", DERIVED,
                      tr.triggered_by_alpha and tr.excluded and tr.status == "excluded",
                      f"l2={tr.l2} triggered={tr.triggered_by_alpha} excluded={tr.excluded}"))
    all_pass = all(
        condition3_check(sublattice_from_subspace(s), s.alpha).holds
        for s in enumerate_subspaces() if s.dim >= 1)
    out.append(_check("condition3.all-subspaces", PRINTED, all_pass, "373 of 373 hold"))
    return out


def discform_checks() -> list[GoldenCheck]:
    u2 = discriminant_form(hyperbolic_plane(2))
    row9 = catalog()[8]
    d9 = discriminant_form(row9.lattice)
    ta = discriminant_form(t_a())
    return [
        _check("discform.u2", DERIVED, u2.orders == (2, 2) and form_iso(u2, u_form(2)) is not None,
               str(u2)),
        _check("discform.row9", PRINTED, sorted(d9.orders) == [2, 2, 8]
               and form_iso(d9, row9.printed) is not None, str(d9)),
        _check("discform.ta", DERIVED, form_iso(ta, cyclic_form(2, Fraction(3, 2))) is not None,
               str(ta)),
        _check("discform.u2-isotropic", DERIVED, len(isotropic_subgroups(u2)) == 3,
               "three isotropic subgroups in u(2)"),
    ]


def embedding_checks() -> list[GoldenCheck]:
    out = []
    ok_all = True
    details = []
    for r in classify().rows:
        g = glue_with_e8(r.lattice, r.alpha)
        v = nikulin_embedding_exists(signature(g.lattice), g.disc, Signature(3, 19))
        ok = g.disc_matches and v.embeds and tuple(signature(g.lattice)) == (2, 11)
        ok_all &= ok
        if r.matched_row == 1:
            c4 = v.conditions[3]
            out.append(_check("embed.row1-glue", DERIVED,
                              ok and c4.triggered and c4.vacuous,
                              f"condition 4 triggered={c4.triggered} vacuous={c4.vacuous}"))
        details.append(f"{r.matched_row}:{'ok' if ok else 'FAIL'}")
    out.append(_check("embed.all-rows", DERIVED, ok_all, " ".join(details)))
    s = e8(-2)
    v = nikulin_embedding_exists(signature(s), discriminant_form(s), Signature(3, 19))
    out.append(_check("embed.e8-2", DERIVED,
                      v.embeds and not v.conditions[2].triggered and not v.conditions[3].triggered,
                      f"slack={v.slack}"))
    return out


def kummer_checks() -> list[GoldenCheck]:
    ns = build_sy()
    c = preset_classes()
    a = alpha_checks()
    out = [
        _check("kummer.invariants", DERIVED,
               ns.lattice.even and ns.lattice.rank == 17
               and tuple(signature(ns.lattice)) == (1, 16) and abs(determinant(ns.lattice)) == 64,
               f"rank {ns.lattice.rank}, det {determinant(ns.lattice)}"),
        _check("kummer.16-6", PRINTED, incidence_16_6(), "each node meets six tropes"),
        _check("kummer.alpha", PRINTED, all(a.values()), str(a)),
    ]
    for w in "eab":
        v = is_even_eight(even_eight(w))
        out.append(_check(f"even-eight.{w}", PRINTED, v.holds, f"half-sum in S_Y: {v.witness is not None}"))
    b = is_even_eight(even_eight("b"))
    out.append(_check("even-eight.b-witness", PRINTED,
                      b.half_sum == parse_divisor(HALF_SUM_WITNESSES["b"]), "coordinate equality"))
    out.append(_check("fibers.D", PRINTED, all(f == c["D"] for f in fibers_d().values()),
                      "F1..F7 equal D"))
    out.append(_check("fibers.B", PRINTED,
                      all(f == c["B"] for k, f in fibers_b("E34").items()),
                      "F1..F6 equal B with F5 corrected"))
    out.append(_check("sections", PRINTED,
                      pairing(c["C14"], c["D"]) == pairing(c["C15"], c["D"]) == 1
                      and pairing(c["C15"], c["B"]) == pairing(c["C16"], c["B"]) == 1,
                      "C14.D = C15.D = C15.B = C16.B = 1"))
    t = twist_check()
    out.append(_check("twist", DERIVED,
                      abs(t.gram_det) == 4 and abs(t.complement_det) == 4 and t.found_gram_ok
                      and t.found_primitive and t.completion_index == 1,
                      f"det {t.gram_det}, |det N^perp| {abs(t.complement_det)}, {t.labels}"))
    return out


def fibration_checks() -> list[GoldenCheck]:
    au = known_audits()
    return [
        _check("fibration.kummer-D", PRINTED, au["kummer-D"].passed, au["kummer-D"].config.label),
        _check("fibration.kummer-B", PRINTED, au["kummer-B"].passed, au["kummer-B"].config.label),
        _check("fibration.pullback", PRINTED, au["cover-b-pullback"].passed,
               au["cover-b-pullback"].config.label),
        _check("fibration.x0-printed-fails", DERIVED,
               not au["x0-printed"].item("euler").passed and au["x0-printed"].item("euler").value == 30,
               "Euler sum 30"),
        _check("fibration.x0-corrected", DERIVED, au["x0-corrected"].passed, "discriminant 2"),
    ]


def golden_checks() -> list[GoldenCheck]:
    return (orbit_checks() + classification_checks() + discform_checks() + embedding_checks()
            + kummer_checks() + fibration_checks())


@dataclass
class SelfTest:
    checks: list[GoldenCheck]
    found: list[Discrepancy]

    @property
    def kinds(self) -> frozenset:
        return frozenset(d.kind for d in self.found)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks) and self.kinds == KNOWN_DISCREPANCIES


def selftest() -> SelfTest:
    return SelfTest(golden_checks(), discrepancies())
