"""K(q_p) determinant classes and the primitive-embedding criterion."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from . import linalg
from .discform import (
    FiniteQuadraticForm,
    PadicDetClass,
    discriminant_form,
    form_iso,
    has_odd_order2_summand,
    is_p_primary,
    length,
    length_p,
    orthogonal_of,
    p_part,
    prime_factors,
    subform,
    trivial_form,
)
from .errors import RealizationNotFound
from .lattice import Signature, lattice_from_gram

GRAM_BOUND = 16


def _exact_order(x: Fraction) -> int:
    return Fraction(x).denominator


def split_piece(form: FiniteQuadraticForm, p: int):
    """Split an orthogonal summand of rank 1 (or rank 2 when p = 2) off a p-primary form.

    Returns (piece, complement).
    """
    top = max(form.orders)
    elems = [x for x in form.elements if form.order(x) == top]
    for g in elems:
        if _exact_order(form.b(g, g)) == top:
            piece = subform(form, [g])
            rest = orthogonal_of(form, [g])
            return piece, subform(form, rest)
    if p != 2:
        raise RealizationNotFound("no cyclic orthogonal summand found for odd p")
    for i, g in enumerate(elems):
        for h in elems[i + 1:]:
            if _exact_order(form.b(g, h)) == top:
                piece = subform(form, [g, h])
                rest = orthogonal_of(form, [g, h])
                return piece, subform(form, rest)
    raise RealizationNotFound("no orthogonal summand of rank <= 2 found")


def orthogonal_pieces(form: FiniteQuadraticForm, p: int) -> list[FiniteQuadraticForm]:
    pieces = []
    while not form.is_trivial():
        piece, form = split_piece(form, p)
        pieces.append(piece)
    return pieces


def _candidate_grams(piece: FiniteQuadraticForm, p: int):
    top = max(piece.orders)
    if len(piece.orders) == 1:
        # <m> with m = top * t; its p-part is cyclic of order top
        for t in range(1, 2 * GRAM_BOUND + 1):
            if t % p == 0:
                continue
            for sign in (1, -1):
                m = sign * top * t
                if m % 2 == 0:
                    yield [[m]]
    else:
        rng = range(-GRAM_BOUND // (2 * top), GRAM_BOUND // (2 * top) + 1)
        for a in sorted(rng, key=abs):
            for c in sorted(rng, key=abs):
                for b in (1, -1, 3, -3, 5, -5, 7, -7):
                    if abs(b * top) > GRAM_BOUND:
                        continue
                    yield [[2 * a * top, b * top], [b * top, 2 * c * top]]


@lru_cache(maxsize=4096)
def _candidate_part(gram: tuple, p: int) -> FiniteQuadraticForm | None:
    if linalg.determinant(gram) == 0:
        return None
    return p_part(discriminant_form(lattice_from_gram(gram)), p)


def realize_piece(piece: FiniteQuadraticForm, p: int) -> list[list[int]]:
    """Even Gram matrix whose discriminant form has p-part isomorphic to ``piece``."""
    for gram in _candidate_grams(piece, p):
        dp = _candidate_part(tuple(map(tuple, gram)), p)
        if dp is not None and form_iso(dp, piece) is not None:
            return gram
    raise RealizationNotFound(f"no realization within |entries| <= {GRAM_BOUND} for {piece}")


def block_diagonal(blocks) -> list[list[int]]:
    n = sum(len(b) for b in blocks)
    out = [[0] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                out[off + i][off + j] = x
        off += len(b)
    return out


def realize_kq(form: FiniteQuadraticForm, p: int) -> list[list[int]]:
    """Gram of an even lattice of rank l(q_p) realizing q_p at p (verified)."""
    qp = form if is_p_primary(form, p) else p_part(form, p)
    if qp.is_trivial():
        return []
    gram = block_diagonal([realize_piece(piece, p) for piece in orthogonal_pieces(qp, p)])
    if len(gram) != length_p(qp, p):
        raise RealizationNotFound("realization rank differs from l(q_p)")
    check = p_part(discriminant_form(lattice_from_gram(gram)), p)
    if form_iso(check, qp) is None:
        raise RealizationNotFound("assembled realization does not reproduce q_p")
    return gram


def kq_det(form: FiniteQuadraticForm, p: int) -> PadicDetClass:
    """Determinant class of K(q_p) modulo squares of p-adic units."""
    gram = realize_kq(form, p)
    det = linalg.determinant(gram) if gram else 1
    return PadicDetClass.of(det, p)


@dataclass
class ConditionTrace:
    id: int
    triggered: bool
    holds: bool
    detail: str = ""
    vacuous: bool = False

    def to_json(self) -> dict:
        return {"id": self.id, "triggered": self.triggered, "holds": self.holds,
                "vacuous": self.vacuous, "detail": self.detail}


@dataclass
class EmbeddingVerdict:
    embeds: bool
    conditions: list[ConditionTrace] = field(default_factory=list)
    slack: int = 0
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"embeds": self.embeds, "slack": self.slack,
                "conditions": [c.to_json() for c in self.conditions], "notes": list(self.notes)}


ODD_SUMMAND_NOTE = ("x^2/(theta*2) is read as an orthogonal Z/2 summand with q-value "
                    "theta/2, theta a 2-adic unit (q in {1/2, 3/2})")


def nikulin_embedding_exists(sig: Signature, form: FiniteQuadraticForm, target: Signature) -> EmbeddingVerdict:
    """Primitive embedding of an even lattice (t+, t-, q) into an even unimodular lattice (l+, l-)."""
    tp, tm = sig
    lp, lm = target
    order = form.size
    corank = lp + lm - tp - tm
    conds = []

    c1 = (lp - lm) % 8 == 0
    conds.append(ConditionTrace(1, True, c1, f"l+ - l- = {lp - lm}"))

    l_d = length(form)
    c2 = lm - tm >= 0 and lp - tp >= 0 and corank >= l_d
    conds.append(ConditionTrace(2, True, c2, f"corank {corank}, l(D) = {l_d}"))

    # Odd primes not dividing |D| only matter when corank = 0, where condition 2
    # already forces D = 0.
    odd = [p for p in prime_factors(order) if p != 2]
    trig3 = []
    ok3 = True
    for p in odd:
        if corank != length_p(form, p):
            continue
        trig3.append(p)
        lhs = PadicDetClass.of((-1) ** (lp - tp) * order, p)
        ok3 = ok3 and lhs.same_up_to_sign(kq_det(form, p))
    conds.append(ConditionTrace(3, bool(trig3), ok3, f"triggered primes {trig3}"))

    q2 = p_part(form, 2) if order % 2 == 0 else trivial_form()
    rank_eq = corank == length_p(form, 2)
    odd_summand = has_odd_order2_summand(q2)
    ok4 = True
    if rank_eq and not odd_summand:
        ok4 = PadicDetClass.of(order, 2).same_up_to_sign(kq_det(q2, 2))
    detail = f"rank equality {rank_eq}, odd order-2 summand {odd_summand}"
    conds.append(ConditionTrace(4, rank_eq, ok4, detail, vacuous=rank_eq and odd_summand))

    return EmbeddingVerdict(
        embeds=all(c.holds for c in conds),
        conditions=conds,
        slack=corank - l_d,
        notes=[ODD_SUMMAND_NOTE],
    )
