"""JSON formats for lattices and finite quadratic forms; rationals are "p/q" strings."""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from . import linalg
from .discform import FiniteQuadraticForm
from .lattice import Lattice, QuadSpace, determinant, lattice_from_generators, signature


def rat(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_rat(s) -> Fraction:
    if isinstance(s, bool):
        raise ValueError("booleans are not numbers")
    if isinstance(s, int):
        return Fraction(s)
    if isinstance(s, str):
        return Fraction(s.strip())
    raise ValueError(f"expected an integer or a 'p/q' string, got {s!r}")


def _matrix(rows) -> list[list[Fraction]]:
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise ValueError("matrix must be a list of rows")
    return [[parse_rat(x) for x in r] for r in rows]


def lattice_from_json(doc: dict) -> Lattice:
    """{"dim": n, "gram": [[...]], "generators": [[...]] (optional)}."""
    gram = _matrix(doc["gram"])
    dim = doc.get("dim", len(gram))
    if dim != len(gram) or any(len(r) != dim for r in gram):
        raise ValueError("gram must be dim x dim")
    gens = _matrix(doc["generators"]) if "generators" in doc else linalg.identity(dim)
    return lattice_from_generators(QuadSpace(gram), gens)


def lattice_to_json(lat: Lattice, doc: dict | None = None) -> dict:
    """Normalized input plus rank, det and signature; generators are kept as given."""
    out = {"dim": lat.dim, "gram": [[rat(x) for x in r] for r in lat.space.gram]}
    if doc and "generators" in doc:
        out["generators"] = [[rat(parse_rat(x)) for x in v] for v in doc["generators"]]
    elif not doc:
        out["generators"] = [[rat(x) for x in v] for v in lat.basis]
    out["rank"] = lat.rank
    out["det"] = rat(determinant(lat))
    out["signature"] = list(signature(lat))
    return out


def form_to_json(form: FiniteQuadraticForm) -> dict:
    return {
        "orders": list(form.orders),
        "q": [rat(x) for x in form.q_values],
        "b": [[rat(x) for x in r] for r in form.b_matrix],
    }


def form_from_json(doc: dict) -> FiniteQuadraticForm:
    orders = [int(x) for x in doc["orders"]]
    q = [parse_rat(x) for x in doc["q"]]
    if "b" in doc:
        b = _matrix(doc["b"])
    else:
        b = [[q[i] if i == j else Fraction(0) for j in range(len(q))] for i in range(len(q))]
    return FiniteQuadraticForm(tuple(orders), tuple(q), tuple(tuple(r) for r in b))


def load_json(path: str | Path) -> dict:
    with open(path) as fh:
        return json.load(fh)


def _scalar(x) -> bool:
    return not isinstance(x, (list, dict))


def dumps(obj, indent: int = 0) -> str:
    """Canonical JSON with flat lists on one line; dumps(json.loads(dumps(x))) == dumps(x)."""
    pad, inner = " " * indent, " " * (indent + 2)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {dumps(v, indent + 2)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if all(_scalar(x) for x in obj):
            return "[" + ", ".join(json.dumps(x) for x in obj) + "]"
        return "[\n" + ",\n".join(inner + dumps(x, indent + 2) for x in obj) + "\n" + pad + "]"
    return json.dumps(obj)
