"""Neron-Severi lattice of a general Kummer surface: nodes, tropes, the involution alpha,
even eights and the twisted E8 inside the complement of a Nikulin lattice."""

from __future__ import annotations

import ast
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from . import linalg
from .errors import NotFound
from .lattice import (
    Lattice,
    QuadSpace,
    determinant,
    e8_gram,
    index_in,
    is_primitive,
    lattice_from_generators,
    orthogonal_complement,
    signature,
)

F = Fraction
PAIRS = list(combinations(range(1, 7), 2))
BASIS_NAMES = ["L", "E0"] + [f"E{i}{j}" for i, j in PAIRS]
DIM = len(BASIS_NAMES)
GRAM = [[(4 if i == 0 else -2) if i == j else 0 for j in range(DIM)] for i in range(DIM)]


class DivisorClass(tuple):
    """Rational coordinates over (L, E0, E12, ..., E56)."""

    def __new__(cls, coords):
        coords = tuple(F(x) for x in coords)
        if len(coords) != DIM:
            raise ValueError(f"expected {DIM} coordinates")
        return super().__new__(cls, coords)

    def __add__(self, other):
        return DivisorClass(a + b for a, b in zip(self, other))

    def __sub__(self, other):
        return DivisorClass(a - b for a, b in zip(self, other))

    def __neg__(self):
        return DivisorClass(-a for a in self)

    def __mul__(self, k):
        return DivisorClass(a * k for a in self)

    __rmul__ = __mul__

    def __truediv__(self, k):
        return DivisorClass(a / k for a in self)

    def __repr__(self):
        return f"DivisorClass({format_class(self)})"


def basis_vector(name: str) -> DivisorClass:
    return DivisorClass(int(n == name) for n in BASIS_NAMES)


def zero() -> DivisorClass:
    return DivisorClass([0] * DIM)


def node(i: int, j: int) -> DivisorClass:
    i, j = sorted((i, j))
    return basis_vector(f"E{i}{j}")


def pairing(v, w) -> Fraction:
    return sum((F(GRAM[i][i]) * v[i] * w[i] for i in range(DIM)), F(0))


def self_product(v) -> Fraction:
    return pairing(v, v)


def format_class(v) -> str:
    terms = []
    for c, name in zip(v, BASIS_NAMES):
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        coef = "" if mag == 1 else f"{mag}"
        terms.append(f"{sign} {coef}{name}")
    if not terms:
        return "0"
    out = " ".join(terms)
    return out[2:] if out.startswith("+ ") else "-" + out[2:]


L = basis_vector("L")
E0 = basis_vector("E0")


def _trope_c0() -> DivisorClass:
    return (L - E0 - sum((node(1, i) for i in range(2, 7)), zero())) / 2


def _trope_1j(j: int) -> DivisorClass:
    return (L - E0 - sum((node(i, j) for i in range(1, 7) if i != j), zero())) / 2


def _trope_jk(j: int, k: int) -> DivisorClass:
    l, m, n = sorted(set(range(2, 7)) - {j, k})
    nodes = [node(1, j), node(1, k), node(j, k), node(l, m), node(l, n), node(m, n)]
    return (L - sum(nodes, zero())) / 2


def node_names() -> list[str]:
    return ["E0"] + [f"E{i}{j}" for i, j in PAIRS]


def trope_names() -> list[str]:
    return ["C0"] + [f"C1{j}" for j in range(2, 7)] + [f"C{j}{k}" for j, k in PAIRS if j >= 2]


@lru_cache(maxsize=None)
def generators() -> dict[str, DivisorClass]:
    """L, the 16 exceptional classes E0, E_ij, and the 16 tropes."""
    out = {name: basis_vector(name) for name in BASIS_NAMES}
    out["C0"] = _trope_c0()
    for j in range(2, 7):
        out[f"C1{j}"] = _trope_1j(j)
    for j, k in PAIRS:
        if j >= 2:
            out[f"C{j}{k}"] = _trope_jk(j, k)
    return out


def alpha_matrix() -> list[list[int]]:
    """Rows = images of the basis: L -> 3L - 4E0, E0 -> 2L - 3E0, E_ij fixed."""
    m = linalg.identity(DIM)
    m[0] = [3, -4] + [0] * (DIM - 2)
    m[1] = [2, -3] + [0] * (DIM - 2)
    return m


def alpha(v) -> DivisorClass:
    return DivisorClass(linalg.vecmat(list(v), alpha_matrix()))


def L_minus_E0(k=1) -> DivisorClass:
    return (L - E0) * k


def _nodes(*names) -> DivisorClass:
    return sum((basis_vector(n) for n in names), zero())


E5_PRINTED_SIGN = +1
E5_SIGN = -1


def e5(sign: int = E5_SIGN) -> DivisorClass:
    return (L_minus_E0(5) - 3 * _nodes("E12") - 2 * _nodes("E13", "E46", "E56")
            + sign * _nodes("E24", "E25", "E34", "E36", "E45"))


@lru_cache(maxsize=None)
def preset_classes() -> dict[str, DivisorClass]:
    """Named divisor classes used by the three even eights and the two fibrations."""
    g = generators()
    c = dict(g)
    c["e1"] = L_minus_E0(1) - _nodes("E12", "E46")
    c["e2"] = L_minus_E0(2) - _nodes("E12", "E13", "E24", "E46", "E56")
    c["e3"] = L_minus_E0(3) - 2 * _nodes("E12") - _nodes("E13", "E24", "E36", "E45", "E46", "E56")
    c["e4"] = (L_minus_E0(4) - 2 * _nodes("E12", "E13", "E46")
               - _nodes("E24", "E25", "E36", "E45", "E56"))
    c["e5"] = e5()
    c["e5_printed"] = e5(E5_PRINTED_SIGN)
    c["e6"] = g["C23"]
    c["e7"] = alpha(g["C23"])
    c["e8"] = g["E35"]

    c["a1"] = L_minus_E0(1) - _nodes("E12", "E56")
    c["a2"] = L_minus_E0(2) - _nodes("E12", "E13", "E46", "E56", "E25")
    c["a3"] = L_minus_E0(3) - 2 * _nodes("E12") - _nodes("E13", "E46", "E56", "E25", "E36", "E45")
    c["a4"] = (L_minus_E0(4) - 2 * _nodes("E12", "E13", "E56")
               - _nodes("E46", "E24", "E25", "E36", "E45"))
    c["a5"] = (L_minus_E0(5) - 3 * _nodes("E12") - 2 * _nodes("E13", "E46", "E56")
               - _nodes("E24", "E25", "E36", "E45", "E35"))
    c["a6"], c["a7"], c["a8"] = c["e6"], c["e7"], g["E34"]

    c["b1"] = L_minus_E0(1) - _nodes("E12", "E45")
    c["b2"] = L_minus_E0(2) - _nodes("E12", "E13", "E24", "E45", "E56")
    c["b3"] = L_minus_E0(3) - 2 * _nodes("E12") - _nodes("E13", "E24", "E36", "E45", "E46", "E56")
    c["b4"] = g["E35"]
    c["b5"] = L_minus_E0(1) - _nodes("E12", "E56")
    c["b6"], c["b7"], c["b8"] = c["e6"], c["e7"], g["E34"]

    c["D"] = (L_minus_E0(5) - 3 * _nodes("E12") - 2 * _nodes("E13", "E46", "E56")
              - _nodes("E24", "E25", "E36", "E45"))
    c["B"] = L_minus_E0(3) - 2 * _nodes("E12") - _nodes("E13", "E24", "E45", "E46", "E56")
    return c


def fibers_d() -> dict[str, DivisorClass]:
    """The seven fiber divisors of the fibration |D|."""
    c = preset_classes()
    twice = 2 * (c["E23"] + c["C12"] + c["E26"] + c["C16"] + c["E16"] + c["C0"])
    return {
        "F1": c["e5"] + c["E34"],
        "F2": c["e4"] + c["a1"],
        "F3": c["e3"] + c["a2"],
        "F4": c["e2"] + c["a3"],
        "F5": c["e1"] + c["a4"],
        "F6": c["e8"] + c["a5"],
        "F7": c["e6"] + c["e7"] + twice + c["E14"] + c["E15"],
    }


def fibers_b(f5_end: str = "E14") -> dict[str, DivisorClass]:
    """The six printed fiber divisors of the fibration |B|.

    ``f5_end`` is the first simple component printed next to b5 in F5.
    """
    c = preset_classes()
    f4_rest = (L_minus_E0(3) - 2 * c["E12"]
               - _nodes("E13", "E24", "E45", "E56", "E46", "E35"))
    return {
        "F1": c["b1"] + c["e2"],
        "F2": c["b2"] + c["e1"],
        "F3": c["b3"] + c["E36"],
        "F4": c["b4"] + f4_rest,
        "F5": c["b5"] + c[f5_end] + 2 * (c["C0"] + c["E14"] + c["C14"]) + c["E15"] + c["E16"],
        "F6": c["e6"] + c["e7"] + 2 * (c["C12"] + c["E23"]) + c["E26"] + c["E25"],
    }


HALF_SUM_WITNESSES = {
    "a": ("C13 + E34 + 8(L - E0) - (5E12 + 4E46 + 3E13 + 3E56 + E36 + E25 + E45)"),
    "b": ("C13 + E35 + E34 + 4(L - E0) - (3E12 + 2E45 + 2E56 + E13 + E24 + E46)"),
}


@dataclass(frozen=True)
class KummerNS:
    ambient: QuadSpace
    lattice: Lattice
    named_classes: dict

    def coordinates(self, v) -> list[int] | None:
        return self.lattice.coordinates(list(v))

    def __contains__(self, v) -> bool:
        return self.coordinates(v) is not None


@lru_cache(maxsize=None)
def build_sy() -> KummerNS:
    space = QuadSpace(GRAM)
    gens = [list(v) for v in generators().values()]
    lat = lattice_from_generators(space, gens)
    ns = KummerNS(space, lat, preset_classes())
    _validate(ns)
    return ns


def _validate(ns: KummerNS):
    lat = ns.lattice
    if not lat.even or lat.rank != 17 or tuple(signature(lat)) != (1, 16):
        raise AssertionError("S_Y invariants violated")
    if abs(determinant(lat)) != 64:
        raise AssertionError("|det S_Y| != 64")
    for name in trope_names():
        t = generators()[name]
        if self_product(t) != -2 or pairing(L, t) != 2:
            raise AssertionError(f"trope {name} has wrong pairings")


def incidence() -> list[list[int]]:
    """16 x 16 node-trope intersection matrix, rows = nodes."""
    g = generators()
    return [[int(pairing(g[n], g[t])) for t in trope_names()] for n in node_names()]


def incidence_16_6() -> bool:
    m = incidence()
    rows_ok = all(sorted(set(r)) == [0, 1] and sum(r) == 6 for r in m)
    cols_ok = all(sum(m[i][j] for i in range(16)) == 6 for j in range(16))
    return rows_ok and cols_ok


def alpha_checks() -> dict[str, bool]:
    """Order 2, isometry, and agreement with the printed action on the 33 generators."""
    a = alpha_matrix()
    g = generators()
    order2 = linalg.matmul(a, a) == linalg.identity(DIM)
    isometry = linalg.matmul(linalg.matmul(a, GRAM), linalg.transpose(a)) == GRAM
    shift = L - 2 * E0
    printed = {"L": 3 * L - 4 * E0, "E0": 2 * L - 3 * E0}
    for name, v in g.items():
        if name in printed:
            continue
        if name.startswith("E") or name == "C0" or name.startswith("C1"):
            printed[name] = v
        else:
            printed[name] = v + shift
    action = all(alpha(g[n]) == printed[n] for n in g)
    ns = build_sy()
    preserves = all(alpha(v) in ns for v in g.values())
    return {"order2": order2, "isometry": isometry, "printed_action": action, "preserves_sy": preserves}


@dataclass
class EvenEightVerdict:
    holds: bool
    self_products: list[Fraction]
    pairwise_zero: bool
    half_sum: DivisorClass
    witness: list[int] | None
    gram: list[list[Fraction]] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "holds": self.holds,
            "half_sum": [str(x) for x in self.half_sum],
            "witness": self.witness,
            "gram": [[str(x) for x in row] for row in self.gram],
        }


def is_even_eight(classes) -> EvenEightVerdict:
    """Lattice-level test: eight (-2)-classes, pairwise orthogonal, half-sum in S_Y."""
    classes = [DivisorClass(c) for c in classes]
    if len(classes) != 8:
        raise ValueError("an even eight has eight classes")
    gram = [[pairing(u, v) for v in classes] for u in classes]
    selfs = [gram[i][i] for i in range(8)]
    disjoint = all(gram[i][j] == 0 for i in range(8) for j in range(8) if i != j)
    half = sum(classes, zero()) / 2
    witness = build_sy().coordinates(half)
    holds = all(s == -2 for s in selfs) and disjoint and witness is not None
    return EvenEightVerdict(holds, selfs, disjoint, half, witness, gram)


def even_eight(which: str) -> list[DivisorClass]:
    c = preset_classes()
    return [c[f"{which}{i}"] for i in range(1, 9)]


# expression parsing

_COEF = re.compile(r"(?<![A-Za-z0-9_])(\d+(?:/\d+)?)\s*(?=[A-Za-z(])")


def _names() -> dict[str, DivisorClass]:
    return preset_classes()


def parse_divisor(expr: str, names: dict | None = None) -> DivisorClass:
    """Evaluate a linear expression such as ``2C14 + a5 - 1/2(L - E0)`` or ``alpha(C23)``."""
    names = names or _names()
    src = _COEF.sub(lambda m: f"({m.group(1)})*", expr)
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"cannot parse divisor expression {expr!r}") from exc

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return F(node.value)
        if isinstance(node, ast.Name):
            if node.id not in names:
                raise ValueError(f"unknown class {node.id!r}")
            return names[node.id]
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id == "alpha":
            if len(node.args) != 1:
                raise ValueError("alpha takes one argument")
            return alpha(_as_class(ev(node.args[0])))
        if isinstance(node, ast.BinOp):
            a, b = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Add):
                return _as_class(a) + _as_class(b)
            if isinstance(node.op, ast.Sub):
                return _as_class(a) - _as_class(b)
            if isinstance(node.op, ast.Mult):
                if isinstance(a, Fraction):
                    return b * a
                if isinstance(b, Fraction):
                    return a * b
                raise ValueError("product of two classes is not linear")
            if isinstance(node.op, ast.Div) and isinstance(b, Fraction):
                return a / b
        raise ValueError(f"unsupported syntax in {expr!r}")

    return _as_class(ev(tree))


def _as_class(v) -> DivisorClass:
    if isinstance(v, DivisorClass):
        return v
    if v == 0:
        return zero()
    raise ValueError("bare number where a divisor class was expected")


# twisted E8 in the complement of the Nikulin lattice

def e8_twist_gram() -> list[list[int]]:
    """E8(-1) on the chain e1..e7 with e8 on e3, except e7^2 = -4 and e6.e7 = 2."""
    g = e8_gram(-1)
    g[6][6] = -4
    g[5][6] = g[6][5] = 2
    return g


TWIST_PRINTED = ["E14", "C12", "E26", "C16", "E16", "C0", "E14", "2C14 + a5 + a8"]
TWIST_EXTRA = "2E23 + a6 + a7"


def twist_candidates() -> dict[str, DivisorClass]:
    c = preset_classes()
    out = {n: c[n] for n in node_names() + trope_names()}
    out["2C14 + a5 + a8"] = parse_divisor("2C14 + a5 + a8")
    out[TWIST_EXTRA] = parse_divisor(TWIST_EXTRA)
    return out


def nikulin_lattice(ns: KummerNS | None = None) -> Lattice:
    ns = ns or build_sy()
    a = even_eight("a")
    gens = [list(v) for v in a] + [list(sum(a, zero()) / 2)]
    return lattice_from_generators(ns.ambient, gens)


@dataclass
class TwistReport:
    gram_det: int
    complement_det: int
    complement_rank: int
    labels: list[str]
    found_gram_ok: bool
    found_primitive: bool
    completion: list[str]
    completion_index: int
    solutions: int
    direct_solutions: int
    outside_complement: list[str]
    resolution: str
    candidates: list[str]

    def to_json(self) -> dict:
        return {
            "gram_det": self.gram_det,
            "complement_det": self.complement_det,
            "complement_rank": self.complement_rank,
            "labels": self.labels,
            "primitive": self.found_primitive,
            "completion": self.completion,
            "completion_index": self.completion_index,
            "solutions": self.solutions,
            "direct_solutions": self.direct_solutions,
            "outside_complement": self.outside_complement,
            "resolution": self.resolution,
        }


def labelled_embeddings(target, pool: dict[str, DivisorClass]) -> list[list[str]]:
    """Every assignment of pool classes to e1..e8 whose Gram equals ``target``."""
    names = list(pool)
    n = len(names)
    table = [[pairing(pool[a], pool[b]) for b in names] for a in names]
    out = []

    def rec(chosen: list[int]):
        k = len(chosen)
        if k == len(target):
            out.append([names[i] for i in chosen])
            return
        for i in range(n):
            if i in chosen or table[i][i] != target[k][k]:
                continue
            if any(table[i][m] != target[k][j] for j, m in enumerate(chosen)):
                continue
            rec(chosen + [i])

    rec([])
    return out


def reflect(v: DivisorClass, root: DivisorClass) -> DivisorClass:
    """Reflection in a (-2)-class: v + (v.r) r."""
    return v + pairing(v, root) * root


def reflection_closure(pool: dict[str, DivisorClass]) -> dict[str, DivisorClass]:
    """Pool plus the images of its classes under one reflection in a (-2)-class of the pool."""
    out = dict(pool)
    roots = [k for k, v in pool.items() if self_product(v) == -2]
    for r in roots:
        for k, v in pool.items():
            if k != r and pairing(v, pool[r]) != 0:
                out.setdefault(f"s_{r}({k})", reflect(v, pool[r]))
    return out


def twist_check() -> TwistReport:
    """Search N^perp for eight classes with the twisted E8 Gram.

    The documented candidates are tried first; if they admit no labelling, the
    pool is widened by one reflection step, which stays inside N^perp.
    """
    ns = build_sy()
    perp = orthogonal_complement(nikulin_lattice(ns), ns.lattice)
    target = e8_twist_gram()
    cands = twist_candidates()
    pool = {k: v for k, v in cands.items() if perp.coordinates(list(v)) is not None}
    outside = [k for k in dict.fromkeys(TWIST_PRINTED + [TWIST_EXTRA]) if k not in pool]
    direct = labelled_embeddings(target, pool)
    wide = reflection_closure(pool)
    sols = direct or labelled_embeddings(target, wide)
    if not sols:
        raise NotFound("no 8-subset of the candidate classes has the twisted E8 Gram; "
                       f"candidates: {sorted(wide)}")
    printed = set(TWIST_PRINTED)
    best = min(sols, key=lambda s: (-len(printed & set(s)), s))
    vecs = [list(wide[k]) for k in best]
    found = lattice_from_generators(ns.ambient, vecs)
    gram_ok = [[pairing(wide[a], wide[b]) for b in best] for a in best] == target
    completions = []
    for k in pool:
        t = lattice_from_generators(ns.ambient, vecs + [list(pool[k])])
        if t.rank == perp.rank:
            completions.append((index_in(t, perp), k != TWIST_EXTRA, k))
    idx, _, extra = min(completions)
    new = [k for k in best if k not in printed]
    dropped = [k for k in dict.fromkeys(TWIST_PRINTED) if k not in best]
    resolution = (f"e1..e8 = {', '.join(best)}; not in the printed list: {', '.join(new) or 'none'}; "
                  f"printed but unused: {', '.join(dropped) or 'none'}")
    return TwistReport(
        gram_det=linalg.determinant(target),
        complement_det=determinant(perp),
        complement_rank=perp.rank,
        labels=best,
        found_gram_ok=gram_ok,
        found_primitive=is_primitive(found, perp),
        completion=best + [extra],
        completion_index=idx,
        solutions=len(sols),
        direct_solutions=len(direct),
        outside_complement=outside,
        resolution=resolution,
        candidates=sorted(pool),
    )
