from fractions import Fraction
from itertools import combinations

import pytest

from k3lattice import linalg
from k3lattice.discform import discriminant_form, is_isomorphic
from k3lattice.kummer import (
    BASIS_NAMES,
    E5_PRINTED_SIGN,
    GRAM,
    HALF_SUM_WITNESSES,
    DivisorClass,
    alpha,
    alpha_checks,
    basis_vector,
    build_sy,
    e5,
    e8_twist_gram,
    even_eight,
    fibers_b,
    fibers_d,
    format_class,
    generators,
    incidence,
    incidence_16_6,
    is_even_eight,
    nikulin_lattice,
    node_names,
    pairing,
    parse_divisor,
    preset_classes,
    reflect,
    self_product,
    trope_names,
    twist_check,
)
from k3lattice.lattice import (
    QuadSpace,
    Signature,
    determinant,
    direct_sum,
    e8,
    e8_gram,
    index_in,
    lattice_from_generators,
    lattice_from_gram,
    orthogonal_complement,
    rank_one,
    signature,
)


@pytest.fixture(scope="module")
def twist():
    return twist_check()


def test_basis_and_gram():
    assert len(BASIS_NAMES) == 17
    assert GRAM[0][0] == 4 and all(GRAM[i][i] == -2 for i in range(1, 17))


def test_sy_invariants():
    ns = build_sy()
    assert ns.lattice.rank == 17
    assert ns.lattice.even
    assert signature(ns.lattice) == Signature(1, 16)
    assert abs(determinant(ns.lattice)) == 64


def test_node_lattice_index():
    ns = build_sy()
    nodes = lattice_from_generators(QuadSpace(GRAM), linalg.identity(17))
    assert determinant(nodes) == 4 * 2 ** 16
    assert index_in(nodes, ns.lattice) == 2 ** 6


def test_generators_are_minus_two_classes():
    g = generators()
    for name in node_names() + trope_names():
        assert self_product(g[name]) == -2, name
    assert pairing(g["L"], g["C0"]) == 2
    assert all(pairing(g[a], g[b]) == 0 for a, b in combinations(trope_names(), 2))


def test_16_6_configuration():
    assert incidence_16_6()
    m = incidence()
    # two distinct nodes lie on exactly two common tropes, and dually
    for i, j in combinations(range(16), 2):
        assert sum(m[i][k] * m[j][k] for k in range(16)) == 2
        assert sum(m[k][i] * m[k][j] for k in range(16)) == 2


def test_alpha():
    checks = alpha_checks()
    assert checks == {"order2": True, "isometry": True, "printed_action": True, "preserves_sy": True}
    L, E0 = basis_vector("L"), basis_vector("E0")
    assert alpha(L) == 3 * L - 4 * E0
    assert alpha(alpha(L)) == L


@pytest.mark.parametrize("which", ["e", "a", "b"])
def test_even_eights_hold(which):
    v = is_even_eight(even_eight(which))
    assert v.holds
    assert v.self_products == [-2] * 8
    assert v.pairwise_zero
    assert v.witness is not None


def test_printed_e5_sign_breaks_the_even_eight():
    c = preset_classes()
    assert E5_PRINTED_SIGN == 1
    classes = even_eight("e")
    classes[4] = c["e5_printed"]
    assert not is_even_eight(classes).holds
    assert pairing(e5(+1), basis_vector("E34")) == -2
    assert pairing(e5(-1), basis_vector("E34")) == 2
    assert e5(-1) + basis_vector("E34") == c["D"]


def test_displayed_half_sum_for_b():
    v = is_even_eight(even_eight("b"))
    assert v.half_sum == parse_divisor(HALF_SUM_WITNESSES["b"])


def test_displayed_half_sum_for_a_is_off_by_a_fixed_class():
    v = is_even_eight(even_eight("a"))
    shown = parse_divisor(HALF_SUM_WITNESSES["a"])
    assert v.half_sum - shown == parse_divisor("-E24 - E25 - E45 + E46 - E56")
    assert shown in build_sy()


def test_fibers_of_d_and_b():
    c = preset_classes()
    assert self_product(c["D"]) == 0 and self_product(c["B"]) == 0
    assert all(f == c["D"] for f in fibers_d().values())
    printed = fibers_b()
    assert printed["F5"] != c["B"]
    assert printed["F5"] - c["B"] == basis_vector("E14") - basis_vector("E34")
    fixed = fibers_b("E34")
    assert all(f == c["B"] for f in fixed.values())


def test_nikulin_lattice():
    n = nikulin_lattice()
    assert n.rank == 8
    d = discriminant_form(n)
    assert d.orders == (2,) * 6


def test_e8_twist_gram():
    g = e8_twist_gram()
    assert linalg.determinant(g) == -4
    t = lattice_from_gram(g)
    assert signature(t) == Signature(1, 7)
    # indefinite, rank 8 >= 2 + l(D): the genus of E7(-1) + <2> has one class
    # E7(-1): drop the end of the long arm of E8(-1)
    e7 = lattice_from_gram([row[:6] + row[7:] for k, row in enumerate(e8_gram(-1)) if k != 6])
    assert determinant(e7) == -2
    assert is_isomorphic(discriminant_form(t), discriminant_form(direct_sum(e7, rank_one(2))))


def test_complement_of_nikulin_lattice():
    ns = build_sy()
    perp = orthogonal_complement(nikulin_lattice(ns), ns.lattice)
    assert perp.rank == 9
    assert abs(determinant(perp)) == 4
    assert signature(perp) == Signature(1, 8)
    assert is_isomorphic(discriminant_form(perp), discriminant_form(direct_sum(e8(-1), rank_one(4))))


def test_twist_search(twist):
    assert twist.gram_det == -4
    assert twist.complement_rank == 9 and abs(twist.complement_det) == 4
    assert twist.found_gram_ok and twist.found_primitive
    assert twist.direct_solutions == 0
    assert twist.solutions > 0
    assert "2C14 + a5 + a8" in twist.outside_complement
    assert twist.completion_index == 1
    assert len(twist.labels) == 8 and len(set(twist.labels)) == 8


def test_twist_labels_realize_the_gram(twist):
    classes = []
    pool = preset_classes()
    for label in twist.labels:
        if label.startswith("s_"):
            root, arg = label[2:].split("(", 1)
            classes.append(reflect(parse_divisor(arg[:-1]), pool[root]))
        else:
            classes.append(parse_divisor(label))
    gram = [[pairing(u, v) for v in classes] for u in classes]
    assert gram == e8_twist_gram()


def test_parse_divisor():
    c = preset_classes()
    assert parse_divisor("L - E0") == c["L"] - c["E0"]
    assert parse_divisor("2(L - E0) - E12") == 2 * (c["L"] - c["E0"]) - c["E12"]
    assert parse_divisor("1/2 L") == c["L"] / 2
    assert parse_divisor("alpha(C23)") == alpha(c["C23"])
    assert parse_divisor("-E12") == -c["E12"]
    assert parse_divisor("3E12") == 3 * c["E12"]
    for bad in ["foo", "L +", "L * E0", "__import__('os')", "E12 ** 2", "2"]:
        with pytest.raises(ValueError):
            parse_divisor(bad)


def test_format_class_roundtrip():
    for v in list(preset_classes().values())[:40]:
        assert parse_divisor(format_class(v)) == v


def test_divisor_class_arithmetic():
    x = DivisorClass([Fraction(1, 2)] + [0] * 16)
    assert (x + x) == basis_vector("L")
    assert -x + x == DivisorClass([0] * 17)
    with pytest.raises(ValueError):
        DivisorClass([0] * 3)
