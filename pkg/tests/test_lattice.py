from fractions import Fraction

import pytest

from k3lattice.errors import DegenerateSpace, NonIntegralPairing, NotSublattice, OddNorm
from k3lattice.lattice import (
    QuadSpace,
    Signature,
    coordinate_matrix,
    determinant,
    direct_sum,
    direct_sum_all,
    dual_basis,
    e8,
    e8_gram,
    hyperbolic_plane,
    index_in,
    is_primitive,
    is_sublattice,
    lattice_from_generators,
    lattice_from_gram,
    odd_lattice_from_generators,
    orthogonal_complement,
    rank_one,
    rescale,
    saturation,
    short_vectors,
    signature,
    signature_of_gram,
    sublattice,
)


def test_standard_lattices():
    assert determinant(hyperbolic_plane()) == -1
    assert determinant(hyperbolic_plane(2)) == -4
    assert determinant(e8()) == 1
    assert signature(e8()) == Signature(0, 8)
    assert signature(e8(1)) == Signature(8, 0)
    assert determinant(e8(-2)) == 256
    assert determinant(rank_one(-2)) == -2


def test_k3_lattice_invariants():
    k3 = direct_sum_all([hyperbolic_plane()] * 3 + [e8(), e8()])
    assert k3.rank == 22
    assert signature(k3) == Signature(3, 19)
    assert abs(determinant(k3)) == 1


def test_e8_has_240_roots():
    assert len(short_vectors(e8_gram(1), 2)) == 120


def test_short_vectors_of_a2():
    # theta series 1 + 6q^2 + 6q^6 + 6q^8 + ...; pairs are counted once
    assert len(short_vectors([[2, -1], [-1, 2]], 2)) == 3
    assert len(short_vectors([[2, -1], [-1, 2]], 4)) == 3
    assert len(short_vectors([[2, -1], [-1, 2]], 6)) == 6


def test_signature_of_indefinite_gram():
    assert signature_of_gram([[0, 1], [1, 0]]) == Signature(1, 1)
    assert signature_of_gram([[2, 1, 2], [1, -2, 0], [2, 0, 0]]) == Signature(1, 2)


def test_gram_validation():
    with pytest.raises(DegenerateSpace):
        QuadSpace([[1, 1], [1, 1]])
    with pytest.raises(ValueError):
        QuadSpace([[1, 2], [3, 4]])
    with pytest.raises(OddNorm):
        lattice_from_gram([[1]])
    space = QuadSpace([[2, 0], [0, 2]])
    with pytest.raises(NonIntegralPairing):
        lattice_from_generators(space, [[Fraction(1, 2), 0]])
    assert not odd_lattice_from_generators(QuadSpace([[1]]), [[1]]).even


def test_basis_is_canonical():
    space = QuadSpace([[2, 0], [0, 2]])
    a = lattice_from_generators(space, [[2, 0], [0, 2], [2, 2]])
    b = lattice_from_generators(space, [[2, 2], [0, -2]])
    assert a.basis == b.basis


def test_rescale_and_direct_sum():
    u2 = rescale(hyperbolic_plane(), 2)
    assert u2.gram == hyperbolic_plane(2).gram
    s = direct_sum(u2, rank_one(-2))
    assert s.gram == ((0, 2, 0), (2, 0, 0), (0, 0, -2))


def test_sublattice_index_and_containment():
    z = lattice_from_gram([[2, 0, 0], [0, 2, 0], [0, 0, 2]])
    sub = sublattice(z, [[2, 0, 0], [0, 1, 1], [0, 0, 4]])
    assert is_sublattice(sub, z)
    assert index_in(sub, z) == 8
    assert determinant(sub) == index_in(sub, z) ** 2 * determinant(z)
    assert coordinate_matrix(sub, z) == [list(map(int, v)) for v in sub.basis]
    with pytest.raises(NotSublattice):
        coordinate_matrix(z, sub)


def test_orthogonal_complement_and_primitivity():
    k = direct_sum(hyperbolic_plane(), rank_one(-2))
    v = sublattice(k, [[1, 1, 0]])
    perp = orthogonal_complement(v, k)
    assert perp.rank == 2
    assert all(k.space.product(p, [1, 1, 0]) == 0 for p in perp.basis)
    assert is_primitive(v, k)
    w = sublattice(k, [[2, 2, 0]])
    assert not is_primitive(w, k)
    assert saturation(w, k).basis == v.basis


def test_dual_basis_pairs_integrally():
    n = lattice_from_gram([[2, 1, 2], [1, -2, 0], [2, 0, 0]])
    for d in dual_basis(n):
        for b in n.basis:
            assert n.space.product(d, b).denominator == 1
