from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from helpers import random_isotropic_subgroup, random_two_group_form, v_form
from k3lattice import linalg
from k3lattice.discform import (
    FiniteQuadraticForm,
    PadicDetClass,
    apply_map,
    cyclic_form,
    direct_sum_forms,
    discriminant_form,
    form_from_polynomial,
    form_iso,
    glue,
    has_odd_order2_summand,
    is_isomorphic,
    isotropic_subgroups,
    length,
    mod2,
    overlattice,
    overlattice_subgroup,
    p_part,
    quotient_form,
    subgroup,
    technical_lemma_check,
    u_form,
)
from k3lattice.errors import NotEmbedding, NotIsotropic
from k3lattice.lattice import determinant, direct_sum, e8, hyperbolic_plane, index_in, lattice_from_gram, rank_one

F = Fraction


def test_form_validation():
    with pytest.raises(ValueError):
        FiniteQuadraticForm((2,), (F(1, 4),), ((F(1, 4),),))
    with pytest.raises(ValueError):
        FiniteQuadraticForm((2,), (F(1, 2),), ((F(0),),))
    with pytest.raises(ValueError):
        FiniteQuadraticForm((1,), (F(0),), ((F(0),),))


def test_rank_one_discriminant():
    for n in (1, 2, 3, 4, -1, -4):
        d = discriminant_form(rank_one(2 * n))
        assert d.orders == (abs(2 * n),)
        assert d.q_values == (mod2(F(1, 2 * n)),)


def test_hyperbolic_and_e8():
    assert discriminant_form(hyperbolic_plane()).is_trivial()
    assert discriminant_form(e8()).is_trivial()
    assert is_isomorphic(discriminant_form(hyperbolic_plane(2)), u_form(2))
    d = discriminant_form(e8(-2))
    assert d.orders == (2,) * 8
    assert not has_odd_order2_summand(d)


def test_n3_form_matches_row9_generator():
    d = discriminant_form(lattice_from_gram([[2, 1, 2], [1, -2, 0], [2, 0, 0]]))
    assert d.orders == (8,)
    assert is_isomorphic(d, cyclic_form(8, F(3, 8)))


def test_classical_two_adic_relations():
    half, three_half = cyclic_form(2, F(1, 2)), cyclic_form(2, F(3, 2))
    assert not is_isomorphic(u_form(2), v_form(2))
    assert not is_isomorphic(direct_sum_forms(half, half), u_form(2))
    assert is_isomorphic(direct_sum_forms(u_form(2), half), direct_sum_forms(half, half, three_half))
    assert is_isomorphic(direct_sum_forms(v_form(2), half), direct_sum_forms(three_half, three_half, three_half))
    assert is_isomorphic(direct_sum_forms(u_form(2), u_form(2)), direct_sum_forms(v_form(2), v_form(2)))
    # lattice oracle: U(2) + <2> and <2> + <2> + <-2> share a genus
    a = discriminant_form(direct_sum(hyperbolic_plane(2), rank_one(2)))
    b = discriminant_form(direct_sum(direct_sum(rank_one(2), rank_one(2)), rank_one(-2)))
    assert is_isomorphic(a, b)


def test_form_iso_returns_an_isometry(rng):
    for _ in range(40):
        q = random_two_group_form(rng, 64)
        images = form_iso(q, q)
        assert images is not None
        for x in q.elements:
            assert q.q(apply_map(q, q, images, x)) == q.q(x)


def test_form_iso_rejects_size_and_profile_mismatch():
    assert form_iso(cyclic_form(4, F(1, 4)), cyclic_form(2, F(1, 2))) is None
    assert form_iso(cyclic_form(4, F(1, 4)), cyclic_form(4, F(3, 4))) is None


def test_length_and_p_part():
    q = direct_sum_forms(cyclic_form(4, F(1, 4)), cyclic_form(3, F(2, 3)), cyclic_form(2, F(1, 2)))
    assert length(q) == 2
    assert p_part(q, 3).orders == (3,)
    assert sorted(p_part(q, 2).orders) == [2, 4]


def test_isotropic_subgroups_of_u2():
    subs = isotropic_subgroups(u_form(2))
    assert sorted(s.size for s in subs) == [1, 2, 2]
    assert all(s.is_isotropic() for s in subs)


def test_overlattice_index_square_law():
    t = direct_sum(rank_one(2), rank_one(-2))
    d = discriminant_form(t)
    h = next(s for s in isotropic_subgroups(d) if s.size == 2)
    m = overlattice(t, h)
    assert determinant(t) == index_in(t, m) ** 2 * determinant(m)
    assert abs(determinant(m)) == 1
    assert overlattice_subgroup(t, m, d).elements == h.elements


def test_overlattice_needs_isotropic_subgroup():
    t = direct_sum(rank_one(2), rank_one(2))
    d = discriminant_form(t)
    with pytest.raises(NotIsotropic):
        overlattice(t, subgroup(d, [(1, 1)]))


def test_glue_anti_isometry():
    t, s = rank_one(2), rank_one(-2)
    m = glue(t, s, [(1,)], [(1,)])
    assert abs(determinant(m)) == 1
    with pytest.raises(NotEmbedding):
        glue(rank_one(2), rank_one(2), [(1,)], [(1,)])


def test_padic_det_class():
    assert PadicDetClass.of(12, 2) == PadicDetClass(2, 2, 3)
    assert PadicDetClass.of(-1, 2).unit == 7
    assert PadicDetClass.of(F(3, 4), 2) == PadicDetClass(2, -2, 3)
    assert PadicDetClass.of(2, 3) == PadicDetClass(3, 0, -1)
    assert PadicDetClass.of(6, 3) == PadicDetClass(3, 1, -1)
    assert PadicDetClass.of(3, 2).same_up_to_sign(PadicDetClass.of(5, 2))
    assert not PadicDetClass.of(3, 2).same_up_to_sign(PadicDetClass.of(7, 2))
    assert PadicDetClass.of(6, 5) * PadicDetClass.of(10, 5) == PadicDetClass.of(60, 5)


def test_odd_order2_summand():
    half = cyclic_form(2, F(1, 2))
    assert has_odd_order2_summand(half)
    assert has_odd_order2_summand(direct_sum_forms(u_form(2), cyclic_form(2, F(3, 2))))
    assert not has_odd_order2_summand(u_form(2))
    assert not has_odd_order2_summand(v_form(2))
    assert not has_odd_order2_summand(cyclic_form(4, F(1, 4)))
    assert not has_odd_order2_summand(direct_sum_forms(u_form(4), cyclic_form(8, F(3, 8))))


def test_technical_lemma_on_examples():
    q = direct_sum_forms(u_form(2), u_form(2))
    for h in isotropic_subgroups(q):
        r = technical_lemma_check(q, h)
        assert r["holds"]
        assert quotient_form(q, h).size * h.size ** 2 == q.size


# property checks on random data

@st.composite
def even_grams(draw, max_n=3, bound=4):
    n = draw(st.integers(1, max_n))
    g = [[0] * n for _ in range(n)]
    for i in range(n):
        g[i][i] = 2 * draw(st.integers(-bound, bound))
        for j in range(i + 1, n):
            g[i][j] = g[j][i] = draw(st.integers(-bound, bound))
    assume(linalg.determinant(g) != 0)
    return g


@settings(max_examples=60, deadline=None)
@given(even_grams())
def test_q_b_compatibility_on_random_lattices(gram):
    d = discriminant_form(lattice_from_gram(gram))
    assert d.size == abs(determinant(lattice_from_gram(gram)))
    for x in d.elements[:30]:
        assert mod2(d.b(x, x) - d.q(x)) % 1 == 0
        lx = d.lift(x)
        assert d.q(x) == mod2(d.lattice.space.norm(lx))
        for y in d.elements[:8]:
            assert mod2(d.q(d.add(x, y)) - d.q(x) - d.q(y) - 2 * d.b(x, y)) == 0


@settings(max_examples=60, deadline=None)
@given(st.randoms(use_true_random=False))
def test_random_forms_scale_and_polarize(r):
    q = random_two_group_form(r, 128)
    for _ in range(10):
        x, y = r.choice(q.elements), r.choice(q.elements)
        n = r.randint(-5, 5)
        assert q.q(q.scale(n, x)) == mod2(n * n * q.q(x))
        assert mod2(q.q(q.add(x, y)) - q.q(x) - q.q(y) - 2 * q.b(x, y)) == 0


@settings(max_examples=40, deadline=None)
@given(st.randoms(use_true_random=False))
def test_technical_lemma_on_random_forms(r):
    q = random_two_group_form(r, 128)
    h = random_isotropic_subgroup(r, q)
    assert technical_lemma_check(q, h)["holds"]


def test_form_from_polynomial_coefficients():
    q = form_from_polynomial((2, 2), {(0, 1): 1})
    assert q.q((1, 1)) == 1
    assert q.b((1, 0), (0, 1)) == F(1, 2)
