"""Random generators shared by the property tests and the acceptance suite."""

from fractions import Fraction

from k3lattice.discform import (
    FiniteQuadraticForm,
    cyclic_form,
    direct_sum_forms,
    form_from_polynomial,
    subgroup,
    u_form,
)
from k3lattice.linalg import determinant


def v_form(m: int) -> FiniteQuadraticForm:
    """v(m): x^2 + xy + y^2 scaled to Z/m x Z/m."""
    c = Fraction(2, m)
    return form_from_polynomial((m, m), {(0, 0): c, (0, 1): c, (1, 1): c})


def random_two_piece(rng, max_order=8) -> FiniteQuadraticForm:
    k = rng.choice([k for k in (1, 2, 3) if 2 ** k <= max_order])
    m = 2 ** k
    kind = rng.choice(["cyclic", "cyclic", "u", "v"])
    if kind == "cyclic":
        return cyclic_form(m, Fraction(rng.choice([1, 3, 5, 7]), m))
    return u_form(m) if kind == "u" else v_form(m)


def random_two_group_form(rng, max_size=256) -> FiniteQuadraticForm:
    pieces = []
    size = 1
    for _ in range(rng.randint(1, 4)):
        piece = random_two_piece(rng)
        if size * piece.size > max_size:
            break
        pieces.append(piece)
        size *= piece.size
    return direct_sum_forms(*pieces)


def random_p_form(rng, p: int, max_size=243) -> FiniteQuadraticForm:
    if p == 2:
        return random_two_group_form(rng, max_size)
    pieces = []
    size = 1
    for _ in range(rng.randint(1, 3)):
        m = p ** rng.randint(1, 2)
        if size * m > max_size:
            break
        unit = rng.choice([u for u in range(1, m) if u % p])
        # q(g) = 2u/m is well defined mod 2 for odd m
        pieces.append(cyclic_form(m, Fraction(2 * unit, m)))
        size *= m
    return direct_sum_forms(*pieces)


def random_isotropic_subgroup(rng, form: FiniteQuadraticForm, tries: int = 6):
    gens = []
    for _ in range(tries):
        x = rng.choice(form.elements)
        if form.q(x) != 0:
            continue
        if all(form.b(x, g) == 0 for g in gens):
            gens.append(x)
    return subgroup(form, gens)


def random_even_gram(rng, n: int, bound: int = 4) -> list[list[int]]:
    while True:
        g = [[0] * n for _ in range(n)]
        for i in range(n):
            g[i][i] = 2 * rng.randint(-bound, bound)
            for j in range(i + 1, n):
                g[i][j] = g[j][i] = rng.randint(-bound, bound)
        if determinant(g) != 0:
            return g
