import random
from math import comb

import pytest

from poleorder.griffiths import (
    NonSmoothError,
    build_pole_complex,
    jacobian_ring_check,
    pole_complex_cohomology,
    primitive_correction,
    vanishing_hodge_numbers,
)
from poleorder.polyring import HomogPoly, is_smooth, linear_substitution, monomial_basis, parse_poly

FERMAT_QUARTIC = parse_poly("x0^4 + x1^4 + x2^4")
FERMAT_CUBIC = parse_poly("x0^3 + x1^3 + x2^3")
NODAL_CUBIC = parse_poly("x1^2*x2 - x0^3 - x0^2*x2")


def genus(d):
    return (d - 1) * (d - 2) // 2


def random_smooth(n_vars, d, seed):
    rng = random.Random(seed)
    while True:
        coeffs = {m: rng.randint(-3, 3) for m in monomial_basis(n_vars, d)}
        f = HomogPoly(n_vars, d, {m: c for m, c in coeffs.items() if c})
        if not f.is_zero() and is_smooth(f):
            return f


def test_pole_complex_examples():
    assert pole_complex_cohomology(FERMAT_QUARTIC, 2)[2] == 3
    assert pole_complex_cohomology(FERMAT_CUBIC, 1)[2] == 2


@pytest.mark.parametrize("text", ["x0^3 + x1^3 + x2^3", "x0^4 + x1^4 + x2^4", "x0^5 + x1^5 + x2^5",
                                  "x0^4 + x1^4 + x2^4 + x3^4", "x0^3 + x1^3"])
def test_top_level_is_sections_of_canonical_twist(text):
    f = parse_poly(text)
    n = f.n_vars - 1
    assert pole_complex_cohomology(f, n)[n] == comb(f.degree - 1, n)


def test_pole_complex_composites_vanish_and_total_cohomology():
    # P^2 minus a smooth curve of genus g: b_0 = 1, b_1 = 0, b_2 = 2g
    for f in (FERMAT_CUBIC, FERMAT_QUARTIC):
        pc = build_pole_complex(f, 0)
        assert pc.composites_vanish()
        assert pc.cohomology() == [1, 0, 2 * genus(f.degree)]


def test_non_smooth_is_rejected():
    with pytest.raises(NonSmoothError, match="pole-order formula requires smooth divisor"):
        pole_complex_cohomology(NODAL_CUBIC, 2)
    with pytest.raises(NonSmoothError):
        vanishing_hodge_numbers(NODAL_CUBIC)
    with pytest.raises(NonSmoothError):
        jacobian_ring_check(NODAL_CUBIC)


@pytest.mark.parametrize("d, expected", [(3, (1, 1)), (4, (3, 3)), (5, (6, 6))])
def test_plane_curves(d, expected):
    rep = vanishing_hodge_numbers(parse_poly(f"x0^{d} + x1^{d} + x2^{d}"))
    assert rep.graded_dims == expected
    assert rep.total == 2 * genus(d)
    assert rep.consistent


def test_quartic_surface():
    rep = vanishing_hodge_numbers(parse_poly("x0^4 + x1^4 + x2^4 + x3^4"))
    assert rep.graded_dims == (1, 19, 1)
    assert rep.total == 21
    assert rep.jacobian_dims == (1, 19, 1)


def test_filtration_dims_are_partial_sums():
    rep = vanishing_hodge_numbers(parse_poly("x0^4 + x1^4 + x2^4 + x3^4"))
    assert rep.filtration_dims == (1, 20, 21)


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_point_sets_on_the_line(d):
    f = random_smooth(2, d, d)
    rep = vanishing_hodge_numbers(f)
    assert rep.graded_dims == (d - 1,)
    assert rep.consistent


def test_jacobian_ring_check_examples():
    assert jacobian_ring_check(FERMAT_QUARTIC)
    assert jacobian_ring_check(FERMAT_CUBIC)
    quintic = random_smooth(3, 5, 11)
    rep = vanishing_hodge_numbers(quintic)
    assert rep.consistent and rep.total == 12


@pytest.mark.parametrize("seed", range(4))
def test_hodge_numbers_invariant_under_coordinate_change(seed):
    rng = random.Random(seed)
    f = random_smooth(3, 4, 40 + seed)
    # unimodular: product of elementary matrices
    A = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    for _ in range(4):
        i, j = rng.sample(range(3), 2)
        c = rng.choice((-2, -1, 1, 2))
        A = [[A[r][s] + (c * A[j][s] if r == i else 0) for s in range(3)] for r in range(3)]
    g = linear_substitution(f, A)
    assert vanishing_hodge_numbers(g).graded_dims == vanishing_hodge_numbers(f).graded_dims == (3, 3)


def test_hodge_symmetry_for_curves():
    for seed in range(3):
        rep = vanishing_hodge_numbers(random_smooth(3, 4, 70 + seed))
        assert rep.graded_dims[0] == rep.graded_dims[1]


def test_primitive_correction_is_empty():
    for n in (1, 2, 3):
        for k in (1, 2, 3):
            assert primitive_correction(n, k) == []
