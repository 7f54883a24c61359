import random
from itertools import combinations
from math import comb, factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from poleorder.forms import (
    Form,
    RationalFormRep,
    TwistedForm,
    bott_h,
    check_ampleness_condition,
    cone_d,
    differential,
    dx,
    euler_contract,
    exterior_d,
    function_form,
    poly_times,
    top_form,
    twisted_form_basis,
    volume_form,
    wedge,
)
from poleorder.polyring import HomogPoly, ProblemSpec, a_monomials, monomial_basis, parse_poly, universal_form


def xform(n_vars, i, e):
    """``x^e dx_i``."""
    return poly_times(HomogPoly.monomial(e), dx(n_vars, i))


def test_twisted_basis_examples():
    assert twisted_form_basis(2, 1, 2).dim == 3
    assert twisted_form_basis(2, 2, 3).dim == 1
    assert twisted_form_basis(1, 1, 2).dim == 1
    assert twisted_form_basis(2, 1, 1).dim == 0


def test_twisted_basis_p1_m2_is_antisymmetric_matrices():
    # x_i dx_j - x_j dx_i span the sections of Omega^1(2) on P^2
    basis = twisted_form_basis(2, 1, 2)
    for i, j in combinations(range(3), 2):
        w = xform(3, j, (1 if i == 0 else 0, 1 if i == 1 else 0, 1 if i == 2 else 0))
        w = w - xform(3, i, tuple(int(t == j) for t in range(3)))
        assert basis.contains(w)


def test_basis_elements_descend_and_coords_roundtrip():
    basis = twisted_form_basis(2, 1, 4)
    forms = basis.forms()
    for j, w in enumerate(forms):
        assert euler_contract(w).is_zero()
        assert basis.coords_of(w) == {j: 1}
    w = forms[0].scale(3) - forms[5] + forms[-1]
    assert basis.coords_of(w) == {0: 3, 5: -1, len(forms) - 1: 1}


def test_coords_of_rejects_forms_outside():
    basis = twisted_form_basis(2, 1, 2)
    outside = xform(3, 0, (1, 0, 0))
    assert not basis.contains(outside)
    with pytest.raises(ValueError):
        basis.coords_of(outside, check=True)


def test_euler_contraction_examples():
    w = xform(3, 1, (1, 0, 0)) - xform(3, 0, (0, 1, 0))
    assert euler_contract(w).is_zero()
    got = euler_contract(wedge(dx(3, 0), dx(3, 1)))
    assert got == xform(3, 1, (1, 0, 0)) - xform(3, 0, (0, 1, 0))
    for n in (1, 2, 3):
        assert euler_contract(volume_form(n)).is_zero()


def test_twisted_form_rejects_non_descending():
    with pytest.raises(ValueError):
        TwistedForm.of(xform(3, 0, (1, 0, 0)))


def test_sections_of_top_forms_are_multiples_of_volume():
    for n, m in ((1, 4), (2, 5), (3, 6)):
        basis = twisted_form_basis(n, n, m)
        assert basis.dim == len(monomial_basis(n + 1, m - n - 1))
        for mono in monomial_basis(n + 1, m - n - 1):
            assert basis.contains(top_form(HomogPoly.monomial(mono)))


def test_wedge_examples():
    assert wedge(dx(3, 0), dx(3, 0)).is_zero()
    assert wedge(dx(3, 0), dx(3, 1)) == -wedge(dx(3, 1), dx(3, 0))
    a = xform(3, 1, (1, 0, 0))
    b = xform(3, 0, (0, 1, 0))
    expect = poly_times(HomogPoly.monomial((1, 1, 0)), wedge(dx(3, 0), dx(3, 1))).scale(-1)
    assert wedge(a, b) == expect


@st.composite
def random_forms(draw, n_vars=3):
    p = draw(st.integers(0, n_vars))
    deg = draw(st.integers(0, 2))
    keys = [(I, e) for I in combinations(range(n_vars), p) for e in monomial_basis(n_vars, deg)]
    comps = draw(st.dictionaries(st.sampled_from(keys), st.integers(-3, 3), min_size=1, max_size=4))
    return Form(n_vars, p, deg, {k: c for k, c in comps.items() if c})


@given(random_forms(), random_forms())
@settings(max_examples=100, deadline=None)
def test_wedge_graded_anticommutative(a, b):
    sign = (-1) ** (a.p * b.p)
    assert wedge(a, b) == wedge(b, a).scale(sign)


@given(random_forms(), random_forms())
@settings(max_examples=100, deadline=None)
def test_leibniz_rule(a, b):
    lhs = cone_d(wedge(a, b))
    rhs = wedge(cone_d(a), b) + wedge(a, cone_d(b)).scale((-1) ** a.p)
    assert lhs == rhs


@given(random_forms())
@settings(max_examples=100, deadline=None)
def test_d_squared_zero_on_the_cone(a):
    assert cone_d(cone_d(a)).is_zero()


@given(random_forms())
@settings(max_examples=100, deadline=None)
def test_contraction_squared_zero(a):
    assert euler_contract(euler_contract(a)).is_zero()


def test_exterior_d_examples():
    f = parse_poly("x0^3 + x1^3 + x2^3")
    one = function_form(HomogPoly.monomial((0, 0, 0)))
    got = exterior_d(RationalFormRep(one, 1, f))
    assert got.pole_order == 2
    assert got.numerator == -differential(f)
    # the constant function 1 is a closed section of O
    closed = twisted_form_basis(2, 0, 0).forms()[0]
    assert exterior_d(RationalFormRep(closed, 0, f)).numerator_is_zero()


def _random_numerator(rng, n, p, m):
    forms = twisted_form_basis(n, p, m).forms()
    out = forms[0].scale(0)
    for w in rng.sample(forms, min(3, len(forms))):
        out = out + w.scale(rng.randint(-4, 4))
    return out


@pytest.mark.parametrize("seed", range(25))
def test_exterior_d_descends_and_squares_to_zero(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 3)
    d = rng.randint(2, 3)
    p = rng.randint(0, n - 1)
    # sections of Omega^p(kd) need kd > p (or p = 0)
    k = rng.randint(0 if p == 0 else p // d + 1, 2)
    coeffs = {m: rng.randint(-3, 3) for m in monomial_basis(n + 1, d)}
    coeffs = {m: c for m, c in coeffs.items() if c} or {monomial_basis(n + 1, d)[0]: 1}
    f = HomogPoly(n + 1, d, coeffs)
    rep = RationalFormRep(_random_numerator(rng, n, p, k * d), k, f)
    once = exterior_d(rep)
    assert once.numerator_descends()
    assert exterior_d(once).numerator_is_zero()


@pytest.mark.parametrize("seed", range(10))
def test_universal_exterior_d(seed):
    rng = random.Random(100 + seed)
    spec = ProblemSpec(rng.randint(1, 2), 2)
    k = rng.randint(1, 2)
    p = rng.randint(0, spec.n - 1)
    alphas = a_monomials(spec.dim_V, k)
    num = {rng.choice(alphas): _random_numerator(rng, spec.n, p, k * spec.d) for _ in range(2)}
    rep = RationalFormRep(num, k, universal_form(spec))
    once = exterior_d(rep)
    assert once.universal and once.pole_order == k + 1
    assert once.numerator_descends()
    assert exterior_d(once).numerator_is_zero()
    # specializing the a-variables commutes with d
    vec = [rng.randint(-3, 3) for _ in range(spec.dim_V)]
    f = universal_form(spec).specialize(vec)
    if f.is_zero():
        return

    def spec_num(numer):
        total = None
        for alpha, w in numer.items():
            c = 1
            for j in alpha:
                c *= vec[j]
            total = w.scale(c) if total is None else total + w.scale(c)
        return total

    assert exterior_d(RationalFormRep(spec_num(num), k, f)).numerator == spec_num(once.numerator)


def test_bott_examples():
    assert bott_h(2, 1, 1, 0) == 1
    assert bott_h(2, 1, 0, 2) == 3
    assert bott_h(2, 1, 1, 5) == 0
    with pytest.raises(ValueError):
        bott_h(2, 3, 0, 1)


def test_bott_serre_duality_and_hodge_numbers():
    for n in (1, 2, 3):
        for p in range(n + 1):
            for q in range(n + 1):
                assert bott_h(n, p, q, 0) == int(p == q)
                for m in range(-6, 7):
                    assert bott_h(n, p, q, m) == bott_h(n, n - p, n - q, -m)


def test_bott_euler_characteristic_from_euler_sequence():
    # chi(Omega^p(m)) = sum_i (-1)^i binom(n+1, p-i) binom(m-p+i+n, n) (Koszul resolution)
    def chi_poly(n, m):
        # h^0(O(m)) as the polynomial binom(m+n, n), valid for all m
        out = 1
        for t in range(1, n + 1):
            out = out * (m + t)
        return out // factorial(n)

    for n in (1, 2, 3):
        for p in range(n + 1):
            for m in range(-5, 8):
                chi = sum((-1) ** q * bott_h(n, p, q, m) for q in range(n + 1))
                expect = sum((-1) ** i * comb(n + 1, p - i) * chi_poly(n, m - p + i) for i in range(p + 1))
                assert chi == expect


@pytest.mark.parametrize("n", [1, 2, 3])
def test_basis_dimension_matches_bott(n):
    for p in range(n + 1):
        for m in range(-2, 9):
            assert twisted_form_basis(n, p, m).dim == bott_h(n, p, 0, m)


def test_ampleness_examples():
    assert check_ampleness_condition(ProblemSpec(2, 3), 5)
    assert check_ampleness_condition(ProblemSpec(3, 2), 5)
    assert check_ampleness_condition(ProblemSpec(1, 2), 10)
