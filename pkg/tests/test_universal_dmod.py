from math import comb

import pytest
import sympy
from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from poleorder.exact_core import rank
from poleorder.polyring import ProblemSpec, monomial_basis, parse_poly
from poleorder.universal_dmod import (
    FILTRATION_CONVENTION,
    a_coordinates,
    apply_rel_differential,
    aux_char_piece,
    char_closed_form_curve,
    char_module_piece,
    expected_intermediate_cohomology,
    expected_w_dim,
    f1M_rank,
    fiber_charmodule_dim,
    fkM_sections_dim,
    f_multiplication_columns,
    goodness_surjectivity,
    hodge_bookkeeping,
    intermediate_cohomology,
    n0_sections_dim,
    rel_differential_columns,
    rel_differential_matrix,
    rel_differential_rank,
    theoremB_check,
    universal_jacobian_piece,
    w_space,
)


def S(n, d):
    return ProblemSpec(n, d)


# --- independent sympy oracles -------------------------------------------------


def _sympy_setup(spec):
    xs = sympy.symbols(f"x0:{spec.n_vars}")
    monos = [sympy.Mul(*[x**e for x, e in zip(xs, m)]) for m in monomial_basis(spec.n_vars, spec.d)]
    a = sympy.symbols(f"a0:{len(monos)}")
    F = sum(ai * m for ai, m in zip(a, monos))
    return xs, a, F


def _rank_of_polys(polys, gens):
    rows = [sympy.Poly(sympy.expand(p), *gens).as_dict() for p in polys]
    keys = sorted({k for r in rows for k in r})
    idx = {k: i for i, k in enumerate(keys)}
    dense = [[0] * len(keys) for _ in rows]
    for i, r in enumerate(rows):
        for k, c in r.items():
            dense[i][idx[k]] = c
    if not dense or not keys:
        return 0
    return DomainMatrix.from_Matrix(sympy.Matrix(dense)).convert_to(QQ).rank()


def sympy_function_d_rank(spec, k):
    """Rank of g/F^k -> (F dg - k g dF)/F^(k+1) on S_{kd} (x) Q[a]_k, functions only."""
    xs, a, F = _sympy_setup(spec)
    x_monos = [sympy.Mul(*[x**e for x, e in zip(xs, m)]) for m in monomial_basis(spec.n_vars, k * spec.d)]
    a_monos = list(sympy.itermonomials(a, k, k))
    images = []
    for g in x_monos:
        for am in a_monos:
            G = g * am
            # components along dx_i, packed with a marker variable per i
            t = sympy.symbols(f"t0:{spec.n_vars}")
            images.append(sum(ti * (F * sympy.diff(G, xi) - k * G * sympy.diff(F, xi)) for ti, xi in zip(t, xs)))
    return _rank_of_polys(images, list(a) + list(xs) + list(t))


def sympy_ujr_piece(spec, k):
    xs, a, F = _sympy_setup(spec)
    e = k * spec.d - spec.n - 1
    ambient = comb(k + len(a) - 1, len(a) - 1) * comb(e + spec.n, spec.n)
    if e - (spec.d - 1) < 0:
        return ambient
    x_co = [sympy.Mul(*[x**t for x, t in zip(xs, m)]) for m in monomial_basis(spec.n_vars, e - spec.d + 1)]
    a_co = list(sympy.itermonomials(a, k - 1, k - 1))
    gens = [sympy.diff(F, xi) * xm * am for xi in xs for xm in x_co for am in a_co]
    return ambient - _rank_of_polys(gens, list(a) + list(xs))


# --- section spaces ---------------------------------------------------------


def test_w_space_examples():
    assert w_space(S(2, 3), 1, 2).dim == 10
    # h^0(Omega^1(4)) = 15 on P^2, h^0(Omega^2(4)) = 3
    assert w_space(S(2, 4), 1, 1).dim == 15 * 15
    assert w_space(S(2, 4), 1, 2).dim == 3 * 15
    for p in range(3):
        assert w_space(S(2, 4), 0, p).dim == 0
        assert w_space(S(2, 4), -1, p).dim == 0


@pytest.mark.parametrize("spec", [S(1, 2), S(1, 3), S(2, 2), S(2, 3), S(3, 2)])
def test_w_space_dimension_formula(spec):
    for k in range(0, 3):
        for p in range(spec.n + 1):
            assert w_space(spec, k, p).dim == expected_w_dim(spec, k, p)


def test_w_space_labels_are_a_bijection():
    W = w_space(S(1, 3), 2, 1)
    labels = {W.label(j, a) for j in range(W.forms.dim) for a in range(len(W.a_basis))}
    assert labels == set(range(W.dim))


# --- relative differential --------------------------------------------------


def test_rel_differential_example_rank():
    m = rel_differential_matrix(S(1, 2), 1, 0)
    assert (m.rows, m.cols) == (w_space(S(1, 2), 2, 1).dim, 9)
    assert rank(m) == 8


@pytest.mark.parametrize("spec, k", [(S(1, 2), 1), (S(1, 2), 2), (S(1, 3), 1), (S(2, 2), 1)])
def test_function_differential_rank_matches_symbolic(spec, k):
    assert rel_differential_rank(spec, k, 0) == sympy_function_d_rank(spec, k)


def test_kernel_on_functions_is_multiples_of_F():
    # d(g/F^k) = 0 iff g = c F^k; the kernel on W_k^0 is one-dimensional
    for spec in (S(1, 2), S(1, 3), S(2, 2), S(2, 3)):
        for k in (1, 2):
            if k == 2 and spec == S(2, 3):
                continue
            assert w_space(spec, k, 0).dim - rel_differential_rank(spec, k, 0) == 1


@pytest.mark.parametrize("spec, k, p", [(S(2, 2), 1, 0), (S(2, 3), 1, 0), (S(3, 2), 1, 0), (S(3, 2), 1, 1)])
def test_consecutive_differentials_compose_to_zero(spec, k, p):
    first = rel_differential_matrix(spec, k, p)
    second = rel_differential_matrix(spec, k + 1, p + 1)
    assert (second @ first).is_zero()


def test_empty_matrix_for_zero_space():
    m = rel_differential_matrix(S(2, 3), 0, 0)
    assert m.cols == 0
    assert rel_differential_columns(S(2, 3), 0, 1) == []


def test_apply_matches_columns():
    spec = S(2, 3)
    cols = rel_differential_columns(spec, 1, 1)
    vec = {0: 2, 7: -1, 31: 3}
    combo = {}
    for j, c in vec.items():
        for key, x in cols[j].items():
            combo[key] = combo.get(key, 0) + c * x
    assert {k: v for k, v in combo.items() if v} == apply_rel_differential(spec, 1, 1, vec)


def test_f_multiplication_is_injective():
    for spec in (S(1, 2), S(1, 3), S(2, 3), S(2, 4)):
        for k in (1, 2, 3):
            got, exp = aux_char_piece(spec, k)
            assert got == exp
    assert f_multiplication_columns(S(2, 3), 0) == []


# --- section counts -----------------------------------------------------------


def test_n0_and_fkM_examples():
    assert n0_sections_dim(S(2, 3), 1) == 10
    assert n0_sections_dim(S(2, 4), 1) == 45
    assert n0_sections_dim(S(1, 3), 1) == 8
    assert fkM_sections_dim(S(2, 4), 1) == 45
    assert fkM_sections_dim(S(2, 3), 1) == 10
    assert fkM_sections_dim(S(1, 2), 1) == 3
    with pytest.raises(ValueError):
        n0_sections_dim(S(1, 2), 0)


def test_f1M_examples():
    assert f1M_rank(S(2, 4)) == 3
    assert f1M_rank(S(2, 3)) == 1
    assert f1M_rank(S(3, 4)) == 1


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("d", [2, 3, 4])
def test_lowest_level_closed_form(n, d):
    spec = S(n, d)
    got = fkM_sections_dim(spec, 1)
    assert got == comb(d - 1, n) * comb(n + d, n)
    assert got == f1M_rank(spec) * (spec.dim_P + 1)


def test_fkM_agrees_with_n0_for_projective_space():
    for spec in (S(1, 2), S(1, 3), S(2, 3)):
        for k in (1, 2, 3):
            assert fkM_sections_dim(spec, k) == n0_sections_dim(spec, k)


def test_filtration_convention_is_recorded():
    assert "F_k M" in FILTRATION_CONVENTION["index"]
    assert "F_{k+n}" in FILTRATION_CONVENTION["hodge_module_shift"]


# --- characteristic module ------------------------------------------------------


def test_char_module_examples():
    assert char_module_piece(S(1, 2), 1) == 3
    assert char_module_piece(S(1, 3), 1) == 8
    assert char_module_piece(S(1, 3), 2) == 27
    assert w_space(S(1, 3), 2, 1).dim == 50


def test_universal_jacobian_examples():
    assert universal_jacobian_piece(S(1, 2), 1) == 3
    assert universal_jacobian_piece(S(1, 3), 2) == 27
    assert universal_jacobian_piece(S(1, 2), 2) == 7


@pytest.mark.parametrize("spec, k", [(S(1, 2), 2), (S(1, 3), 2), (S(2, 2), 2), (S(2, 3), 1), (S(2, 3), 2)])
def test_universal_jacobian_matches_symbolic(spec, k):
    assert universal_jacobian_piece(spec, k) == sympy_ujr_piece(spec, k)


def test_characteristic_module_tables():
    t = theoremB_check(S(1, 2), range(1, 5))
    assert [r.dim_C for r in t.rows] == [3, 7, 11, 15]
    assert [r.dim_UJR for r in t.rows] == [3, 7, 11, 15]
    assert t.closed_form_matches and t.all_agree and t.onset == 1
    t = theoremB_check(S(1, 3), range(1, 4))
    assert [r.dim_C for r in t.rows] == [8, 27, 56]
    assert [(k + 1) * (5 * k - 1) for k in (1, 2, 3)] == [8, 27, 56]
    t = theoremB_check(S(2, 3), range(1, 4))
    assert t.all_agree
    assert t.closed_form_matches is None
    with pytest.raises(ValueError):
        theoremB_check(S(1, 2), range(0, 2))


def test_curve_closed_form():
    assert [char_closed_form_curve(S(1, 2), k) for k in (1, 2, 3, 4)] == [3, 7, 11, 15]
    assert char_closed_form_curve(S(2, 3), 1) is None


# --- goodness and the complex E_k ---------------------------------------------------


def test_goodness_examples():
    assert goodness_surjectivity(S(2, 3), 1)
    assert goodness_surjectivity(S(2, 4), 2)
    assert not goodness_surjectivity(S(3, 2), 1)


def test_hodge_bookkeeping_table():
    # n = 2: only the left end i = -n carries a class, once k >= n + 1
    assert [hodge_bookkeeping(2, k, -2) for k in range(1, 6)] == [0, 0, 1, 1, 1]
    assert all(hodge_bookkeeping(2, k, -1) == 0 for k in range(1, 6))
    assert [hodge_bookkeeping(1, k, -1) for k in (1, 2, 3)] == [0, 1, 1]
    assert [hodge_bookkeeping(3, k, -3) for k in (3, 4, 5)] == [0, 1, 1]
    assert all(hodge_bookkeeping(3, k, i) == 0 for k in range(1, 6) for i in (-2, -1))


def test_intermediate_examples():
    assert intermediate_cohomology(S(2, 3), 2, -1) == 0
    assert intermediate_cohomology(S(2, 3), 1, -2) == 0
    # left end at k = n + 1: the kernel of d on W_1^0 is spanned by F alone
    assert intermediate_cohomology(S(2, 4), 3, -2) == 1
    assert expected_intermediate_cohomology(S(2, 4), 3, -2) == 1
    with pytest.raises(ValueError):
        intermediate_cohomology(S(2, 3), 2, 0)
    with pytest.raises(ValueError):
        intermediate_cohomology(S(2, 3), 2, -3)


@pytest.mark.parametrize("spec", [S(1, 2), S(1, 3), S(2, 2), S(2, 3), S(3, 2)])
def test_intermediate_matches_bookkeeping(spec):
    for k in range(1, 4):
        for i in range(-spec.n, 0):
            assert intermediate_cohomology(spec, k, i) == expected_intermediate_cohomology(spec, k, i)


# --- fibers ------------------------------------------------------------------------


def test_fiber_examples():
    quartic = parse_poly("x0^4 + x1^4 + x2^4")
    assert fiber_charmodule_dim(S(2, 4), quartic, 1) == 3
    assert fiber_charmodule_dim(S(2, 4), quartic, 2) == 3
    nodal = parse_poly("x1^2*x2 - x0^3 - x0^2*x2")
    assert fiber_charmodule_dim(S(2, 3), nodal, 3) == 1
    with pytest.raises(ValueError):
        fiber_charmodule_dim(S(2, 4), nodal, 1)


def test_a_coordinates_specialize_back():
    from poleorder.polyring import universal_form

    f = parse_poly("x0^3 - 2*x0*x1*x2 + 5*x2^3")
    assert universal_form(S(2, 3)).specialize(a_coordinates(f)) == f
