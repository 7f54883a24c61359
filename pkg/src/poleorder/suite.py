"""Verification suites shared by the command line and the test-suite.

Every function returns a list of :class:`~poleorder.report.Check`.  The
``criterion_*`` functions make up the default ``verify-all`` grid; the
``*_checks`` functions serve the individual sub-commands and the
single-family ``verify-all``.
"""

from __future__ import annotations

import random
from math import comb

from .forms import (
    RationalFormRep,
    bott_h,
    exterior_d,
    twisted_form_basis,
)
from .griffiths import NonSmoothError, pole_complex_cohomology, vanishing_hodge_numbers
from .polyring import (
    HomogPoly,
    ProblemSpec,
    a_monomials,
    is_smooth,
    monomial_basis,
    parse_poly,
    tjurina_stabilization,
    universal_form,
)
from .report import Check, Expected, verdict
from .strata import (
    JetSpec,
    NonIsolatedError,
    fiber_surjectivity,
    jet_rank,
    jet_separation_check,
    random_points,
    stratum_codim_estimate,
)
from .universal_dmod import (
    FILTRATION_CONVENTION,
    apply_rel_differential,
    aux_char_piece,
    expected_intermediate_cohomology,
    expected_w_dim,
    f1M_rank,
    fiber_charmodule_dim,
    fkM_sections_dim,
    goodness_surjectivity,
    hodge_bookkeeping,
    intermediate_cohomology,
    n0_sections_dim,
    theoremB_check,
    w_space,
)

# ---------------------------------------------------------------------------
# fixtures
# ---------------------------------------------------------------------------

FERMAT_CUBIC = "x0^3 + x1^3 + x2^3"
FERMAT_QUARTIC = "x0^4 + x1^4 + x2^4"
FERMAT_QUINTIC = "x0^5 + x1^5 + x2^5"
KLEIN_QUARTIC = "x0^3*x1 + x1^3*x2 + x2^3*x0"
MIXED_QUINTIC = "x0^5 + x1^5 + x2^5 + x0*x1*x2^3"
K3_QUARTIC = "x0^4 + x1^4 + x2^4 + x3^4"
BINARY_CUBIC = "x0^3 + x1^3"
NODAL_CUBIC = "x1^2*x2 - x0^3 - x0^2*x2"
CUSPIDAL_CUBIC = "x1^2*x2 - x0^3"
NODAL_QUARTIC = "x1^2*x2^2 - x0^2*x2^2 + x0^4 + x1^4"
# image of a general conic under the quadratic Cremona map: nodes at the coordinate points
THREE_NODAL_QUARTIC = "x1^2*x2^2 + 2*x0^2*x2^2 + 3*x0^2*x1^2 + x0*x1*x2^2 + x0^2*x1*x2 + x0*x1^2*x2"

SMOOTH_FIXTURES = (FERMAT_CUBIC, FERMAT_QUARTIC, FERMAT_QUINTIC, KLEIN_QUARTIC, MIXED_QUINTIC, K3_QUARTIC, BINARY_CUBIC)

COLLINEAR_POINTS = ((1, 0, 0), (0, 1, 0), (1, 1, 0))


def fermat(spec: ProblemSpec) -> HomogPoly:
    return parse_poly(" + ".join(f"x{i}^{spec.d}" for i in range(spec.n_vars)))


def _genus(d: int) -> int:
    return (d - 1) * (d - 2) // 2


# ---------------------------------------------------------------------------
# checks for one hypersurface
# ---------------------------------------------------------------------------


def hodge_checks(f: HomogPoly, criterion: int | None = None) -> list[Check]:
    n, d = f.n_vars - 1, f.degree
    inputs = {"poly": str(f), "n": n, "d": d}
    if not is_smooth(f):
        tj = tjurina_stabilization(f)
        return [Check("smoothness", "fail", inputs, {"smooth": False, "tjurina": tj.tau}, {},
                      criterion, note="pole-order formula requires smooth divisor")]
    rep = vanishing_hodge_numbers(f)
    checks = [
        Check(
            "vanishing Hodge numbers: forms vs Jacobian ring",
            verdict(rep.consistent),
            inputs,
            {"graded_dims": rep.graded_dims, "filtration_dims": rep.filtration_dims},
            {"graded_dims": Expected(rep.jacobian_dims, "independent path: graded pieces of S/J(f)")},
            criterion,
        )
    ]
    if n == 2:
        g = _genus(d)
        checks.append(Check(
            "vanishing cohomology of a plane curve has dimension 2g",
            verdict(rep.total == 2 * g),
            inputs,
            {"total": rep.total},
            {"total": Expected(2 * g, "genus formula (d-1)(d-2)/2")},
            criterion,
        ))
    coh = pole_complex_cohomology(f, n)
    checks.append(Check(
        "top pole-complex cohomology is the lowest Hodge piece",
        verdict(coh[n] == rep.filtration_dims[0] and not any(coh[:n])),
        inputs,
        {"cohomology_by_degree": coh},
        {"top": Expected(rep.filtration_dims[0], "pole-order quotient with pole order 1")},
        criterion,
    ))
    return checks


# ---------------------------------------------------------------------------
# the universal family
# ---------------------------------------------------------------------------


def charmod_checks(spec: ProblemSpec, k_max: int, criterion: int | None = None) -> list[Check]:
    table = theoremB_check(spec, range(1, k_max + 1))
    inputs = {"n": spec.n, "d": spec.d}
    checks = []
    for row in table.rows:
        # agreement is only claimed in large degrees, so k = 1 is informational
        v = "pass" if row.agree else ("fail" if row.k >= 2 else "info")
        checks.append(Check(
            f"characteristic module, k={row.k}: forms vs universal Jacobian ring",
            v,
            {**inputs, "k": row.k},
            {"dim_C": row.dim_C},
            {"dim_C": Expected(row.dim_UJR, "independent path: bigraded piece of Q[a,x]/(dF/dx_i)")},
            criterion,
        ))
        if row.closed_form is not None:
            checks.append(Check(
                f"characteristic module, k={row.k}: curve closed form",
                verdict(row.dim_C == row.closed_form == row.dim_UJR),
                {**inputs, "k": row.k},
                {"dim_C": row.dim_C, "dim_UJR": row.dim_UJR},
                {"dim": Expected(row.closed_form, "closed form binom(k+d-2,d-2)(k(d+2)-1), normal bundle O(d+2)^(d-1)")},
                criterion,
            ))
    checks.append(Check(
        "characteristic module: observed agreement onset",
        "info",
        inputs,
        {"onset": table.onset, "k_range": table.k_range},
        {},
        criterion,
    ))
    return checks


def goodness_checks(spec: ProblemSpec, k_max: int, criterion: int | None = None) -> list[Check]:
    out = []
    for k in range(1, k_max + 1):
        if k * spec.d - spec.n - 1 < 0:
            continue
        ok = goodness_surjectivity(spec, k)
        out.append(Check(
            f"goodness: S_d x S_(kd-n-1) onto, k={k}",
            verdict(ok),
            {"n": spec.n, "d": spec.d, "k": k},
            {"surjective": ok},
            {"surjective": Expected(True, "products of monomials span all monomials")},
            criterion,
        ))
    return out


def intermediate_checks(spec: ProblemSpec, k_max: int, criterion: int | None = None) -> list[Check]:
    out = []
    for k in range(1, k_max + 1):
        for i in range(-spec.n, 0):
            got = intermediate_cohomology(spec, k, i)
            exp = expected_intermediate_cohomology(spec, k, i)
            out.append(Check(
                f"complex E_k cohomology, k={k}, i={i}",
                verdict(got == exp),
                {"n": spec.n, "d": spec.d, "k": k, "i": i},
                {"dim": got, "bookkeeping": hodge_bookkeeping(spec.n, k, i)},
                {"dim": Expected(exp, "Hodge filtration of P^n (classes of type (j,j)) times h^0(O_P)=1")},
                criterion,
            ))
    return out


def lowest_level_checks(spec: ProblemSpec, criterion: int | None = None) -> list[Check]:
    got = fkM_sections_dim(spec, 1)
    closed = comb(spec.d - 1, spec.n) * comb(spec.n + spec.d, spec.n)
    n0 = n0_sections_dim(spec, 1)
    return [Check(
        "lowest filtration level: sections of F_1 M",
        verdict(got == closed == f1M_rank(spec) * spec.dim_V and n0 == got),
        {"n": spec.n, "d": spec.d},
        {"fkM_sections_dim": got, "n0_sections_dim": n0, "f1M_rank": f1M_rank(spec)},
        {"fkM_sections_dim": Expected(closed, "closed form binom(d-1,n) binom(n+d,n)")},
        criterion,
        note=f"convention: {FILTRATION_CONVENTION['index']}; {FILTRATION_CONVENTION['hodge_module_shift']}",
    )]


def aux_growth_checks(spec: ProblemSpec, k_max: int, criterion: int | None = None) -> list[Check]:
    out = []
    for k in range(1, k_max + 1):
        got, exp = aux_char_piece(spec, k)
        out.append(Check(
            f"auxiliary module growth, k={k}",
            verdict(got == exp),
            {"n": spec.n, "d": spec.d, "k": k},
            {"dim": got},
            {"dim": Expected(exp, "multiplication by F injective: dim W_k^n - dim W_(k-1)^n")},
            criterion,
        ))
    return out


def w_dimension_checks(spec: ProblemSpec, k_max: int, criterion: int | None = None) -> list[Check]:
    bad = []
    for k in range(0, k_max + 1):
        for p in range(spec.n + 1):
            if w_space(spec, k, p).dim != expected_w_dim(spec, k, p):
                bad.append((k, p))
    return [Check(
        "section spaces W_k^p have the Bott dimension",
        verdict(not bad),
        {"n": spec.n, "d": spec.d, "k_max": k_max},
        {"mismatches": bad},
        {"mismatches": Expected([], "Bott formula times dim Q[a]_k")},
        criterion,
    )]


# ---------------------------------------------------------------------------
# randomized calculus invariants
# ---------------------------------------------------------------------------


def _random_sparse(rng: random.Random, dim: int, size: int = 4) -> dict[int, int]:
    v = {rng.randrange(dim): rng.randint(-5, 5) for _ in range(size)}
    return {k: c for k, c in v.items() if c} or {rng.randrange(dim): 1}


D2_GRID = [ProblemSpec(2, d) for d in (2, 3, 4)] + [ProblemSpec(3, 2), ProblemSpec(3, 3)]


def d_squared_trials(rng: random.Random, trials: int, grid=None) -> list[tuple]:
    """Failures of ``d o d = 0`` on random vectors of ``W_k^p``."""
    grid = grid or D2_GRID
    failures = []
    for _ in range(trials):
        spec = rng.choice(grid)
        p = rng.randint(0, spec.n - 2)
        k = rng.randint(1, 2)
        W = w_space(spec, k, p)
        v = _random_sparse(rng, W.dim)
        if apply_rel_differential(spec, k + 1, p + 1, apply_rel_differential(spec, k, p, v)):
            failures.append((spec.n, spec.d, k, p, v))
    return failures


def d_squared_exhaustive(spec: ProblemSpec, k: int, p: int) -> bool:
    """``d o d`` kills every basis vector of ``W_k^p``."""
    W = w_space(spec, k, p)
    return all(
        not apply_rel_differential(spec, k + 1, p + 1, apply_rel_differential(spec, k, p, {i: 1}))
        for i in range(W.dim)
    )


def _random_poly(rng: random.Random, n_vars: int, d: int) -> HomogPoly:
    while True:
        coeffs = {m: rng.randint(-3, 3) for m in monomial_basis(n_vars, d)}
        coeffs = {m: c for m, c in coeffs.items() if c}
        if coeffs:
            return HomogPoly(n_vars, d, coeffs)


def _random_combination(rng: random.Random, forms):
    out = None
    for w in rng.sample(forms, min(3, len(forms))):
        term = w.scale(rng.randint(1, 4) * rng.choice((-1, 1)))
        out = term if out is None else out + term
    return out


def descent_trials(rng: random.Random, trials: int) -> list[tuple]:
    """Failures of: ``exterior_d`` keeps numerators killed by the Euler field, and ``d o d = 0``."""
    failures = []
    for t in range(trials):
        n = rng.randint(1, 3)
        d = rng.randint(2, 4 if n < 3 else 3)
        p = rng.randint(0, n - 1)
        k = rng.randint(1, 2)
        forms = twisted_form_basis(n, p, k * d).forms()
        if not forms:
            continue
        if t % 2 == 0:
            f = _random_poly(rng, n + 1, d)
            rep = RationalFormRep(_random_combination(rng, forms), k, f)
        else:
            spec = ProblemSpec(n, d)
            alphas = a_monomials(spec.dim_V, k)
            num = {rng.choice(alphas): _random_combination(rng, forms) for _ in range(2)}
            rep = RationalFormRep(num, k, universal_form(spec))
        once = exterior_d(rep)
        ok = once.numerator_descends()
        if p + 1 < n:
            ok = ok and exterior_d(once).numerator_is_zero()
        if not ok:
            failures.append((n, d, p, k, rep.universal))
    return failures


# ---------------------------------------------------------------------------
# strata
# ---------------------------------------------------------------------------


def _strata_check(spec: ProblemSpec, mode: str, value: int, trials: int, seed: int, criterion) -> Check:
    rep = stratum_codim_estimate(spec, mode, value, trials, seed)
    return Check(
        f"stratum codimension, mode {mode}={value}",
        verdict(rep.passed and rep.observed_codim <= rep.naive_count <= rep.dim_P),
        {"n": spec.n, "d": spec.d, "mode": mode, "value": value, "trials": trials, "seed": seed},
        {"observed_codim": rep.observed_codim, "ranks": rep.ranks, "points": rep.points,
         "naive_count": rep.naive_count},
        {"observed_codim": Expected(f">= {rep.bound}", "lower bound on the codimension of the stratum")},
        criterion,
        note="rank varies across trials" if rep.seed_sensitive else "",
    )


def strata_checks(spec: ProblemSpec, trials: int, seed: int, criterion: int | None = None) -> list[Check]:
    out = [_strata_check(spec, "N", N, trials, seed, criterion) for N in (1, 2)]
    out += [_strata_check(spec, "r", r, trials, seed, criterion) for r in (2, 3)]
    return out


def fiber_checks(f: HomogPoly, k_max: int, seed: int, criterion: int | None = None,
                 expected_tau: int | None = None) -> list[Check]:
    inputs = {"poly": str(f)}
    try:
        results = [fiber_surjectivity(f, k, seed) for k in range(1, k_max + 1) if k * f.degree - f.n_vars >= 0]
    except NonIsolatedError as exc:
        return [Check("fiber surjectivity", "fail", inputs, {"error": str(exc)}, {}, criterion)]
    out = []
    for k, res in enumerate(results, start=1):
        expected = {"image_dim": Expected(res.tau, "Tjurina number from the stabilized Jacobian quotient")}
        if expected_tau is not None:
            expected["tau"] = Expected(expected_tau, "local singularity type of the fixture")
        ok = res.surjective and (expected_tau is None or res.tau == expected_tau)
        out.append(Check(
            f"restriction to the singular scheme, k={k}",
            verdict(ok),
            {**inputs, "k": k},
            {"tau": res.tau, "image_dim": res.image_dim, "multiplier": res.multiplier},
            expected,
            criterion,
        ))
    return out


# ---------------------------------------------------------------------------
# the default acceptance grid
# ---------------------------------------------------------------------------


def criterion_1() -> list[Check]:
    out = []
    for text, exp in ((FERMAT_CUBIC, (1, 1)), (FERMAT_QUARTIC, (3, 3)), (FERMAT_QUINTIC, (6, 6))):
        f = parse_poly(text)
        rep = vanishing_hodge_numbers(f)
        g = _genus(f.degree)
        out.append(Check(
            f"plane curve of degree {f.degree}: graded vanishing Hodge numbers",
            verdict(rep.graded_dims == exp and rep.total == 2 * g),
            {"poly": text},
            {"graded_dims": rep.graded_dims, "total": rep.total},
            {"graded_dims": Expected(exp, "(g, g) with g = (d-1)(d-2)/2"),
             "total": Expected(2 * g, "genus formula (d-1)(d-2)/2")},
            1,
        ))
    return out


def criterion_2() -> list[Check]:
    out = []
    for text in SMOOTH_FIXTURES:
        rep = vanishing_hodge_numbers(parse_poly(text))
        out.append(Check(
            "forms vs Jacobian ring",
            verdict(rep.consistent),
            {"poly": text},
            {"graded_dims": rep.graded_dims},
            {"graded_dims": Expected(rep.jacobian_dims, "independent path: graded pieces of S/J(f)")},
            2,
        ))
    return out


def criterion_3() -> list[Check]:
    rep = vanishing_hodge_numbers(parse_poly(K3_QUARTIC))
    return [Check(
        "quartic surface",
        verdict(rep.graded_dims == (1, 19, 1) and rep.total == 21),
        {"poly": K3_QUARTIC},
        {"graded_dims": rep.graded_dims, "total": rep.total},
        {"graded_dims": Expected((1, 19, 1), "Hodge diamond of a K3 surface minus the hyperplane class"),
         "total": Expected(21, "b_2 = 22 minus one")},
        3,
    )]


def criterion_4() -> list[Check]:
    out = []
    for spec, k_max in ((ProblemSpec(1, 2), 4), (ProblemSpec(1, 3), 4), (ProblemSpec(2, 3), 3), (ProblemSpec(2, 4), 3)):
        out += charmod_checks(spec, k_max, 4)
    return out


def criterion_5() -> list[Check]:
    out = []
    for n in (1, 2, 3):
        for d in (2, 3, 4):
            out += goodness_checks(ProblemSpec(n, d), 4, 5)
    return out


def criterion_6() -> list[Check]:
    return intermediate_checks(ProblemSpec(2, 3), 4, 6) + intermediate_checks(ProblemSpec(2, 4), 4, 6)


def criterion_7() -> list[Check]:
    out = []
    for n in (1, 2, 3):
        for d in (2, 3, 4):
            out += lowest_level_checks(ProblemSpec(n, d), 7)
    return out


def criterion_8(seed: int = 0, trials: int = 100) -> list[Check]:
    rng = random.Random(seed)
    exhaustive = [(s.n, s.d) for s in D2_GRID[:4] if not d_squared_exhaustive(s, 1, 0)]
    d2 = d_squared_trials(rng, trials)
    desc = descent_trials(rng, trials)
    return [
        Check("d o d = 0 on every basis vector of W_1^0", verdict(not exhaustive),
              {"grid": [(s.n, s.d) for s in D2_GRID[:4]]}, {"failures": exhaustive},
              {"failures": Expected([], "d^2 = 0")}, 8),
        Check("d o d = 0 on random vectors", verdict(not d2), {"trials": trials, "seed": seed},
              {"failures": d2}, {"failures": Expected([], "d^2 = 0")}, 8),
        Check("exterior derivative keeps the Euler contraction zero", verdict(not desc),
              {"trials": trials, "seed": seed}, {"failures": desc},
              {"failures": Expected([], "contraction with the Euler field of f d(eta) - k df ^ eta vanishes")}, 8),
    ]


def criterion_9() -> list[Check]:
    bad = []
    for n in (1, 2, 3):
        for p in range(n + 1):
            for m in range(-2, 9):
                if twisted_form_basis(n, p, m).dim != bott_h(n, p, 0, m):
                    bad.append((n, p, m))
    return [Check("twisted forms vs Bott formula", verdict(not bad), {"n": "1..3", "m": "-2..8"},
                  {"mismatches": bad}, {"mismatches": Expected([], "Bott formula")}, 9)]


def criterion_10(trials: int = 5, seed: int = 0) -> list[Check]:
    out = [
        _strata_check(ProblemSpec(2, 4), "N", 1, trials, seed, 10),
        _strata_check(ProblemSpec(2, 4), "N", 2, trials, seed, 10),
        _strata_check(ProblemSpec(2, 5), "r", 3, trials, seed, 10),
    ]
    pts = tuple(random_points(2, 3, random.Random(seed)))
    generic = JetSpec(2, 4, 1, pts)
    ok = jet_separation_check(generic)
    out.append(Check("first-order jets at 3 general points, quartics", verdict(ok),
                     {"points": pts, "seed": seed}, {"rank": jet_rank(generic)},
                     {"separates": Expected(True, "9 conditions on a 15-dimensional space")}, 10))
    collinear = JetSpec(2, 2, 1, COLLINEAR_POINTS)
    ok = jet_separation_check(collinear)
    out.append(Check("first-order jets at 3 collinear points, conics", verdict(not ok),
                     {"points": COLLINEAR_POINTS}, {"rank": jet_rank(collinear)},
                     {"separates": Expected(False, "a conic singular at 3 collinear points contains the line doubly")}, 10))
    return out


def criterion_11(seed: int = 0) -> list[Check]:
    out = []
    out += fiber_checks(parse_poly(NODAL_CUBIC), 1, seed, 11, expected_tau=1)
    out += fiber_checks(parse_poly(NODAL_QUARTIC), 1, seed, 11, expected_tau=1)
    tau = tjurina_stabilization(parse_poly(CUSPIDAL_CUBIC)).tau
    out.append(Check("cuspidal cubic Tjurina number", verdict(tau == 2), {"poly": CUSPIDAL_CUBIC},
                     {"tau": tau}, {"tau": Expected(2, "local normal form y^2 - x^3")}, 11))
    three = fiber_checks(parse_poly(THREE_NODAL_QUARTIC), 1, seed, None, expected_tau=3)
    for c in three:
        c.name = "three-nodal quartic: " + c.name
    return out + three


CRITERIA = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5, 6: criterion_6,
    7: criterion_7, 8: criterion_8, 9: criterion_9, 10: criterion_10, 11: criterion_11,
}


def default_suite(seed: int = 0, trials: int = 5) -> list[Check]:
    out = []
    for num, fn in CRITERIA.items():
        if num == 8:
            out += fn(seed)
        elif num == 10:
            out += fn(trials, seed)
        elif num == 11:
            out += fn(seed)
        else:
            out += fn()
    return out


def family_suite(spec: ProblemSpec, k_max: int, seed: int = 0, trials: int = 5) -> list[Check]:
    """Everything that makes sense for one family ``(n, d)`` up to ``k_max``."""
    out = []
    f = fermat(spec)
    try:
        out += hodge_checks(f)
    except NonSmoothError as exc:  # pragma: no cover - Fermat is smooth
        out.append(Check("smoothness", "fail", {"poly": str(f)}, {"error": str(exc)}, {}))
    out += w_dimension_checks(spec, k_max)
    out += charmod_checks(spec, k_max)
    out += lowest_level_checks(spec)
    out += goodness_checks(spec, k_max)
    out += intermediate_checks(spec, k_max)
    out += aux_growth_checks(spec, k_max)
    if spec.n >= 2:
        d2 = d_squared_trials(random.Random(seed), 20, [spec])
        out.append(Check("d o d = 0 on random vectors", verdict(not d2), {"trials": 20, "seed": seed},
                         {"failures": d2}, {"failures": Expected([], "d^2 = 0")}))
    out.append(_strata_check(spec, "N", 1, trials, seed, None))
    for k in range(1, k_max + 1):
        out.append(Check(f"fiber of the characteristic module at the Fermat point, k={k}", "info",
                         {"poly": str(f), "k": k}, {"dim": fiber_charmodule_dim(spec, f, k)}, {}))
    return out


def universal_checks(spec: ProblemSpec, k_max: int, seed: int = 0) -> list[Check]:
    out = w_dimension_checks(spec, k_max) + lowest_level_checks(spec)
    for k in range(1, k_max + 1):
        out.append(Check(f"sections of F_k N^0 and F_k M, k={k}", "info", {"n": spec.n, "d": spec.d, "k": k},
                         {"n0_sections_dim": n0_sections_dim(spec, k), "fkM_sections_dim": fkM_sections_dim(spec, k)},
                         {}))
    out += goodness_checks(spec, k_max) + intermediate_checks(spec, k_max) + aux_growth_checks(spec, k_max)
    return out


def workload(spec: ProblemSpec, k_max: int) -> int:
    """Largest number of vectors fed to one rank computation by the family suite."""
    return max(
        (expected_w_dim(spec, k, p) for k in range(k_max) for p in range(spec.n + 1)),
        default=0,
    )

