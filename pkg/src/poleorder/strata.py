"""Jet conditions at points of P^n and the singular strata of the space of hypersurfaces.

Random points have small integer coordinates drawn from ``random.Random(seed)``
and are stored in every report so that a run can be replayed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .exact_core import ExactMatrix, sparse_rank
from .polyring import (
    HomogPoly,
    Isolation,
    ProblemSpec,
    ideal_vectors,
    jacobian_generators,
    linear_form,
    monomial_basis,
    monomial_index,
    multiply,
    power,
    tjurina_stabilization,
)

COORD_BOUND = 9


class NonIsolatedError(ValueError):
    pass


def _proportional(p, q) -> bool:
    return all(p[i] * q[j] == p[j] * q[i] for i in range(len(p)) for j in range(i + 1, len(p)))


@dataclass(frozen=True)
class JetSpec:
    n: int
    d: int
    r: int
    points: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if self.r < 0:
            raise ValueError("jet order must be >= 0")
        pts = tuple(tuple(Fraction(c) for c in p) for p in self.points)
        for p in pts:
            if len(p) != self.n + 1:
                raise ValueError(f"point {p} does not have {self.n + 1} coordinates")
            if not any(p):
                raise ValueError("the zero vector is not a point")
        for a in range(len(pts)):
            for b in range(a + 1, len(pts)):
                if _proportional(pts[a], pts[b]):
                    raise ValueError(f"coincident points {a} and {b}")
        object.__setattr__(self, "points", pts)

    @property
    def conditions_per_point(self) -> int:
        return comb(self.n + self.r, self.n)


def chart_of(point) -> int:
    """Index of the largest coordinate in absolute value (ties: smallest index)."""
    best = 0
    for i, c in enumerate(point):
        if abs(c) > abs(point[best]):
            best = i
    return best


def _falling(m: int, b: int) -> int:
    out = 1
    for t in range(b):
        out *= m - t
    return out


def _jet_rows(point, d: int, r: int) -> list[dict[int, Fraction]]:
    """Derivatives of order ``<= r`` of every degree-``d`` monomial, in the affine chart."""
    n_vars = len(point)
    c = chart_of(point)
    affine = [i for i in range(n_vars) if i != c]
    y = {i: point[i] / point[c] for i in affine}
    monos = monomial_basis(n_vars, d)
    rows = []
    for order in range(r + 1):
        # multi-indices over the affine variables: drop the chart exponent
        for beta_full in monomial_basis(len(affine), order):
            beta = dict(zip(affine, beta_full))
            row = {}
            for col, m in enumerate(monos):
                val = Fraction(1)
                for i in affine:
                    b = beta[i]
                    if m[i] < b:
                        val = 0
                        break
                    val *= _falling(m[i], b) * y[i] ** (m[i] - b)
                if val:
                    row[col] = val
            rows.append(row)
    return rows


def jet_matrix(spec: JetSpec) -> ExactMatrix:
    """Rows: jets at each point in turn; columns: monomials of degree ``d``."""
    rows = []
    for p in spec.points:
        rows += _jet_rows(p, spec.d, spec.r)
    return ExactMatrix(len(rows), len(monomial_basis(spec.n + 1, spec.d)), {
        (i, j): v for i, row in enumerate(rows) for j, v in row.items()
    })


def jet_rank(spec: JetSpec) -> int:
    return sparse_rank(jet_matrix(spec).row_vectors())


def jet_separation_check(spec: JetSpec) -> bool:
    return jet_rank(spec) == len(spec.points) * spec.conditions_per_point


def random_points(n: int, count: int, rng: random.Random, bound: int = COORD_BOUND) -> list[tuple[int, ...]]:
    """``count`` pairwise distinct points of ``P^n`` with coordinates in ``[-bound, bound]``."""
    pts: list[tuple[int, ...]] = []
    while len(pts) < count:
        p = tuple(rng.randint(-bound, bound) for _ in range(n + 1))
        if any(p) and not any(_proportional(p, q) for q in pts):
            pts.append(p)
    return pts


@dataclass(frozen=True)
class StrataReport:
    n: int
    d: int
    mode: str  # "N" (number of nodes) or "r" (multiplicity)
    value: int
    trials: int
    seed: int
    ranks: tuple[int, ...]
    points: tuple[tuple[tuple[int, ...], ...], ...]
    observed_codim: int
    bound: int
    naive_count: int
    dim_P: int
    seed_sensitive: bool = field(default=False)

    @property
    def passed(self) -> bool:
        return self.observed_codim >= self.bound


def stratum_codim_estimate(spec: ProblemSpec, mode: str, value: int, trials: int = 5, seed: int = 0) -> StrataReport:
    """Codimension estimate for hypersurfaces with ``N`` singular points (mode ``"N"``)
    or with a point of multiplicity ``>= r`` (mode ``"r"``).

    Each trial picks random points and takes the rank of the jet conditions;
    the dimension of the family of points (``N n`` or ``n``) is then subtracted.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    n, d = spec.n, spec.d
    if mode == "N":
        count, order, moduli = value, 1, value * n
    elif mode == "r":
        if value < 1:
            raise ValueError("multiplicity must be >= 1")
        count, order, moduli = 1, value - 1, n
    else:
        raise ValueError(f"unknown mode {mode!r}")
    rng = random.Random(seed)
    ranks, pts_used = [], []
    for _ in range(trials):
        pts = random_points(n, count, rng)
        ranks.append(jet_rank(JetSpec(n, d, order, tuple(pts))))
        pts_used.append(tuple(pts))
    naive = count * comb(n + order, n) - moduli
    observed = min(ranks) - moduli
    bound = value if mode == "N" else value - 1
    return StrataReport(
        n, d, mode, value, trials, seed, tuple(ranks), tuple(pts_used), observed, bound, naive,
        spec.dim_P, seed_sensitive=len(set(ranks)) > 1,
    )


# ---------------------------------------------------------------------------
# restriction to the singular scheme
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FiberSurjectivity:
    tau: int
    image_dim: int
    source_degree: int
    stable_degree: int
    multiplier: tuple  # coefficients of the linear form used

    @property
    def surjective(self) -> bool:
        return self.image_dim == self.tau


def _ell_candidates(n_vars: int, seed: int):
    yield tuple([1] * n_vars)
    rng = random.Random(seed)
    while True:
        yield tuple(rng.randint(-COORD_BOUND, COORD_BOUND) for _ in range(n_vars))


def _image_rank(jac_vecs, ell_power: HomogPoly, src_degree: int, tgt_degree: int) -> int:
    idx = monomial_index(ell_power.n_vars, tgt_degree)
    vecs = list(jac_vecs)
    for m in monomial_basis(ell_power.n_vars, src_degree):
        prod = multiply(HomogPoly.monomial(m), ell_power)
        vecs.append({idx[e]: c for e, c in prod.coeffs.items()})
    return sparse_rank(vecs)


def fiber_surjectivity(f: HomogPoly, k: int, seed: int = 0) -> FiberSurjectivity:
    """Image of ``S_{kd-n-1}`` in the functions on the singular scheme of ``f``.

    In degrees past the stabilization onset, ``(S/J)_e`` is the space of
    functions on the singular scheme.  A lower-degree piece is carried there
    by a power of a linear form ``l`` missing every singular point; ``l`` is
    accepted only after checking that multiplication by it is bijective on the
    stable pieces.
    """
    res = tjurina_stabilization(f)
    if res.tau is Isolation.NON_ISOLATED:
        raise NonIsolatedError("positive-dimensional singular locus")
    n = f.n_vars - 1
    e = k * f.degree - n - 1
    if e < 0:
        raise ValueError("source degree is negative")
    tau = res.tau
    stable = max(e, res.onset)
    gens = jacobian_generators(f).partials
    jac_here = ideal_vectors(gens, stable)
    jac_next = ideal_vectors(gens, stable + 1)
    base_here = sparse_rank(jac_here)
    base_next = sparse_rank(jac_next)
    for coeffs in _ell_candidates(f.n_vars, seed):
        if not any(coeffs):
            continue
        ell = linear_form(coeffs)
        if _image_rank(jac_next, ell, stable, stable + 1) - base_next != tau:
            continue
        t = stable - e
        image = _image_rank(jac_here, power(ell, t), e, stable) - base_here
        return FiberSurjectivity(tau, image, e, stable, coeffs)
    raise AssertionError("unreachable")


def fiber_surjectivity_check(f: HomogPoly, k: int, seed: int = 0) -> bool:
    return fiber_surjectivity(f, k, seed).surjective
