"""Pole-order computations for a single smooth hypersurface ``D = {f = 0}`` in ``P^n``.

Two independent routes to the Hodge numbers of the vanishing cohomology of
``D``: quotients of rational ``n``-forms by exact forms and by forms of lower
pole order (this module), and graded pieces of the Jacobian ring
``S / J(f)`` (:mod:`poleorder.polyring`).
"""

from __future__ import annotations

from dataclasses import dataclass

from .exact_core import ExactMatrix, sparse_rank
from .forms import (
    TwistedFormBasis,
    check_ampleness_condition,
    cone_d,
    differential,
    poly_times,
    twisted_form_basis,
    wedge,
)
from .polyring import HomogPoly, ProblemSpec, is_smooth, quotient_ring_dim


class NonSmoothError(ValueError):
    pass


def _require_smooth(f: HomogPoly):
    if not is_smooth(f):
        raise NonSmoothError("pole-order formula requires smooth divisor")


def pole_order_images(f: HomogPoly, q: int, j: int) -> list:
    """``f d(eta) - j df ^ eta`` for ``eta`` running over ``H^0(Omega^q(j D))``.

    These are the numerators of ``d(eta / f^j)`` over ``f^(j+1)``.
    """
    n = f.n_vars - 1
    if j < 0 or q > n:
        return []
    df = differential(f)
    out = []
    for eta in twisted_form_basis(n, q, j * f.degree).forms():
        out.append(poly_times(f, cone_d(eta)) - wedge(df, eta).scale(j))
    return out


def pole_differential(f: HomogPoly, q: int, j: int) -> ExactMatrix:
    """Matrix of ``d: H^0(Omega^q(jD)) -> H^0(Omega^{q+1}((j+1)D))`` in form bases."""
    n = f.n_vars - 1
    src = twisted_form_basis(n, q, j * f.degree)
    tgt = twisted_form_basis(n, q + 1, (j + 1) * f.degree) if q < n else None
    if tgt is None:
        return ExactMatrix(0, src.dim)
    cols = [tgt.coords_of(w) for w in pole_order_images(f, q, j)]
    return ExactMatrix.from_columns(tgt.dim, cols)


@dataclass(frozen=True)
class PoleComplex:
    """``H^0(Omega^p(D)) -> H^0(Omega^{p+1}(2D)) -> ... -> H^0(Omega^n((n-p+1)D))``.

    The term ``Omega^q((q-p+1)D)`` sits in degree ``q``.
    """

    f: HomogPoly
    p: int
    terms: tuple[TwistedFormBasis, ...]
    differentials: tuple[ExactMatrix, ...]

    @property
    def n(self) -> int:
        return self.f.n_vars - 1

    def composites_vanish(self) -> bool:
        return all((b @ a).is_zero() for a, b in zip(self.differentials, self.differentials[1:]))

    def cohomology(self) -> list[int]:
        """Dimension of the cohomology in each degree ``0..n``."""
        ranks = [sparse_rank(m.column_vectors()) for m in self.differentials]
        out = [0] * (self.n + 1)
        for t, term in enumerate(self.terms):
            q = self.p + t
            incoming = ranks[t - 1] if t > 0 else 0
            outgoing = ranks[t] if t < len(ranks) else 0
            out[q] = term.dim - outgoing - incoming
        return out


def build_pole_complex(f: HomogPoly, p: int) -> PoleComplex:
    n = f.n_vars - 1
    if not 0 <= p <= n:
        raise ValueError(f"filtration level {p} out of range for P^{n}")
    terms = tuple(twisted_form_basis(n, q, (q - p + 1) * f.degree) for q in range(p, n + 1))
    diffs = tuple(pole_differential(f, q, q - p + 1) for q in range(p, n))
    return PoleComplex(f, p, terms, diffs)


def pole_complex_cohomology(f: HomogPoly, p: int) -> list[int]:
    """``result[k] = dim F^p H^k(P^n \\ D)`` for ``k = 0..n``."""
    _require_smooth(f)
    spec = ProblemSpec(f.n_vars - 1, f.degree)
    if not check_ampleness_condition(spec, spec.n + 1):
        raise ArithmeticError("Bott vanishing failed on projective space")
    return build_pole_complex(f, p).cohomology()


def primitive_correction(n: int, k: int) -> list:
    """Vectors spanning ``F^{n+1-k} H^n_0`` inside ``H^0(Omega^n(kD))``.

    The primitive middle cohomology of ``P^n`` is zero, so this is always the
    empty list.  It is kept as an explicit term of the subspace being divided
    out so that the quotient formula has the same shape as for a general base.
    """
    return []


@dataclass(frozen=True)
class HodgeReport:
    f: HomogPoly
    smooth: bool
    graded_dims: tuple[int, ...]
    filtration_dims: tuple[int, ...]
    jacobian_dims: tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.graded_dims)

    @property
    def consistent(self) -> bool:
        return self.graded_dims == self.jacobian_dims


def _top_space_quotient(f: HomogPoly, k: int, with_lower_pole: bool) -> int:
    n = f.n_vars - 1
    top = twisted_form_basis(n, n, k * f.degree)
    vecs = [top.coords_of(w) for w in pole_order_images(f, n - 1, k - 1)]
    vecs += primitive_correction(n, k)
    if with_lower_pole and k >= 1:
        lower = twisted_form_basis(n, n, (k - 1) * f.degree)
        vecs += [top.coords_of(poly_times(f, w)) for w in lower.forms()]
    return top.dim - sparse_rank(vecs)


def vanishing_hodge_numbers(f: HomogPoly) -> HodgeReport:
    """Graded pieces ``Gr_F^{n-k}`` of the vanishing cohomology, ``k = 1..n``.

    ``filtration_dims[k-1] = dim F^{n-k}`` is the pole-order quotient; the
    graded piece additionally divides out forms with a pole of order ``k-1``.
    """
    _require_smooth(f)
    n = f.n_vars - 1
    filt = tuple(_top_space_quotient(f, k, False) for k in range(1, n + 1))
    graded = tuple(_top_space_quotient(f, k, True) for k in range(1, n + 1))
    jac = tuple(quotient_ring_dim(f, k * f.degree - n - 1) for k in range(1, n + 1))
    return HodgeReport(f, True, graded, filt, jac)


def jacobian_ring_check(f: HomogPoly) -> bool:
    return vanishing_hodge_numbers(f).consistent
