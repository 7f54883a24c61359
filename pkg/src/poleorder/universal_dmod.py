"""Graded global sections of the filtered D-modules over the space of all hypersurfaces.

Notation: ``spec = (n, d)``; ``V = S_d`` with dual coordinates ``a_J``;
``F = sum_J a_J x^J`` is the universal form.  The section spaces are

    W_k^p = H^0(P^n, Omega^p(k d)) (x) Q[a]_k      (zero for k <= 0)

and the relative differential ``eta / F^k -> (F d eta - k dF ^ eta) / F^(k+1)``
maps ``W_k^p`` to ``W_{k+1}^{p+1}`` (``d`` acts on ``x`` only).

A basis element of ``W_k^p`` is a pair (form index ``j`` in
``twisted_form_basis(n, p, k d)``, ``a``-monomial position); its integer
label is ``j * len(a_monomials) + a_position``.

The characteristic module is computed twice: as ``W_k^n / (d W_{k-1}^{n-1} +
F W_{k-1}^n)`` from the form calculus, and as the bigraded piece of
``Q[a, x] / (dF/dx_0, ..., dF/dx_n)`` from the polynomial ring alone.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import comb

from .exact_core import ExactMatrix, sparse_rank
from .forms import (
    TwistedFormBasis,
    cone_d,
    differential,
    poly_times,
    twisted_form_basis,
    wedge,
    bott_h,
)
from .griffiths import primitive_correction
from .polyring import (
    HomogPoly,
    ProblemSpec,
    a_monomials,
    a_times,
    add_exp,
    monomial_basis,
    monomial_index,
    quotient_ring_dim,
    universal_form,
)


# ---------------------------------------------------------------------------
# section spaces
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WSpace:
    spec: ProblemSpec
    k: int
    p: int
    forms: TwistedFormBasis | None
    a_basis: tuple[tuple[int, ...], ...]

    @property
    def dim(self) -> int:
        if self.forms is None:
            return 0
        return self.forms.dim * len(self.a_basis)

    def label(self, j: int, a_pos: int) -> int:
        return j * len(self.a_basis) + a_pos


@lru_cache(maxsize=None)
def w_space(spec: ProblemSpec, k: int, p: int) -> WSpace:
    if k <= 0 or not 0 <= p <= spec.n:
        return WSpace(spec, k, p, None, ())
    return WSpace(spec, k, p, twisted_form_basis(spec.n, p, k * spec.d), a_monomials(spec.dim_V, k))


def expected_w_dim(spec: ProblemSpec, k: int, p: int) -> int:
    if k <= 0:
        return 0
    return bott_h(spec.n, p, 0, k * spec.d) * comb(k + spec.dim_V - 1, spec.dim_V - 1)


@lru_cache(maxsize=None)
def _a_shift_table(num_a: int, k: int) -> tuple[tuple[int, ...], ...]:
    """``table[pos][J]`` = position of ``a^alpha * a_J`` in degree ``k + 1``."""
    nxt = {m: i for i, m in enumerate(a_monomials(num_a, k + 1))}
    return tuple(tuple(nxt[a_times(alpha, j)] for j in range(num_a)) for alpha in a_monomials(num_a, k))


def _to_int(c):
    return c.numerator if c.denominator == 1 else c


def _shifted_columns(src: WSpace, tgt: WSpace, per_form: list[list[dict[int, object]]]) -> list[dict[int, object]]:
    """Assemble ``sum_J G_J(beta_j) (x) a^alpha a_J`` for every source pair ``(j, alpha)``.

    ``per_form[j][J]`` holds target-form coordinates of ``G_J(beta_j)``.
    """
    n_tgt = len(tgt.a_basis)
    table = _a_shift_table(src.spec.dim_V, src.k)
    cols = []
    for j in range(src.forms.dim):
        images = per_form[j]
        for a_pos in range(len(src.a_basis)):
            shifts = table[a_pos]
            col: dict[int, object] = {}
            for J, coords in enumerate(images):
                t = shifts[J]
                for jj, c in coords.items():
                    key = jj * n_tgt + t
                    col[key] = col.get(key, 0) + c
            cols.append({key: c for key, c in col.items() if c})
    return cols


def _x_monomials(spec: ProblemSpec) -> list[HomogPoly]:
    return [HomogPoly.monomial(m) for m in monomial_basis(spec.n_vars, spec.d)]


@lru_cache(maxsize=64)
def _rel_d_per_form(spec: ProblemSpec, k: int, p: int) -> tuple:
    """``[j][J]`` = target-form coordinates of ``x^J d(beta_j) - k d(x^J) ^ beta_j``."""
    src, tgt = w_space(spec, k, p), w_space(spec, k + 1, p + 1)
    monos = _x_monomials(spec)
    dmonos = [differential(m) for m in monos]
    per_form = []
    for beta in src.forms.forms():
        dbeta = cone_d(beta)
        row = []
        for xJ, dxJ in zip(monos, dmonos):
            g = poly_times(xJ, dbeta) - wedge(dxJ, beta).scale(k)
            row.append({jj: _to_int(c) for jj, c in tgt.forms.coords_of(g).items()})
        per_form.append(row)
    return tuple(per_form)


def rel_differential_columns(spec: ProblemSpec, k: int, p: int) -> list[dict[int, object]]:
    """Columns of ``d: W_k^p -> W_{k+1}^{p+1}`` as sparse dicts of target labels."""
    src, tgt = w_space(spec, k, p), w_space(spec, k + 1, p + 1)
    if src.dim == 0 or p + 1 > spec.n:
        return [{} for _ in range(src.dim)]
    return _shifted_columns(src, tgt, _rel_d_per_form(spec, k, p))


def apply_rel_differential(spec: ProblemSpec, k: int, p: int, vec: dict[int, object]) -> dict[int, object]:
    """Image of one sparse vector of ``W_k^p`` (labels as in :class:`WSpace`)."""
    src, tgt = w_space(spec, k, p), w_space(spec, k + 1, p + 1)
    if src.dim == 0 or p + 1 > spec.n:
        return {}
    per_form = _rel_d_per_form(spec, k, p)
    table = _a_shift_table(spec.dim_V, k)
    n_src, n_tgt = len(src.a_basis), len(tgt.a_basis)
    out: dict[int, object] = {}
    for label, v in vec.items():
        j, a_pos = divmod(label, n_src)
        shifts = table[a_pos]
        for J, coords in enumerate(per_form[j]):
            for jj, c in coords.items():
                key = jj * n_tgt + shifts[J]
                out[key] = out.get(key, 0) + v * c
    return {key: c for key, c in out.items() if c}


def f_multiplication_columns(spec: ProblemSpec, k: int) -> list[dict[int, object]]:
    """Columns of ``W_k^n -> W_{k+1}^n``, ``eta / F^k = F eta / F^(k+1)``."""
    src, tgt = w_space(spec, k, spec.n), w_space(spec, k + 1, spec.n)
    if src.dim == 0:
        return []
    monos = _x_monomials(spec)
    per_form = [
        [{jj: _to_int(c) for jj, c in tgt.forms.coords_of(poly_times(xJ, beta)).items()} for xJ in monos]
        for beta in src.forms.forms()
    ]
    return _shifted_columns(src, tgt, per_form)


def rel_differential_matrix(spec: ProblemSpec, k: int, p: int) -> ExactMatrix:
    tgt = w_space(spec, k + 1, p + 1)
    return ExactMatrix.from_columns(tgt.dim, rel_differential_columns(spec, k, p))


@lru_cache(maxsize=None)
def rel_differential_rank(spec: ProblemSpec, k: int, p: int) -> int:
    if k <= 0 or p < 0 or p >= spec.n:
        return 0
    return sparse_rank(rel_differential_columns(spec, k, p))


# ---------------------------------------------------------------------------
# section spaces of F_k N^0 and F_k M
# ---------------------------------------------------------------------------


def n0_sections_dim(spec: ProblemSpec, k: int) -> int:
    """``dim H^0(P, F_{k-n-1} N^0) = dim W_k^n / d W_{k-1}^{n-1}``."""
    if k < 1:
        raise ValueError("need k >= 1")
    return w_space(spec, k, spec.n).dim - rel_differential_rank(spec, k - 1, spec.n - 1)


def fkM_sections_dim(spec: ProblemSpec, k: int) -> int:
    """``dim H^0(P, F_k M)``: the quotient above, further divided by primitive classes.

    Indexing is that of ``F_k M`` (zero for ``k <= 0``); the Hodge-module
    filtration on the same object is ``F_k M_ev = F_{k+n} M``.
    """
    if k < 1:
        raise ValueError("need k >= 1")
    src = w_space(spec, k - 1, spec.n - 1)
    vecs = rel_differential_columns(spec, k - 1, spec.n - 1) if src.dim else []
    vecs = vecs + primitive_correction(spec.n, k)
    return w_space(spec, k, spec.n).dim - sparse_rank(vecs)


def f1M_rank(spec: ProblemSpec) -> int:
    """Rank of ``F_1 M``: ``h^0(Omega^n(d)) - h^0(Omega^n)``."""
    return bott_h(spec.n, spec.n, 0, spec.d) - bott_h(spec.n, spec.n, 0, 0)


FILTRATION_CONVENTION = {
    "index": "F_k M, with F_k M = 0 for k <= 0",
    "hodge_module_shift": "F_k M_ev = F_{k+n} M",
}


# ---------------------------------------------------------------------------
# characteristic module, two ways
# ---------------------------------------------------------------------------


def char_module_piece(spec: ProblemSpec, k: int) -> int:
    """``dim W_k^n / (d W_{k-1}^{n-1} + F W_{k-1}^n)``."""
    if k < 1:
        raise ValueError("need k >= 1")
    vecs = []
    if w_space(spec, k - 1, spec.n - 1).dim:
        vecs += rel_differential_columns(spec, k - 1, spec.n - 1)
    vecs += f_multiplication_columns(spec, k - 1)
    return w_space(spec, k, spec.n).dim - sparse_rank(vecs)


def universal_jacobian_piece(spec: ProblemSpec, k: int) -> int:
    """``dim (Q[a, x] / J(F))`` in bidegree ``(k, k d - n - 1)``, ``J(F) = (dF/dx_i)``."""
    if k < 1:
        raise ValueError("need k >= 1")
    xdeg = k * spec.d - spec.n - 1
    if xdeg < 0:
        return 0
    num_a = spec.dim_V
    a_target = {m: i for i, m in enumerate(a_monomials(num_a, k))}
    x_target = monomial_index(spec.n_vars, xdeg)
    n_x = len(x_target)
    ambient = len(a_target) * n_x
    F = universal_form(spec)
    x_cofactor = monomial_basis(spec.n_vars, xdeg - (spec.d - 1))
    vecs = []
    for i in range(spec.n_vars):
        dF = F.partial_x(i)
        for beta in a_monomials(num_a, k - 1):
            for c in x_cofactor:
                vec = {}
                for ((j,), e), coef in dF.coeffs.items():
                    key = a_target[a_times(beta, j)] * n_x + x_target[add_exp(c, e)]
                    vec[key] = vec.get(key, 0) + coef
                vecs.append(vec)
    return ambient - sparse_rank(vecs)


def char_closed_form_curve(spec: ProblemSpec, k: int) -> int | None:
    """``n = 1`` only: ``binom(k+d-2, d-2) (k(d+2) - 1)``."""
    if spec.n != 1:
        return None
    d = spec.d
    return comb(k + d - 2, d - 2) * (k * (d + 2) - 1)


@dataclass(frozen=True)
class CharModuleRow:
    k: int
    dim_C: int
    dim_UJR: int
    closed_form: int | None

    @property
    def agree(self) -> bool:
        return self.dim_C == self.dim_UJR


@dataclass(frozen=True)
class CharModuleTable:
    spec: ProblemSpec
    rows: tuple[CharModuleRow, ...] = field(default_factory=tuple)

    @property
    def k_range(self) -> tuple[int, ...]:
        return tuple(r.k for r in self.rows)

    @property
    def all_agree(self) -> bool:
        return all(r.agree for r in self.rows)

    @property
    def onset(self) -> int | None:
        """Smallest ``k0`` in range with agreement at every ``k >= k0`` of the range."""
        k0 = None
        for r in reversed(self.rows):
            if not r.agree:
                break
            k0 = r.k
        return k0

    @property
    def closed_form_matches(self) -> bool | None:
        if self.spec.n != 1:
            return None
        return all(r.dim_C == r.closed_form == r.dim_UJR for r in self.rows)


def theoremB_check(spec: ProblemSpec, k_range) -> CharModuleTable:
    rows = []
    for k in k_range:
        if k < 1:
            raise ValueError("need k >= 1 throughout the range")
        rows.append(
            CharModuleRow(k, char_module_piece(spec, k), universal_jacobian_piece(spec, k), char_closed_form_curve(spec, k))
        )
    return CharModuleTable(spec, tuple(rows))


def aux_char_piece(spec: ProblemSpec, k: int) -> tuple[int, int]:
    """``(computed, expected)`` for ``dim W_k^n / F W_{k-1}^n``.

    The expected value ``dim W_k^n - dim W_{k-1}^n`` is the Hilbert function
    of the pull-back of ``Omega^n`` to the universal hypersurface; equality
    says multiplication by ``F`` is injective.
    """
    top = w_space(spec, k, spec.n).dim
    lower = w_space(spec, k - 1, spec.n).dim
    computed = top - sparse_rank(f_multiplication_columns(spec, k - 1))
    return computed, top - lower


def goodness_surjectivity(spec: ProblemSpec, k: int) -> bool:
    """Is ``S_d (x) S_{kd-n-1} -> S_{(k+1)d-n-1}`` onto?"""
    n_vars = spec.n_vars
    src_deg = k * spec.d - spec.n - 1
    tgt_deg = src_deg + spec.d
    target = monomial_index(n_vars, tgt_deg) if tgt_deg >= 0 else {}
    vecs = [
        {target[add_exp(m1, m2)]: 1}
        for m1 in monomial_basis(n_vars, spec.d)
        for m2 in monomial_basis(n_vars, src_deg)
    ]
    return sparse_rank(vecs) == len(target)


# ---------------------------------------------------------------------------
# the complex E_k: terms W_{k+i}^{n+i} in positions i = -n..0
# ---------------------------------------------------------------------------


def _hodge_filtration_dim_pn(n: int, s: int, degree: int) -> int:
    """``dim F^s H^degree(P^n)``; all classes have type ``(j, j)``."""
    if degree < 0 or degree > 2 * n or degree % 2:
        return 0
    return 1 if degree // 2 >= s else 0


def hodge_bookkeeping(n: int, k: int, i: int) -> int:
    """``dim F^{n+1-k} H^{n+i}(P^n) / F^{n-k} H^{n+i-2}(P^n)`` (quotient by the Lefschetz image)."""
    return _hodge_filtration_dim_pn(n, n + 1 - k, n + i) - _hodge_filtration_dim_pn(n, n - k, n + i - 2)


def expected_intermediate_cohomology(spec: ProblemSpec, k: int, i: int) -> int:
    """Global sections of ``(that quotient) (x) O_P``; ``h^0(P, O_P) = 1``."""
    return hodge_bookkeeping(spec.n, k, i) * bott_h(spec.dim_P, 0, 0, 0)


def intermediate_cohomology(spec: ProblemSpec, k: int, i: int) -> int:
    """Cohomology at position ``i`` of ``W_{k-n}^0 -> ... -> W_k^n``."""
    n = spec.n
    if not -n <= i <= -1:
        raise ValueError(f"position {i} outside -{n}..-1")
    here = w_space(spec, k + i, n + i).dim
    outgoing = rel_differential_rank(spec, k + i, n + i)
    incoming = rel_differential_rank(spec, k + i - 1, n + i - 1) if n + i - 1 >= 0 else 0
    return here - outgoing - incoming


# ---------------------------------------------------------------------------
# specialization to one hypersurface
# ---------------------------------------------------------------------------


def fiber_charmodule_dim(spec: ProblemSpec, f: HomogPoly, k: int) -> int:
    """Fiber of the characteristic module at the point ``[f]``: ``dim (S/J(f))_{kd-n-1}``."""
    if (f.n_vars, f.degree) != (spec.n_vars, spec.d):
        raise ValueError("polynomial does not belong to this family")
    if k < 1:
        raise ValueError("need k >= 1")
    return quotient_ring_dim(f, k * spec.d - spec.n - 1)


def a_coordinates(f: HomogPoly) -> list:
    """The point of ``V`` (coefficient vector in the ``a_J`` order) for ``f``."""
    return f.coefficient_vector()
