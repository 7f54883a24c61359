"""Twisted differential forms on ``P^n`` in the affine-cone model.

A global section of ``Omega^p(m)`` on ``P^n`` is a ``p``-form on ``C^{n+1}``
with homogeneous coefficients of degree ``m - p`` killed by contraction with
the Euler field ``E = sum x_i d/dx_i``.  A form is stored as a dict
``{(I, e): c}`` for the term ``c * x^e dx_I`` with ``I`` strictly increasing.

Forms with poles along a hypersurface are carried as a numerator and a pole
order (:class:`RationalFormRep`); numerators are never reduced against the
denominator.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Mapping, Union

from .exact_core import ExactMatrix, SubspaceBasis, as_rational, kernel_with_free_columns
from .polyring import (
    BigradedPoly,
    Exponent,
    HomogPoly,
    ProblemSpec,
    a_times,
    add_exp,
    monomial_basis,
)

Index = tuple[int, ...]
Key = tuple[Index, Exponent]


@dataclass(frozen=True)
class Form:
    """A ``p``-form on the cone with coefficients homogeneous of ``coef_degree``."""

    n_vars: int
    p: int
    coef_degree: int
    components: Mapping[Key, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (I, e), c in self.components.items():
            if len(I) != self.p or sum(e) != self.coef_degree:
                raise ValueError(f"term {(I, e)} does not fit a {self.p}-form of coefficient degree {self.coef_degree}")
            c = as_rational(c)
            if c:
                clean[(tuple(I), tuple(e))] = c
        object.__setattr__(self, "components", clean)

    @property
    def n(self) -> int:
        return self.n_vars - 1

    @property
    def twist(self) -> int:
        return self.coef_degree + self.p

    def is_zero(self) -> bool:
        return not self.components

    def _same_shape(self, other: "Form"):
        if (self.n_vars, self.p) != (other.n_vars, other.p):
            raise ValueError("forms of different shapes")
        if self.coef_degree != other.coef_degree and not (self.is_zero() or other.is_zero()):
            raise ValueError("forms of different coefficient degrees")

    def __add__(self, other: "Form") -> "Form":
        self._same_shape(other)
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        out = dict(self.components)
        for k, c in other.components.items():
            out[k] = out.get(k, 0) + c
        return Form(self.n_vars, self.p, self.coef_degree, out)

    def __neg__(self) -> "Form":
        return self.scale(-1)

    def __sub__(self, other: "Form") -> "Form":
        return self + (-other)

    def scale(self, c) -> "Form":
        c = as_rational(c)
        return Form(self.n_vars, self.p, self.coef_degree, {k: c * x for k, x in self.components.items()})

    def __eq__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        return (self.n_vars, self.p) == (other.n_vars, other.p) and self.components == other.components and (
            self.coef_degree == other.coef_degree or not self.components
        )

    def __hash__(self):
        return hash((self.n_vars, self.p, frozenset(self.components.items())))


def _insert_sign(j: int, I: Index) -> tuple[int, Index] | None:
    """``dx_j ^ dx_I = sign * dx_{I+j}``; ``None`` if ``j`` is already in ``I``."""
    if j in I:
        return None
    pos = sum(1 for i in I if i < j)
    return (-1) ** pos, I[:pos] + (j,) + I[pos:]


def _merge_sign(I: Index, K: Index) -> tuple[int, Index] | None:
    if set(I) & set(K):
        return None
    inversions = sum(1 for i in I for k in K if i > k)
    return (-1) ** inversions, tuple(sorted(I + K))


def function_form(f: HomogPoly) -> Form:
    return Form(f.n_vars, 0, f.degree, {((), e): c for e, c in f.coeffs.items()})


def differential(f: HomogPoly) -> Form:
    """``df`` as a 1-form."""
    return cone_d(function_form(f))


def cone_d(w: Form) -> Form:
    """Exterior derivative on the cone (no descent condition imposed)."""
    out: dict[Key, Fraction] = {}
    for (I, e), c in w.components.items():
        for j, k in enumerate(e):
            if not k:
                continue
            ins = _insert_sign(j, I)
            if ins is None:
                continue
            s, J = ins
            ne = e[:j] + (k - 1,) + e[j + 1 :]
            key = (J, ne)
            out[key] = out.get(key, 0) + s * k * c
    return Form(w.n_vars, w.p + 1, w.coef_degree - 1, out)


def wedge(a: Form, b: Form) -> Form:
    if a.n_vars != b.n_vars:
        raise ValueError("forms on different spaces")
    out: dict[Key, Fraction] = {}
    for (I, e), c in a.components.items():
        for (K, f), d in b.components.items():
            m = _merge_sign(I, K)
            if m is None:
                continue
            s, J = m
            key = (J, add_exp(e, f))
            out[key] = out.get(key, 0) + s * c * d
    return Form(a.n_vars, a.p + b.p, a.coef_degree + b.coef_degree, out)


def euler_contract(w: Form) -> Form:
    """``iota_E w``; zero for functions."""
    if w.p == 0:
        return Form(w.n_vars, 0, w.coef_degree + 1, {})
    out: dict[Key, Fraction] = {}
    for (I, e), c in w.components.items():
        for t, i in enumerate(I):
            ne = e[:i] + (e[i] + 1,) + e[i + 1 :]
            key = (I[:t] + I[t + 1 :], ne)
            out[key] = out.get(key, 0) + (-1) ** t * c
    return Form(w.n_vars, w.p - 1, w.coef_degree + 1, out)


def poly_times(f: HomogPoly, w: Form) -> Form:
    out: dict[Key, Fraction] = {}
    for m, c in f.coeffs.items():
        for (I, e), d in w.components.items():
            key = (I, add_exp(m, e))
            out[key] = out.get(key, 0) + c * d
    return Form(w.n_vars, w.p, w.coef_degree + f.degree, out)


def dx(n_vars: int, i: int) -> Form:
    return Form(n_vars, 1, 0, {((i,), (0,) * n_vars): 1})


class TwistedForm(Form):
    """A :class:`Form` satisfying ``iota_E = 0``: a section of ``Omega^p(twist)``."""

    def __post_init__(self):
        super().__post_init__()
        if self.p > 0 and not euler_contract(self).is_zero():
            raise ValueError("form does not descend to projective space (iota_E != 0)")

    @classmethod
    def of(cls, w: Form) -> "TwistedForm":
        return cls(w.n_vars, w.p, w.coef_degree, w.components)


def volume_form(n: int) -> TwistedForm:
    """``sum_i (-1)^i x_i dx_0 ^ .. ^ omit(i) ^ .. ^ dx_n``, twist ``n + 1``."""
    n_vars = n + 1
    comps = {}
    for i in range(n_vars):
        I = tuple(j for j in range(n_vars) if j != i)
        e = tuple(int(j == i) for j in range(n_vars))
        comps[(I, e)] = (-1) ** i
    return TwistedForm(n_vars, n, 1, comps)


def top_form(A: HomogPoly) -> TwistedForm:
    """``A * Omega``: a section of ``Omega^n(deg A + n + 1)``."""
    return TwistedForm.of(poly_times(A, volume_form(A.n_vars - 1)))


# ---------------------------------------------------------------------------
# bases of H^0(P^n, Omega^p(m))
# ---------------------------------------------------------------------------


def form_coordinates(n: int, p: int, coef_degree: int) -> tuple[Key, ...]:
    mons = monomial_basis(n + 1, coef_degree)
    return tuple((I, e) for I in combinations(range(n + 1), p) for e in mons)


@dataclass(frozen=True)
class TwistedFormBasis(SubspaceBasis):
    """Basis of ``H^0(P^n, Omega^p(m))`` inside the full coefficient space.

    Vector ``j`` is 1 at ambient coordinate ``free[j]`` and 0 at every other
    ``free`` coordinate, so coordinates of a member of the span are read off
    at the ``free`` positions.
    """

    n: int = 0
    p: int = 0
    m: int = 0
    keys: tuple[Key, ...] = ()
    free: tuple[int, ...] = ()

    @property
    def free_keys(self) -> tuple[Key, ...]:
        return tuple(self.keys[i] for i in self.free)

    def forms(self) -> list[TwistedForm]:
        return [
            TwistedForm(self.n + 1, self.p, self.m - self.p, {self.keys[i]: c for i, c in v.items()})
            for v in self.vectors
        ]

    def coords_of(self, w: Form, check: bool = False) -> dict[int, Fraction]:
        """Coordinates of ``w`` in this basis.

        The free-position lookup assumes ``w`` lies in the span; pass
        ``check=True`` to verify that first.
        """
        if check and not self.contains(w):
            raise ValueError("form is not a section of this twisted bundle")
        pos = _free_lookup(self.n, self.p, self.m)
        out = {}
        for key, c in w.components.items():
            j = pos.get(key)
            if j is not None:
                out[j] = c
        return out

    def contains(self, w: Form) -> bool:
        if w.is_zero():
            return True
        if (w.n_vars, w.p, w.twist) != (self.n + 1, self.p, self.m):
            return False
        forms = self.forms()
        recon: dict[Key, Fraction] = {}
        for j, c in self.coords_of(w).items():
            for k, x in forms[j].components.items():
                recon[k] = recon.get(k, 0) + c * x
        recon = {k: x for k, x in recon.items() if x}
        return recon == dict(w.components)


@lru_cache(maxsize=None)
def twisted_form_basis(n: int, p: int, m: int) -> TwistedFormBasis:
    """Basis of ``{p-forms, coefficients of degree m-p, iota_E = 0}``."""
    if not 0 <= p <= n + 1:
        raise ValueError(f"form degree {p} out of range for P^{n}")
    c = m - p
    keys = form_coordinates(n, p, c) if c >= 0 else ()
    index = {k: i for i, k in enumerate(keys)}
    vecs: list[dict[int, Fraction]] = []
    free: list[int] = []
    if c >= 0 and p == 0:
        vecs = [{i: Fraction(1)} for i in range(len(keys))]
        free = list(range(len(keys)))
    elif c >= 0:
        # iota_E preserves the multidegree e + 1_I, so work one multidegree at a time
        blocks: dict[Exponent, list[Key]] = {}
        for I, e in keys:
            mu = list(e)
            for i in I:
                mu[i] += 1
            blocks.setdefault(tuple(mu), []).append((I, e))
        for mu in sorted(blocks, reverse=True):
            cols = blocks[mu]
            image_keys: dict[Key, int] = {}
            entries = {}
            for j, (I, e) in enumerate(cols):
                for t, i in enumerate(I):
                    ne = e[:i] + (e[i] + 1,) + e[i + 1 :]
                    row = image_keys.setdefault((I[:t] + I[t + 1 :], ne), len(image_keys))
                    entries[(row, j)] = entries.get((row, j), 0) + (-1) ** t
            ker, local_free = kernel_with_free_columns(ExactMatrix(len(image_keys), len(cols), entries))
            for v, fj in zip(ker, local_free):
                vecs.append({index[cols[j]]: x for j, x in v.items()})
                free.append(index[cols[fj]])
    return TwistedFormBasis(
        len(keys), tuple(vecs), n=n, p=p, m=m, keys=keys, free=tuple(free)
    )


@lru_cache(maxsize=None)
def _free_lookup(n: int, p: int, m: int) -> dict[Key, int]:
    b = twisted_form_basis(n, p, m)
    return {b.keys[i]: j for j, i in enumerate(b.free)}


# ---------------------------------------------------------------------------
# rational forms eta / f^k
# ---------------------------------------------------------------------------

AGraded = Mapping[tuple[int, ...], Form]


@dataclass(frozen=True)
class RationalFormRep:
    """``numerator / denominator^pole_order``.

    For a specific hypersurface the numerator is a :class:`Form`; for the
    universal ``F`` it is a dict from ``a``-monomial (multiset) to :class:`Form`.
    """

    numerator: Union[Form, AGraded]
    pole_order: int
    denominator: Union[HomogPoly, BigradedPoly]

    def __post_init__(self):
        if self.pole_order < 0:
            raise ValueError("pole order must be >= 0")
        if isinstance(self.denominator, HomogPoly) and self.denominator.is_zero():
            raise ZeroDivisionError("zero denominator")

    @property
    def universal(self) -> bool:
        return isinstance(self.denominator, BigradedPoly)

    def numerator_is_zero(self) -> bool:
        if self.universal:
            return all(w.is_zero() for w in self.numerator.values())
        return self.numerator.is_zero()

    def numerator_descends(self) -> bool:
        if self.universal:
            return all(euler_contract(w).is_zero() for w in self.numerator.values())
        return euler_contract(self.numerator).is_zero()


def exterior_d(rep: RationalFormRep) -> RationalFormRep:
    """``d(eta/f^k) = (f d(eta) - k df ^ eta) / f^(k+1)``, exactly."""
    k = rep.pole_order
    if not rep.universal:
        f = rep.denominator
        eta = rep.numerator
        num = poly_times(f, cone_d(eta)) - wedge(differential(f), eta).scale(k)
        return RationalFormRep(num, k + 1, f)
    F = rep.denominator
    out: dict[tuple[int, ...], Form] = {}
    for ((j,), mono), c in F.coeffs.items():
        xj = HomogPoly.monomial(mono)
        for alpha, eta in rep.numerator.items():
            term = (poly_times(xj, cone_d(eta)) - wedge(differential(xj), eta).scale(k)).scale(c)
            key = a_times(alpha, j)
            out[key] = out[key] + term if key in out else term
    return RationalFormRep(out, k + 1, F)


# ---------------------------------------------------------------------------
# Bott's formula
# ---------------------------------------------------------------------------


def bott_h(n: int, p: int, q: int, m: int) -> int:
    """``dim H^q(P^n, Omega^p(m))``."""
    if not (0 <= p <= n and 0 <= q <= n):
        raise ValueError("need 0 <= p, q <= n")
    if q == p and m == 0:
        return 1
    if q == 0 and m > p:
        return comb(m + n - p, m) * comb(m - 1, p)
    if q == n and m < p - n:
        return comb(-m + p, -m) * comb(-m - 1, n - p)
    return 0


def check_ampleness_condition(spec: ProblemSpec, k_max: int) -> bool:
    """Higher cohomology of ``Omega^p(k*d)`` vanishes for ``1 <= k <= k_max``."""
    return all(
        bott_h(spec.n, p, q, k * spec.d) == 0
        for p in range(spec.n + 1)
        for q in range(1, spec.n + 1)
        for k in range(1, k_max + 1)
    )
