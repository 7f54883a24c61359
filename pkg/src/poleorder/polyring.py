"""Graded polynomial rings ``S = Q[x_0..x_n]`` and the bigraded ``Q[a_J][x]``.

Monomials are exponent tuples.  Within a fixed degree the order is
graded-lex with ``x0 > x1 > ...``, so ``monomial_basis(2, 2)`` lists
``x0^2, x0*x1, x1^2``.  The coefficient variables ``a_J`` of the universal
degree-``d`` form are indexed by position in ``monomial_basis(n+1, d)``; an
``a``-monomial is stored as the sorted tuple of the indices it contains (a
multiset), which is the compact form of its exponent vector.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from math import comb
from typing import Mapping, Sequence

from .exact_core import SubspaceBasis, as_rational, echelon_basis, sparse_rank

Exponent = tuple[int, ...]


@dataclass(frozen=True)
class ProblemSpec:
    """Degree-``d`` hypersurfaces in ``P^n``; ``V = S_d`` and ``P = P(V)``."""

    n: int
    d: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.d < 2:
            raise ValueError(f"d must be >= 2, got {self.d}")

    @property
    def n_vars(self) -> int:
        return self.n + 1

    @property
    def dim_V(self) -> int:
        return comb(self.n + self.d, self.n)

    @property
    def dim_P(self) -> int:
        return self.dim_V - 1


@lru_cache(maxsize=None)
def monomial_basis(n_vars: int, degree: int) -> tuple[Exponent, ...]:
    if degree < 0 or n_vars < 1:
        return ()
    out = []
    for combo in combinations_with_replacement(range(n_vars), degree):
        e = [0] * n_vars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return tuple(out)


@lru_cache(maxsize=None)
def monomial_index(n_vars: int, degree: int) -> dict[Exponent, int]:
    return {m: i for i, m in enumerate(monomial_basis(n_vars, degree))}


def add_exp(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x + y for x, y in zip(a, b))


@lru_cache(maxsize=None)
def a_monomials(num_a: int, degree: int) -> tuple[tuple[int, ...], ...]:
    """All ``a``-monomials of ``degree`` in multiset form."""
    if degree < 0:
        return ()
    return tuple(combinations_with_replacement(range(num_a), degree))


def a_times(alpha: tuple[int, ...], j: int) -> tuple[int, ...]:
    """Multiset form of ``a^alpha * a_j``."""
    for pos, x in enumerate(alpha):
        if x > j:
            return alpha[:pos] + (j,) + alpha[pos:]
    return alpha + (j,)


def a_exponent_vector(alpha: tuple[int, ...], num_a: int) -> Exponent:
    e = [0] * num_a
    for j in alpha:
        e[j] += 1
    return tuple(e)


# ---------------------------------------------------------------------------
# homogeneous polynomials
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HomogPoly:
    n_vars: int
    degree: int
    coeffs: Mapping[Exponent, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for e, c in self.coeffs.items():
            e = tuple(e)
            if len(e) != self.n_vars:
                raise ValueError(f"exponent {e} has wrong length for {self.n_vars} variables")
            if sum(e) != self.degree or min(e, default=0) < 0:
                raise ValueError(f"exponent {e} does not have degree {self.degree}")
            c = as_rational(c)
            if c:
                clean[e] = c
        object.__setattr__(self, "coeffs", clean)

    @classmethod
    def monomial(cls, e: Sequence[int], c=1) -> "HomogPoly":
        e = tuple(e)
        return cls(len(e), sum(e), {e: c})

    @classmethod
    def zero(cls, n_vars: int, degree: int) -> "HomogPoly":
        return cls(n_vars, degree, {})

    @classmethod
    def from_coefficient_vector(cls, n_vars: int, degree: int, vec: Sequence) -> "HomogPoly":
        basis = monomial_basis(n_vars, degree)
        if len(vec) != len(basis):
            raise ValueError("coefficient vector has wrong length")
        return cls(n_vars, degree, {m: c for m, c in zip(basis, vec) if c})

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient_vector(self) -> list[Fraction]:
        return [self.coeffs.get(m, Fraction(0)) for m in monomial_basis(self.n_vars, self.degree)]

    def sparse_vector(self) -> dict[int, Fraction]:
        idx = monomial_index(self.n_vars, self.degree)
        return {idx[e]: c for e, c in self.coeffs.items()}

    def _check_compatible(self, other: "HomogPoly"):
        if self.n_vars != other.n_vars:
            raise ValueError(f"variable count mismatch: {self.n_vars} vs {other.n_vars}")

    def __add__(self, other: "HomogPoly") -> "HomogPoly":
        self._check_compatible(other)
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if self.degree != other.degree:
            raise ValueError("cannot add homogeneous polynomials of different degrees")
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) + c
        return HomogPoly(self.n_vars, self.degree, out)

    def __neg__(self) -> "HomogPoly":
        return self.scale(-1)

    def __sub__(self, other: "HomogPoly") -> "HomogPoly":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, HomogPoly):
            return multiply(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def scale(self, c) -> "HomogPoly":
        c = as_rational(c)
        return HomogPoly(self.n_vars, self.degree, {e: c * x for e, x in self.coeffs.items()})

    def partial(self, i: int) -> "HomogPoly":
        return partial(self, i)

    def evaluate(self, point: Sequence) -> Fraction:
        total = Fraction(0)
        pt = [as_rational(x) for x in point]
        for e, c in self.coeffs.items():
            term = c
            for x, k in zip(pt, e):
                if k:
                    term *= x**k
            total += term
        return total

    def __str__(self) -> str:
        return render(self)


def multiply(p: HomogPoly, q: HomogPoly) -> HomogPoly:
    if p.n_vars != q.n_vars:
        raise ValueError(f"variable count mismatch: {p.n_vars} vs {q.n_vars}")
    out: dict[Exponent, Fraction] = {}
    for e1, c1 in p.coeffs.items():
        for e2, c2 in q.coeffs.items():
            e = add_exp(e1, e2)
            out[e] = out.get(e, 0) + c1 * c2
    return HomogPoly(p.n_vars, p.degree + q.degree, out)


def partial(p: HomogPoly, i: int) -> HomogPoly:
    if not 0 <= i < p.n_vars:
        raise IndexError(f"variable index {i} out of range for {p.n_vars} variables")
    out = {}
    for e, c in p.coeffs.items():
        if e[i]:
            ne = list(e)
            ne[i] -= 1
            out[tuple(ne)] = c * e[i]
    return HomogPoly(p.n_vars, p.degree - 1, out)


def linear_form(coeffs: Sequence) -> HomogPoly:
    n_vars = len(coeffs)
    return HomogPoly(
        n_vars, 1, {tuple(int(j == i) for j in range(n_vars)): c for i, c in enumerate(coeffs) if c}
    )


def power(p: HomogPoly, k: int) -> HomogPoly:
    out = HomogPoly(p.n_vars, 0, {(0,) * p.n_vars: 1})
    for _ in range(k):
        out = multiply(out, p)
    return out


def linear_substitution(f: HomogPoly, matrix: Sequence[Sequence]) -> HomogPoly:
    """``f(A x)``, i.e. ``x_i -> sum_j A[i][j] x_j``."""
    images = [linear_form(row) for row in matrix]
    if len(images) != f.n_vars:
        raise ValueError("substitution matrix has the wrong size")
    total = HomogPoly.zero(f.n_vars, f.degree)
    for e, c in f.coeffs.items():
        term = HomogPoly(f.n_vars, 0, {(0,) * f.n_vars: c})
        for img, k in zip(images, e):
            for _ in range(k):
                term = multiply(term, img)
        total = total + term
    return total


# ---------------------------------------------------------------------------
# bigraded polynomials in (a, x)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BigradedPoly:
    """Polynomial in ``a`` (multiset keys) and ``x`` (exponent tuples), bihomogeneous."""

    num_a: int
    n_vars: int
    a_degree: int
    x_degree: int
    coeffs: Mapping[tuple[tuple[int, ...], Exponent], Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (alpha, e), c in self.coeffs.items():
            if len(alpha) != self.a_degree or sum(e) != self.x_degree or len(e) != self.n_vars:
                raise ValueError(f"term {(alpha, e)} is not of bidegree ({self.a_degree}, {self.x_degree})")
            c = as_rational(c)
            if c:
                clean[(tuple(sorted(alpha)), tuple(e))] = c
        object.__setattr__(self, "coeffs", clean)

    def partial_x(self, i: int) -> "BigradedPoly":
        out = {}
        for (alpha, e), c in self.coeffs.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                out[(alpha, tuple(ne))] = c * e[i]
        return BigradedPoly(self.num_a, self.n_vars, self.a_degree, self.x_degree - 1, out)

    def specialize(self, a_values: Sequence) -> HomogPoly:
        """Substitute numbers for the ``a``-variables."""
        vals = [as_rational(v) for v in a_values]
        out: dict[Exponent, Fraction] = {}
        for (alpha, e), c in self.coeffs.items():
            term = c
            for j in alpha:
                term *= vals[j]
            if term:
                out[e] = out.get(e, 0) + term
        return HomogPoly(self.n_vars, self.x_degree, out)


def universal_form(spec: ProblemSpec) -> BigradedPoly:
    """``F = sum_J a_J x^J`` over all degree-``d`` monomials."""
    basis = monomial_basis(spec.n_vars, spec.d)
    return BigradedPoly(
        len(basis), spec.n_vars, 1, spec.d, {((j,), m): 1 for j, m in enumerate(basis)}
    )


# ---------------------------------------------------------------------------
# Jacobian ideals
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class JacobianData:
    f: HomogPoly
    partials: tuple[HomogPoly, ...]


def jacobian_generators(f: HomogPoly) -> JacobianData:
    if f.degree < 1:
        raise ValueError("need a form of degree >= 1")
    parts = tuple(partial(f, i) for i in range(f.n_vars))
    euler = HomogPoly.zero(f.n_vars, f.degree)
    for i, g in enumerate(parts):
        e = [0] * f.n_vars
        e[i] = 1
        euler = euler + multiply(HomogPoly.monomial(e), g)
    if euler != f.scale(f.degree):
        raise ArithmeticError("Euler relation failed")  # cannot happen for a homogeneous f
    return JacobianData(f, parts)


def ideal_vectors(generators: Sequence[HomogPoly], target_degree: int) -> list[dict[int, Fraction]]:
    vecs = []
    for g in generators:
        if g.is_zero():
            continue
        comp = target_degree - g.degree
        if comp < 0:
            continue
        idx = monomial_index(g.n_vars, target_degree)
        for m in monomial_basis(g.n_vars, comp):
            vecs.append({idx[add_exp(m, e)]: c for e, c in g.coeffs.items()})
    return vecs


def ideal_graded_piece(generators: Sequence[HomogPoly], target_degree: int) -> SubspaceBasis:
    """Basis of ``(generators)_target_degree`` in monomial coordinates."""
    if not generators:
        raise ValueError("need at least one generator")
    n_vars = generators[0].n_vars
    ambient = len(monomial_basis(n_vars, target_degree))
    return SubspaceBasis(ambient, tuple(echelon_basis(ideal_vectors(generators, target_degree))))


def ideal_piece_dim(generators: Sequence[HomogPoly], target_degree: int) -> int:
    return sparse_rank(ideal_vectors(generators, target_degree))


def quotient_ring_dim(f: HomogPoly, e: int) -> int:
    """``dim (S / J(f))_e``."""
    if e < 0:
        return 0
    ambient = len(monomial_basis(f.n_vars, e))
    return ambient - ideal_piece_dim(jacobian_generators(f).partials, e)


def socle_degree(f: HomogPoly) -> int:
    return f.n_vars * (f.degree - 2)


def is_smooth(f: HomogPoly) -> bool:
    if f.degree < 2:
        raise ValueError("smoothness test needs degree >= 2")
    return quotient_ring_dim(f, socle_degree(f) + 1) == 0


class Isolation(enum.Enum):
    NON_ISOLATED = "non-isolated"


NON_ISOLATED = Isolation.NON_ISOLATED


@dataclass(frozen=True)
class TjurinaResult:
    """Hilbert function of ``S/J(f)`` scanned past the socle degree.

    ``tau`` is the stabilized value or :data:`NON_ISOLATED`; ``onset`` is the
    first degree of the constant window.  Stabilization over a finite window
    is a heuristic, not a proof.
    """

    tau: int | Isolation
    onset: int | None
    window: int
    dims: dict[int, int]

    @property
    def isolated(self) -> bool:
        return self.tau is not NON_ISOLATED


def tjurina_stabilization(f: HomogPoly, max_degree: int | None = None) -> TjurinaResult:
    n = f.n_vars - 1
    width = n + 2
    start = socle_degree(f) + 1
    if max_degree is None:
        max_degree = start + 3 * width + f.degree
    dims: dict[int, int] = {}
    for e in range(start, max_degree + 1):
        dims[e] = quotient_ring_dim(f, e)
        lo = e - width + 1
        if lo >= start and len({dims[t] for t in range(lo, e + 1)}) == 1:
            return TjurinaResult(dims[e], lo, width, dims)
    return TjurinaResult(NON_ISOLATED, None, width, dims)


def tjurina_total(f: HomogPoly) -> int | Isolation:
    return tjurina_stabilization(f).tau


# ---------------------------------------------------------------------------
# text grammar: ``c*x0^e0*x1^e1 + ...`` (expanded form only)
# ---------------------------------------------------------------------------


class PolySyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class InhomogeneousError(ValueError):
    pass


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<var>x(?P<idx>\d+))|(?P<op>[-+*^])|(?P<bad>\S))")


def _tokenize(text: str):
    pos = 0
    toks = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        if m.group("bad") is not None:
            ch = m.group("bad")
            where = m.start("bad")
            if ch in "()":
                raise PolySyntaxError(f"parentheses are not accepted ({ch!r}); expand the polynomial", where)
            raise PolySyntaxError(f"unexpected character {ch!r}", where)
        for kind in ("num", "var", "op"):
            if m.group(kind) is not None:
                toks.append((kind, m.group(kind), m.start(kind)))
                break
        pos = m.end()
    toks.append(("end", "", len(text)))
    return toks


def parse_poly(text: str, n_vars: int | None = None) -> HomogPoly:
    """Parse an expanded polynomial such as ``"x0^4 + 3/2*x1^2*x2^2"``."""
    toks = _tokenize(text)
    i = 0
    terms: list[tuple[Fraction, dict[int, int], int]] = []

    def peek():
        return toks[i]

    while True:
        sign = 1
        kind, val, pos = peek()
        if kind == "end":
            if not terms:
                raise PolySyntaxError("empty polynomial", pos)
            raise PolySyntaxError("dangling operator", pos)
        if kind == "op" and val in "+-":
            sign = -1 if val == "-" else 1
            i += 1
        term_pos = peek()[2]
        coeff = Fraction(sign)
        powers: dict[int, int] = {}
        expect_factor = True
        while expect_factor:
            kind, val, pos = peek()
            if kind == "num":
                num = Fraction(val)
                i += 1
                coeff *= num
            elif kind == "var":
                var = int(val[1:])
                i += 1
                exp = 1
                if peek()[0] == "op" and peek()[1] == "^":
                    i += 1
                    k2, v2, p2 = peek()
                    if k2 != "num" or "/" in v2:
                        raise PolySyntaxError("exponent must be a nonnegative integer", p2)
                    exp = int(v2)
                    i += 1
                powers[var] = powers.get(var, 0) + exp
            else:
                raise PolySyntaxError(f"expected a coefficient or variable, found {val or 'end of input'!r}", pos)
            kind, val, pos = peek()
            if kind == "op" and val == "*":
                i += 1
            else:
                expect_factor = False
        terms.append((coeff, powers, term_pos))
        kind, val, pos = peek()
        if kind == "end":
            break
        if not (kind == "op" and val in "+-"):
            raise PolySyntaxError(f"expected '+' or '-', found {val!r}", pos)

    max_var = max((v for _, pw, _ in terms for v in pw), default=-1)
    if n_vars is None:
        n_vars = max_var + 1
    if max_var >= n_vars:
        raise ValueError(f"variable x{max_var} used but only {n_vars} variables declared")
    if n_vars < 1:
        raise ValueError("polynomial has no variables; pass n_vars")
    degs = sorted({sum(pw.values()) for c, pw, _ in terms if c})
    if len(degs) > 1:
        listing = ", ".join(
            f"term at {p} has degree {sum(pw.values())}" for c, pw, p in terms if c
        )
        raise InhomogeneousError(f"inhomogeneous polynomial (degrees {degs}): {listing}")
    degree = degs[0] if degs else sum(terms[0][1].values())
    coeffs: dict[Exponent, Fraction] = {}
    for c, pw, _ in terms:
        e = tuple(pw.get(v, 0) for v in range(n_vars))
        coeffs[e] = coeffs.get(e, 0) + c
    return HomogPoly(n_vars, degree, coeffs)


def render(p: HomogPoly) -> str:
    """Inverse of :func:`parse_poly` (graded-lex term order)."""
    if p.is_zero():
        return "0"
    parts = []
    for m in monomial_basis(p.n_vars, p.degree):
        c = p.coeffs.get(m)
        if not c:
            continue
        sign = "-" if c < 0 else "+"
        a = abs(c)
        factors = [f"x{i}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(m) if k]
        if a != 1 or not factors:
            factors.insert(0, str(a))
        parts.append((sign, "*".join(factors)))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out
