"""Exact linear algebra over the rationals.

Every dimension reported by the package reduces to ranks of sparse matrices
with rational entries.  Vectors are sparse ``dict`` objects mapping a
coordinate key to a nonzero :class:`fractions.Fraction` (or ``int``); keys may
be plain integers or any hashable, orderable labels such as monomial tuples.

Ranks are computed by fraction-free elimination on primitive integer rows.
Before eliminating, the vectors are split into connected components of the
"shares a coordinate" graph; every torus-equivariant map in the package is
block diagonal, and the split recovers the blocks without being told about
them.  Large components are handed to FLINT's exact integer rank when
``python-flint`` is importable; the pure-Python elimination is always
available and is the reference path.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Hashable, Iterable, Mapping, Sequence

try:  # optional accelerator for large blocks
    import flint as _flint
except ImportError:  # pragma: no cover - exercised only without python-flint
    _flint = None

Rational = Fraction

# components with rows*cols above this go to FLINT (if present)
FLINT_CUTOFF = int(os.environ.get("POLEORDER_FLINT_CUTOFF", "4000"))


def as_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


# ---------------------------------------------------------------------------
# matrices and subspaces
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExactMatrix:
    """Sparse ``rows x cols`` matrix; only nonzero entries are stored."""

    rows: int
    cols: int
    entries: Mapping[tuple[int, int], Fraction] = field(default_factory=dict)

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix shape must be nonnegative")
        clean = {}
        for (i, j), x in self.entries.items():
            if not (0 <= i < self.rows and 0 <= j < self.cols):
                raise IndexError(f"entry ({i}, {j}) outside a {self.rows}x{self.cols} matrix")
            x = as_rational(x)
            if x:
                clean[(i, j)] = x
        object.__setattr__(self, "entries", clean)

    @classmethod
    def from_dense(cls, data: Sequence[Sequence], cols: int | None = None) -> "ExactMatrix":
        data = [list(r) for r in data]
        if cols is None:
            cols = len(data[0]) if data else 0
        for r in data:
            if len(r) != cols:
                raise ValueError("ragged dense matrix")
        ents = {(i, j): x for i, r in enumerate(data) for j, x in enumerate(r) if x}
        return cls(len(data), cols, ents)

    @classmethod
    def from_columns(cls, rows: int, columns: Sequence[Mapping[int, object]]) -> "ExactMatrix":
        ents = {(i, j): x for j, c in enumerate(columns) for i, x in c.items()}
        return cls(rows, len(columns), ents)

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls(n, n, {(i, i): 1 for i in range(n)})

    def to_dense(self) -> list[list[Fraction]]:
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (i, j), x in self.entries.items():
            out[i][j] = x
        return out

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(self.cols, self.rows, {(j, i): x for (i, j), x in self.entries.items()})

    def row_vectors(self) -> list[dict[int, Fraction]]:
        out: list[dict[int, Fraction]] = [{} for _ in range(self.rows)]
        for (i, j), x in self.entries.items():
            out[i][j] = x
        return out

    def column_vectors(self) -> list[dict[int, Fraction]]:
        out: list[dict[int, Fraction]] = [{} for _ in range(self.cols)]
        for (i, j), x in self.entries.items():
            out[j][i] = x
        return out

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        by_row: dict[int, list[tuple[int, Fraction]]] = {}
        for (k, j), y in other.entries.items():
            by_row.setdefault(k, []).append((j, y))
        acc: dict[tuple[int, int], Fraction] = {}
        for (i, k), x in self.entries.items():
            for j, y in by_row.get(k, ()):
                acc[(i, j)] = acc.get((i, j), 0) + x * y
        return ExactMatrix(self.rows, other.cols, acc)

    def apply(self, v: Mapping[int, object]) -> dict[int, Fraction]:
        out: dict[int, Fraction] = {}
        for (i, j), x in self.entries.items():
            if j in v:
                out[i] = out.get(i, 0) + x * v[j]
        return {i: x for i, x in out.items() if x}

    def is_zero(self) -> bool:
        return not self.entries


@dataclass(frozen=True)
class SubspaceBasis:
    """A linearly independent list of sparse vectors in ``Q^ambient_dim``."""

    ambient_dim: int
    vectors: tuple[Mapping[int, Fraction], ...] = ()

    def __post_init__(self):
        vecs = tuple(_as_sparse(v, self.ambient_dim) for v in self.vectors)
        if sparse_rank(vecs) != len(vecs):
            raise ValueError("basis vectors are linearly dependent")
        object.__setattr__(self, "vectors", vecs)

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def __len__(self) -> int:
        return len(self.vectors)

    def dense(self) -> list[list[Fraction]]:
        return [[v.get(i, Fraction(0)) for i in range(self.ambient_dim)] for v in self.vectors]

    @classmethod
    def spanned_by(cls, vectors: Iterable, ambient_dim: int) -> "SubspaceBasis":
        """Echelon basis of the span of ``vectors`` (any spanning set)."""
        rows = [_as_sparse(v, ambient_dim) for v in vectors]
        return cls(ambient_dim, tuple(echelon_basis(rows)))

    def is_independent(self) -> bool:
        return sparse_rank(self.vectors) == len(self.vectors)


def _as_sparse(v, ambient_dim: int) -> dict[int, Fraction]:
    if isinstance(v, Mapping):
        out = {}
        for i, x in v.items():
            if not (isinstance(i, int) and 0 <= i < ambient_dim):
                raise ValueError(f"coordinate {i!r} outside ambient dimension {ambient_dim}")
            x = as_rational(x)
            if x:
                out[i] = x
        return out
    v = list(v)
    if len(v) != ambient_dim:
        raise ValueError(f"vector of length {len(v)} in ambient dimension {ambient_dim}")
    return {i: as_rational(x) for i, x in enumerate(v) if x}


# ---------------------------------------------------------------------------
# elimination kernels
# ---------------------------------------------------------------------------


def _primitive(v: dict) -> dict:
    g = 0
    for x in v.values():
        g = gcd(g, x)
        if g == 1:
            break
    lead = v[min(v)]
    if lead < 0:
        g = -g
    if g not in (0, 1):
        v = {k: x // g for k, x in v.items()}
    return v


def _integral(v: Mapping[Hashable, object]) -> dict:
    """Scale a rational vector to a primitive integer vector (same span)."""
    den = 1
    for x in v.values():
        if isinstance(x, Fraction):
            den = lcm(den, x.denominator)
    out = {}
    for k, x in v.items():
        if x:
            y = x * den
            out[k] = int(y) if isinstance(y, Fraction) else y
    return out


def _reduce_into(pivots: dict, v: dict) -> dict | None:
    """Reduce integer row ``v`` against ``pivots`` (col -> row whose min key is col).

    Returns the new pivot row, or ``None`` if ``v`` is dependent.
    """
    while v:
        c = min(v)
        p = pivots.get(c)
        if p is None:
            return _primitive(v)
        a, b = v[c], p[c]
        g = gcd(a, b)
        a //= g
        b //= g
        if b != 1:
            v = {k: b * x for k, x in v.items()}
        for k, x in p.items():
            y = v.get(k, 0) - a * x
            if y:
                v[k] = y
            else:
                v.pop(k, None)
        if v:
            v = _primitive(v)
    return None


def _python_rank(rows: list[dict]) -> int:
    pivots: dict = {}
    for v in rows:
        p = _reduce_into(pivots, dict(v))
        if p is not None:
            pivots[min(p)] = p
    return len(pivots)


def _flint_rank(rows: list[dict]) -> int:
    keys = sorted({k for r in rows for k in r})
    index = {k: i for i, k in enumerate(keys)}
    # FLINT is much faster on tall matrices than on wide ones
    if len(rows) >= len(keys):
        dense = [[0] * len(keys) for _ in rows]
        for i, r in enumerate(rows):
            d = dense[i]
            for k, x in r.items():
                d[index[k]] = x
    else:
        dense = [[0] * len(rows) for _ in keys]
        for j, r in enumerate(rows):
            for k, x in r.items():
                dense[index[k]][j] = x
    return _flint.fmpz_mat(dense).rank()


def _components(rows: list[dict]) -> list[list[dict]]:
    parent: dict = {}

    def find(k):
        root = k
        while parent[root] != root:
            root = parent[root]
        while parent[k] != root:
            parent[k], k = root, parent[k]
        return root

    for r in rows:
        it = iter(r)
        first = next(it)
        parent.setdefault(first, first)
        a = find(first)
        for k in it:
            parent.setdefault(k, k)
            b = find(k)
            if b != a:
                parent[b] = a
    groups: dict = {}
    for r in rows:
        groups.setdefault(find(next(iter(r))), []).append(r)
    return list(groups.values())


def sparse_rank(vectors: Iterable[Mapping[Hashable, object]], use_flint: bool | None = None) -> int:
    """Exact rank of a family of sparse rational vectors.

    ``use_flint=None`` means "if available"; ``False`` forces the pure-Python
    elimination (used by the tests to cross-check the two routes).
    """
    rows = [_integral(v) for v in vectors]
    rows = [r for r in rows if r]
    if not rows:
        return 0
    if use_flint is None:
        use_flint = _flint is not None
    if use_flint and _flint is None:
        raise RuntimeError("python-flint is not installed")
    total = 0
    for comp in _components(rows):
        ncols = len({k for r in comp for k in r})
        if use_flint and len(comp) * ncols > FLINT_CUTOFF and len(comp) > 1:
            total += _flint_rank(comp)
        else:
            total += _python_rank(comp)
    return total


def echelon_basis(vectors: Iterable[Mapping[Hashable, object]]) -> list[dict]:
    """Independent integer rows in echelon form spanning the same space."""
    pivots: dict = {}
    for v in vectors:
        v = _integral(v)
        if not v:
            continue
        p = _reduce_into(pivots, v)
        if p is not None:
            pivots[min(p)] = p
    return [{k: Fraction(x) for k, x in pivots[c].items()} for c in sorted(pivots)]


def rref(rows: list[Mapping[int, object]], ncols: int) -> tuple[list[dict[int, Fraction]], list[int]]:
    """Reduced row echelon form over Q; returns (nonzero rows, pivot columns)."""
    work = [{k: as_rational(x) for k, x in r.items() if x} for r in rows]
    work = [r for r in work if r]
    pivot_rows: list[dict[int, Fraction]] = []
    pivot_cols: list[int] = []
    for col in range(ncols):
        idx = next((i for i, r in enumerate(work) if col in r), None)
        if idx is None:
            continue
        prow = work.pop(idx)
        inv = 1 / prow[col]
        prow = {k: x * inv for k, x in prow.items()}
        for r_list in (work, pivot_rows):
            for i, r in enumerate(r_list):
                c = r.get(col)
                if c:
                    nr = dict(r)
                    for k, x in prow.items():
                        y = nr.get(k, 0) - c * x
                        if y:
                            nr[k] = y
                        else:
                            nr.pop(k, None)
                    r_list[i] = nr
        work = [r for r in work if r]
        pivot_rows.append(prow)
        pivot_cols.append(col)
    return pivot_rows, pivot_cols


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------


def rank(m: ExactMatrix) -> int:
    return sparse_rank(m.row_vectors())


def kernel_with_free_columns(m: ExactMatrix) -> tuple[list[dict[int, Fraction]], list[int]]:
    """Kernel vectors from the RREF; vector ``j`` is 1 at ``free[j]``, 0 at other free columns."""
    rows, pivots = rref(m.row_vectors(), m.cols)
    pivot_set = set(pivots)
    vecs, free = [], []
    for f in range(m.cols):
        if f in pivot_set:
            continue
        v = {f: Fraction(1)}
        for r, pc in zip(rows, pivots):
            c = r.get(f)
            if c:
                v[pc] = -c
        vecs.append(v)
        free.append(f)
    return vecs, free


def kernel_basis(m: ExactMatrix) -> SubspaceBasis:
    return SubspaceBasis(m.cols, tuple(kernel_with_free_columns(m)[0]))


def span_dim(vectors: Iterable, ambient_dim: int) -> int:
    return sparse_rank([_as_sparse(v, ambient_dim) for v in vectors])


def quotient_dim(ambient_dim: int, subspace_vectors: Iterable) -> int:
    return ambient_dim - span_dim(subspace_vectors, ambient_dim)
