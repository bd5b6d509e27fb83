"""Exact linear algebra over the rationals.

Everything here works on :class:`fractions.Fraction` entries.  Matrices are
dense and immutable; subspaces are stored through a basis in reduced row
echelon form so that two equal subspaces compare equal.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import PreconditionError, UsageError

__all__ = [
    "Fraction",
    "QuotientBasis",
    "RationalMatrix",
    "Subspace",
    "as_rational",
    "block_diag",
    "hstack",
    "image_basis",
    "intersect",
    "kernel_basis",
    "kron",
    "membership",
    "preimage",
    "quotient_dim",
    "rref",
    "solve",
    "vector",
    "vstack",
]

Scalar = Union[int, Fraction, str]
Vector = tuple  # tuple[Fraction, ...]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def as_rational(value: Scalar) -> Fraction:
    """Convert ``value`` to an exact :class:`Fraction`.

    Accepts ints, Fractions and strings such as ``"3"``, ``"-2/7"``.  Floats
    are rejected so that rounding can never leak into a computation.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise UsageError(f"not a rational number: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise UsageError(f"not an exact rational: {value!r}") from exc
    raise UsageError(f"not an exact rational: {value!r} ({type(value).__name__})")


def vector(values: Iterable[Scalar]) -> Vector:
    return tuple(as_rational(v) for v in values)


class RationalMatrix:
    """Immutable dense matrix with Fraction entries.

    ``rows`` and ``cols`` are kept explicitly so that empty shapes such as
    0 x 3 behave like any other matrix.
    """

    __slots__ = ("rows", "cols", "_data", "_hash")

    def __init__(self, data: Iterable[Iterable[Scalar]], rows: int | None = None, cols: int | None = None):
        body = tuple(tuple(as_rational(x) for x in row) for row in data)
        if rows is None:
            rows = len(body)
        if cols is None:
            cols = len(body[0]) if body else 0
        if len(body) != rows or any(len(r) != cols for r in body):
            raise UsageError(f"ragged or mis-sized matrix data for shape {rows}x{cols}")
        self.rows = rows
        self.cols = cols
        self._data = body
        self._hash = None

    @classmethod
    def _trusted(cls, body: tuple, rows: int, cols: int) -> RationalMatrix:
        m = cls.__new__(cls)
        m.rows = rows
        m.cols = cols
        m._data = body
        m._hash = None
        return m

    @classmethod
    def zeros(cls, rows: int, cols: int) -> RationalMatrix:
        return cls._trusted(tuple((_ZERO,) * cols for _ in range(rows)), rows, cols)

    @classmethod
    def identity(cls, n: int) -> RationalMatrix:
        return cls._trusted(
            tuple(tuple(_ONE if i == j else _ZERO for j in range(n)) for i in range(n)), n, n
        )

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[Scalar]], rows: int) -> RationalMatrix:
        cols = [vector(c) for c in columns]
        if any(len(c) != rows for c in cols):
            raise UsageError("column length does not match row count")
        return cls._trusted(tuple(tuple(c[i] for c in cols) for i in range(rows)), rows, len(cols))

    @classmethod
    def from_rows(cls, rows_: Sequence[Sequence[Scalar]], cols: int) -> RationalMatrix:
        return cls(rows_, len(rows_), cols)

    @classmethod
    def diagonal(cls, values: Sequence[Scalar]) -> RationalMatrix:
        vals = vector(values)
        n = len(vals)
        return cls._trusted(
            tuple(tuple(vals[i] if i == j else _ZERO for j in range(n)) for i in range(n)), n, n
        )

    # -- access ---------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def entries(self) -> tuple:
        """Row-major flat tuple of entries."""
        return tuple(x for row in self._data for x in row)

    def __getitem__(self, index: tuple[int, int]) -> Fraction:
        i, j = index
        return self._data[i][j]

    def row(self, i: int) -> Vector:
        return self._data[i]

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self._data)

    def row_list(self) -> list[Vector]:
        return list(self._data)

    def column_list(self) -> list[Vector]:
        return [self.column(j) for j in range(self.cols)]

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self._data]

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> RationalMatrix:
        return RationalMatrix._trusted(
            tuple(tuple(self._data[i][j] for j in col_idx) for i in row_idx), len(row_idx), len(col_idx)
        )

    # -- arithmetic -----------------------------------------------------
    @property
    def T(self) -> RationalMatrix:
        return RationalMatrix._trusted(
            tuple(tuple(self._data[i][j] for i in range(self.rows)) for j in range(self.cols)),
            self.cols,
            self.rows,
        )

    def transpose(self) -> RationalMatrix:
        return self.T

    def apply(self, v: Sequence[Scalar]) -> Vector:
        vec = v if isinstance(v, tuple) and all(type(x) is Fraction for x in v) else vector(v)
        if len(vec) != self.cols:
            raise UsageError(f"vector of length {len(vec)} does not fit a {self.rows}x{self.cols} matrix")
        out = []
        for row in self._data:
            s = _ZERO
            for a, b in zip(row, vec):
                if a and b:
                    s += a * b
            out.append(s)
        return tuple(out)

    def __matmul__(self, other):
        if isinstance(other, RationalMatrix):
            if self.cols != other.rows:
                raise UsageError(f"cannot multiply {self.shape} by {other.shape}")
            ocols = other.column_list()
            body = []
            for row in self._data:
                nz = [(k, a) for k, a in enumerate(row) if a]
                out = []
                for col in ocols:
                    s = _ZERO
                    for k, a in nz:
                        b = col[k]
                        if b:
                            s += a * b
                    out.append(s)
                body.append(tuple(out))
            return RationalMatrix._trusted(tuple(body), self.rows, other.cols)
        if isinstance(other, (tuple, list)):
            return self.apply(other)
        return NotImplemented

    def _check_same(self, other: RationalMatrix) -> None:
        if self.shape != other.shape:
            raise UsageError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: RationalMatrix) -> RationalMatrix:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        self._check_same(other)
        return RationalMatrix._trusted(
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self._data, other._data)),
            self.rows,
            self.cols,
        )

    def __sub__(self, other: RationalMatrix) -> RationalMatrix:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        self._check_same(other)
        return RationalMatrix._trusted(
            tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self._data, other._data)),
            self.rows,
            self.cols,
        )

    def __neg__(self) -> RationalMatrix:
        return RationalMatrix._trusted(tuple(tuple(-a for a in r) for r in self._data), self.rows, self.cols)

    def scale(self, c: Scalar) -> RationalMatrix:
        c = as_rational(c)
        return RationalMatrix._trusted(tuple(tuple(c * a for a in r) for r in self._data), self.rows, self.cols)

    def __mul__(self, c):
        if isinstance(c, (int, Fraction)) and not isinstance(c, bool):
            return self.scale(c)
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, self._data))
        return self._hash

    def __repr__(self) -> str:
        body = ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self._data)
        return f"RationalMatrix({self.rows}x{self.cols}: [{body}])"

    # -- queries --------------------------------------------------------
    def is_zero(self) -> bool:
        return all(not x for r in self._data for x in r)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def rank(self) -> int:
        return len(rref(self)[1])

    def trace(self) -> Fraction:
        if not self.is_square():
            raise UsageError("trace of a non-square matrix")
        return sum((self._data[i][i] for i in range(self.rows)), _ZERO)

    def is_invertible(self) -> bool:
        return self.is_square() and self.rank() == self.rows

    def inverse(self) -> RationalMatrix:
        if not self.is_square():
            raise UsageError(f"cannot invert a {self.rows}x{self.cols} matrix")
        n = self.rows
        work = [list(r) + [_ONE if i == j else _ZERO for j in range(n)] for i, r in enumerate(self._data)]
        pivots = _rref_inplace(work, n)
        if len(pivots) != n:
            raise PreconditionError("matrix is singular")
        return RationalMatrix._trusted(tuple(tuple(r[n:]) for r in work), n, n)

    def power(self, k: int) -> RationalMatrix:
        if not self.is_square():
            raise UsageError("power of a non-square matrix")
        if k < 0:
            return self.inverse().power(-k)
        out = RationalMatrix.identity(self.rows)
        for _ in range(k):
            out = out @ self
        return out


def _rref_inplace(work: list[list[Fraction]], pivot_cols: int | None = None) -> list[int]:
    """Gauss-Jordan elimination on a list of mutable rows.

    Pivots are only searched in the first ``pivot_cols`` columns; row
    operations always act on the full row.  Returns the pivot columns.
    """
    if not work:
        return []
    ncols = len(work[0])
    limit = ncols if pivot_cols is None else pivot_cols
    nrows = len(work)
    pivots: list[int] = []
    r = 0
    for c in range(limit):
        if r == nrows:
            break
        p = None
        for i in range(r, nrows):
            if work[i][c]:
                p = i
                break
        if p is None:
            continue
        if p != r:
            work[r], work[p] = work[p], work[r]
        prow = work[r]
        lead = prow[c]
        if lead != 1:
            inv = 1 / lead
            prow = [x * inv if x else x for x in prow]
            work[r] = prow
        nz = [(k, prow[k]) for k in range(c, ncols) if prow[k]]
        for i in range(nrows):
            if i == r:
                continue
            row = work[i]
            f = row[c]
            if f:
                for k, x in nz:
                    row[k] -= f * x
        pivots.append(c)
        r += 1
    return pivots


def rref(m: RationalMatrix) -> tuple[RationalMatrix, list[int]]:
    """Reduced row echelon form of ``m`` together with its pivot columns."""
    work = [list(r) for r in m._data]
    pivots = _rref_inplace(work)
    return RationalMatrix._trusted(tuple(tuple(r) for r in work), m.rows, m.cols), pivots


def _reduced_nonzero_rows(vectors: Sequence[Vector], ambient_dim: int) -> tuple[RationalMatrix, list[int]]:
    work = [list(v) for v in vectors]
    pivots = _rref_inplace(work) if work else []
    body = tuple(tuple(work[i]) for i in range(len(pivots)))
    return RationalMatrix._trusted(body, len(pivots), ambient_dim), pivots


@dataclass(frozen=True)
class Subspace:
    """A subspace of Q^ambient_dim given by an RREF basis (one vector per row)."""

    ambient_dim: int
    basis: RationalMatrix

    def __post_init__(self) -> None:
        if self.basis.cols != self.ambient_dim:
            raise UsageError("basis width differs from ambient dimension")

    @classmethod
    def span(cls, vectors: Iterable[Sequence[Scalar]], ambient_dim: int) -> Subspace:
        vecs = [vector(v) for v in vectors]
        if any(len(v) != ambient_dim for v in vecs):
            raise UsageError("spanning vector has the wrong length")
        basis, _ = _reduced_nonzero_rows(vecs, ambient_dim)
        return cls(ambient_dim, basis)

    @classmethod
    def zero(cls, ambient_dim: int) -> Subspace:
        return cls(ambient_dim, RationalMatrix.zeros(0, ambient_dim))

    @classmethod
    def full(cls, ambient_dim: int) -> Subspace:
        return cls(ambient_dim, RationalMatrix.identity(ambient_dim))

    @property
    def dim(self) -> int:
        return self.basis.rows

    @property
    def pivots(self) -> list[int]:
        out = []
        for row in self.basis.row_list():
            out.append(next(j for j, x in enumerate(row) if x))
        return out

    def vectors(self) -> list[Vector]:
        return self.basis.row_list()

    def reduce(self, v: Sequence[Scalar]) -> Vector:
        """Remainder of ``v`` after clearing the pivot coordinates of the basis."""
        vec = list(vector(v))
        if len(vec) != self.ambient_dim:
            raise UsageError("vector length differs from ambient dimension")
        for row, p in zip(self.basis.row_list(), self.pivots):
            f = vec[p]
            if f:
                for k, x in enumerate(row):
                    if x:
                        vec[k] -= f * x
        return tuple(vec)

    def contains(self, v: Sequence[Scalar]) -> bool:
        return not any(self.reduce(v))

    __contains__ = contains

    def coordinates(self, v: Sequence[Scalar]) -> Vector:
        """Coefficients of ``v`` in the RREF basis; ``v`` must lie in the subspace."""
        vec = vector(v)
        if not self.contains(vec):
            raise PreconditionError("vector is not in the subspace")
        return tuple(vec[p] for p in self.pivots)

    def __add__(self, other: Subspace) -> Subspace:
        if self.ambient_dim != other.ambient_dim:
            raise UsageError("ambient dimensions differ")
        return Subspace.span(self.vectors() + other.vectors(), self.ambient_dim)

    def intersect(self, other: Subspace) -> Subspace:
        return intersect(self, other)

    def is_subspace_of(self, other: Subspace) -> bool:
        if self.ambient_dim != other.ambient_dim:
            raise UsageError("ambient dimensions differ")
        return all(other.contains(v) for v in self.vectors())

    def annihilator(self) -> Subspace:
        """Vectors w with <b, w> = 0 for every basis vector b."""
        return kernel_basis(self.basis)

    def image(self, m: RationalMatrix) -> Subspace:
        if m.cols != self.ambient_dim:
            raise UsageError("matrix does not act on this subspace")
        return Subspace.span([m.apply(v) for v in self.vectors()], m.rows)

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim}, basis={self.basis.tolist()})"


def kernel_basis(m: RationalMatrix) -> Subspace:
    """Null space {v : m v = 0} as a canonical subspace of Q^cols."""
    r, pivots = rref(m)
    pivot_set = set(pivots)
    free = [c for c in range(m.cols) if c not in pivot_set]
    vecs = []
    for f in free:
        v = [_ZERO] * m.cols
        v[f] = _ONE
        for i, p in enumerate(pivots):
            v[p] = -r[i, f]
        vecs.append(v)
    return Subspace.span(vecs, m.cols)


def image_basis(m: RationalMatrix) -> Subspace:
    """Column space of ``m`` as a canonical subspace of Q^rows."""
    return Subspace.span(m.column_list(), m.rows)


def solve(m: RationalMatrix, b: Sequence[Scalar]) -> Vector | None:
    """Particular solution of m x = b with every free variable set to zero.

    Returns None when the system is inconsistent.
    """
    rhs = vector(b)
    if len(rhs) != m.rows:
        raise UsageError(f"right-hand side has length {len(rhs)}, expected {m.rows}")
    work = [list(row) + [x] for row, x in zip(m._data, rhs)]
    pivots = _rref_inplace(work, m.cols)
    for i in range(len(pivots), m.rows):
        if work[i][m.cols]:
            return None
    x = [_ZERO] * m.cols
    for i, p in enumerate(pivots):
        x[p] = work[i][m.cols]
    return tuple(x)


def membership(s: Subspace, v: Sequence[Scalar]) -> bool:
    return s.contains(v)


def intersect(a: Subspace, b: Subspace) -> Subspace:
    if a.ambient_dim != b.ambient_dim:
        raise UsageError("ambient dimensions differ")
    if a.dim == 0 or b.dim == 0:
        return Subspace.zero(a.ambient_dim)
    # coefficient pairs (alpha, beta) with alpha.A = beta.B
    stacked = vstack([a.basis, -b.basis])
    rel = kernel_basis(stacked.T)
    vecs = []
    for coeffs in rel.vectors():
        alpha = coeffs[: a.dim]
        vecs.append(a.basis.T.apply(alpha))
    return Subspace.span(vecs, a.ambient_dim)


def quotient_dim(inner: Subspace, outer: Subspace) -> int:
    if not inner.is_subspace_of(outer):
        raise PreconditionError("inner subspace is not contained in the outer one")
    return outer.dim - inner.dim


def preimage(m: RationalMatrix, s: Subspace) -> Subspace:
    """{v : m v in s}."""
    if m.rows != s.ambient_dim:
        raise UsageError("matrix target does not match the subspace ambient space")
    ann = s.annihilator()
    return kernel_basis(ann.basis @ m)


def hstack(mats: Sequence[RationalMatrix], rows: int | None = None) -> RationalMatrix:
    if not mats:
        return RationalMatrix.zeros(rows or 0, 0)
    nrows = mats[0].rows
    if any(m.rows != nrows for m in mats):
        raise UsageError("hstack of matrices with different row counts")
    body = tuple(tuple(x for m in mats for x in m.row(i)) for i in range(nrows))
    return RationalMatrix._trusted(body, nrows, sum(m.cols for m in mats))


def vstack(mats: Sequence[RationalMatrix], cols: int | None = None) -> RationalMatrix:
    if not mats:
        return RationalMatrix.zeros(0, cols or 0)
    ncols = mats[0].cols
    if any(m.cols != ncols for m in mats):
        raise UsageError("vstack of matrices with different column counts")
    body = tuple(r for m in mats for r in m._data)
    return RationalMatrix._trusted(body, len(body), ncols)


def block_diag(mats: Sequence[RationalMatrix]) -> RationalMatrix:
    total_cols = sum(m.cols for m in mats)
    body = []
    offset = 0
    for m in mats:
        for row in m._data:
            body.append((_ZERO,) * offset + row + (_ZERO,) * (total_cols - offset - m.cols))
        offset += m.cols
    return RationalMatrix._trusted(tuple(body), len(body), total_cols)


def kron(a: RationalMatrix, b: RationalMatrix) -> RationalMatrix:
    body = []
    for i in range(a.rows):
        for k in range(b.rows):
            body.append(tuple(a[i, j] * b[k, l] for j in range(a.cols) for l in range(b.cols)))
    return RationalMatrix._trusted(tuple(body), a.rows * b.rows, a.cols * b.cols)


class QuotientBasis:
    """Coordinates on a quotient Z/B given representatives of a basis of Z/B.

    ``reps`` must be independent modulo ``sub``.  ``coordinates(v)`` returns
    the unique c with v - sum c_i reps_i in ``sub``.
    """

    def __init__(self, reps: Sequence[Vector], sub: Subspace):
        self.reps = [vector(r) for r in reps]
        self.sub = sub
        n = sub.ambient_dim
        self._system = RationalMatrix.from_columns(self.reps + sub.vectors(), n)
        if self._system.rank() != len(self.reps) + sub.dim:
            raise PreconditionError("representatives are dependent modulo the subspace")

    @classmethod
    def complement(cls, outer: Subspace, sub: Subspace) -> QuotientBasis:
        """Canonical representatives: outer basis vectors kept greedily when new mod ``sub``."""
        chosen: list[Vector] = []
        acc = sub
        for v in outer.vectors():
            if not acc.contains(v):
                chosen.append(v)
                acc = acc + Subspace.span([v], outer.ambient_dim)
        return cls(chosen, sub)

    @property
    def dim(self) -> int:
        return len(self.reps)

    def coordinates(self, v: Sequence[Scalar]) -> Vector | None:
        """Class coordinates of ``v``, or None when ``v`` is outside reps + sub."""
        x = solve(self._system, v)
        if x is None:
            return None
        return x[: len(self.reps)]
