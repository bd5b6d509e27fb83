"""Chevalley-Eilenberg cochains, differentials and cohomology.

Cochain coordinates are indexed by (k-subset of the algebra basis, module
basis index), subsets in lexicographic order, subset-major.  The differential
uses the convention

    (D w)(u_0..u_k) = sum_i (-1)^i u_i . w(..^u_i..)
                      + sum_{i<j} (-1)^(i+j) w([u_i,u_j], ..^u_i..^u_j..)
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Mapping, Sequence

from ._multiindex import sort_with_sign, subset_index, subsets
from .errors import UsageError
from .exactla import (
    Fraction,
    QuotientBasis,
    RationalMatrix,
    Subspace,
    image_basis,
    kernel_basis,
    solve,
    vector,
)
from .liealg import LieAlgebra, Representation

__all__ = [
    "Cochain",
    "CochainSpace",
    "CohomologyResult",
    "ce_differential",
    "coboundary_primitive",
    "cochain",
    "cochain_from_matrix",
    "cohomology",
    "is_cocycle",
    "one_cochain_matrix",
]

_ZERO = Fraction(0)


@dataclass(frozen=True)
class CochainSpace:
    algebra: LieAlgebra
    module: Representation
    degree: int

    def __post_init__(self) -> None:
        if self.degree < 0:
            raise UsageError("cochain degree must be non-negative")
        if self.module.algebra != self.algebra:
            raise UsageError("representation belongs to a different algebra")

    @property
    def dim(self) -> int:
        return comb(self.algebra.dim, self.degree) * self.module.module_dim

    def index(self, subset: Sequence[int], a: int) -> int:
        return subset_index(self.algebra.dim, self.degree)[tuple(subset)] * self.module.module_dim + a


@dataclass(frozen=True)
class Cochain:
    space: CochainSpace
    coords: tuple = field(default=())

    def __post_init__(self) -> None:
        object.__setattr__(self, "coords", vector(self.coords))
        if len(self.coords) != self.space.dim:
            raise UsageError(f"cochain has {len(self.coords)} coordinates, space has dimension {self.space.dim}")

    @classmethod
    def zero(cls, space: CochainSpace) -> Cochain:
        return cls(space, (_ZERO,) * space.dim)

    @property
    def degree(self) -> int:
        return self.space.degree

    def value(self, subset: Sequence[int]) -> tuple:
        m = self.space.module.module_dim
        start = self.space.index(subset, 0)
        return self.coords[start : start + m]

    def is_zero(self) -> bool:
        return not any(self.coords)


def one_cochain_matrix(c: Cochain) -> RationalMatrix:
    """A 1-cochain as the m x n matrix whose column i is its value on e_i."""
    if c.degree != 1:
        raise UsageError("only 1-cochains are linear maps")
    n, m = c.space.algebra.dim, c.space.module.module_dim
    return RationalMatrix.from_columns([c.coords[i * m : (i + 1) * m] for i in range(n)], m)


def cochain_from_matrix(g: LieAlgebra, r: Representation, delta: RationalMatrix) -> Cochain:
    """Inverse of :func:`one_cochain_matrix`."""
    space = CochainSpace(g, r, 1)
    if delta.shape != (r.module_dim, g.dim):
        raise UsageError(f"linear map has shape {delta.shape}, expected {(r.module_dim, g.dim)}")
    return Cochain(space, tuple(x for j in range(g.dim) for x in delta.column(j)))


def ce_differential(g: LieAlgebra, r: Representation, k: int) -> RationalMatrix:
    """Matrix of D: C^k(g, V) -> C^{k+1}(g, V) in the subset-major basis."""
    if k < 0:
        raise UsageError("degree must be non-negative")
    if r.algebra != g:
        raise UsageError("representation belongs to a different algebra")
    cache = r.__dict__.setdefault("_ce_cache", {})
    if k in cache:
        return cache[k]
    n, m = g.dim, r.module_dim
    src = subset_index(n, k)
    rows_t = subsets(n, k + 1)
    ncols = len(src) * m
    body = [[_ZERO] * ncols for _ in range(len(rows_t) * m)]
    c = g.structure_constants
    for t_idx, t in enumerate(rows_t):
        base_row = t_idx * m
        for i, ti in enumerate(t):
            s = t[:i] + t[i + 1 :]
            col0 = src[s] * m
            sign = -1 if i % 2 else 1
            act = r.action[ti]
            for b in range(m):
                row = body[base_row + b]
                for a in range(m):
                    x = act[b, a]
                    if x:
                        row[col0 + a] += sign * x
        for i in range(len(t)):
            for j in range(i + 1, len(t)):
                rest = tuple(x for p, x in enumerate(t) if p != i and p != j)
                sign = -1 if (i + j) % 2 else 1
                for l, coeff in enumerate(c[t[i]][t[j]]):
                    if not coeff:
                        continue
                    sgn, s = sort_with_sign((l,) + rest)
                    if not sgn:
                        continue
                    col0 = src[s] * m
                    f = sign * sgn * coeff
                    for a in range(m):
                        body[base_row + a][col0 + a] += f
    d = RationalMatrix(body, len(rows_t) * m, ncols)
    cache[k] = d
    return d


@dataclass(frozen=True)
class CohomologyResult:
    """H^k with canonical cocycle representatives of a basis."""

    degree: int
    dim: int
    z_dim: int
    b_dim: int
    representatives: tuple
    cocycles: Subspace
    coboundaries: Subspace
    basis: QuotientBasis

    def class_coordinates(self, c: Cochain | Sequence) -> tuple:
        coords = c.coords if isinstance(c, Cochain) else vector(c)
        out = self.basis.coordinates(coords)
        if out is None:
            raise UsageError("cochain is not a cocycle")
        return out


def cohomology(g: LieAlgebra, r: Representation, k: int) -> CohomologyResult:
    """dim Ker D^k - dim Im D^{k-1}; H^0 is Ker D^0."""
    space = CochainSpace(g, r, k)
    z = kernel_basis(ce_differential(g, r, k))
    if k == 0:
        b = Subspace.zero(space.dim)
    else:
        b = image_basis(ce_differential(g, r, k - 1))
    basis = QuotientBasis.complement(z, b)
    reps = tuple(Cochain(space, v) for v in basis.reps)
    return CohomologyResult(k, z.dim - b.dim, z.dim, b.dim, reps, z, b, basis)


def is_cocycle(omega: Cochain) -> bool:
    sp = omega.space
    return not any(ce_differential(sp.algebra, sp.module, sp.degree).apply(omega.coords))


def coboundary_primitive(omega: Cochain) -> Cochain | None:
    """Some mu of degree k-1 with D mu = omega (free coordinates zero), or None.

    Degree-0 cochains are never coboundaries except 0, and there is no
    degree -1 space to hold a primitive; they are rejected.
    """
    sp = omega.space
    if sp.degree == 0:
        raise UsageError("degree-0 cochains have no primitive")
    d = ce_differential(sp.algebra, sp.module, sp.degree - 1)
    x = solve(d, omega.coords)
    if x is None:
        return None
    return Cochain(CochainSpace(sp.algebra, sp.module, sp.degree - 1), x)


def cochain(g: LieAlgebra, r: Representation, k: int, values: Mapping[tuple, Sequence] | None = None) -> Cochain:
    """Convenience constructor from ``{subset: value vector}``."""
    space = CochainSpace(g, r, k)
    coords = [_ZERO] * space.dim
    for s, val in (values or {}).items():
        sgn, key = sort_with_sign(s)
        if not sgn:
            raise UsageError(f"repeated index in {s}")
        start = space.index(key, 0)
        for a, x in enumerate(vector(val)):
            coords[start + a] += sgn * x
    return Cochain(space, tuple(coords))
