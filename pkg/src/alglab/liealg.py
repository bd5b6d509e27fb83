"""Finite-dimensional Lie algebras and their representations.

A Lie algebra is given by structure constants ``c[i][j][k]`` with
``[e_i, e_j] = sum_k c[i][j][k] e_k``.  A representation stores one action
matrix per basis element.  Both are validated exactly when constructed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from ._multiindex import subset_index, subsets
from .errors import InvalidStructureError, PreconditionError, UsageError
from .exactla import (
    Fraction,
    RationalMatrix,
    Subspace,
    as_rational,
    block_diag,
    kernel_basis,
    vector,
    vstack,
)

__all__ = [
    "LieAlgebra",
    "Representation",
    "Violation",
    "abelian",
    "adjoint_rep",
    "affine_line",
    "direct_sum_rep",
    "exterior_square_rep",
    "heisenberg",
    "invariants",
    "killing_is_nondegenerate",
    "quotient_rep",
    "semidirect",
    "semidirect_affine_rep",
    "sl2",
    "so3",
    "so3_standard_rep",
    "sub_rep",
    "trivial_rep",
    "validate",
]

_ZERO = Fraction(0)


@dataclass(frozen=True)
class Violation:
    """One failed identity: ``kind`` names it, ``indices`` locates it."""

    kind: str
    indices: tuple
    value: Fraction = _ZERO

    def as_dict(self) -> dict:
        return {"kind": self.kind, "indices": list(self.indices), "value": str(self.value)}


def _normalize_constants(constants) -> tuple:
    c = tuple(tuple(tuple(as_rational(x) for x in row) for row in plane) for plane in constants)
    n = len(c)
    if any(len(plane) != n or any(len(row) != n for row in plane) for plane in c):
        raise UsageError(f"structure constants must form an {n}x{n}x{n} table")
    return c


def validate(g) -> list[Violation]:
    """All antisymmetry and Jacobi violations of a structure-constant table.

    ``g`` may be a :class:`LieAlgebra` or a raw n x n x n table.  An empty
    list means the table defines a Lie algebra.
    """
    c = g.structure_constants if isinstance(g, LieAlgebra) else _normalize_constants(g)
    n = len(c)
    report: list[Violation] = []
    for i in range(n):
        for j in range(i, n):
            for k in range(n):
                s = c[i][j][k] + c[j][i][k]
                if s:
                    report.append(Violation("antisymmetry", (i, j, k), s))
    if report:
        return report
    for i in range(n):
        for j in range(i + 1, n):
            for l in range(j + 1, n):
                # [[e_i,e_j],e_l] + [[e_j,e_l],e_i] + [[e_l,e_i],e_j]
                for k in range(n):
                    s = _ZERO
                    for a, b, d in ((i, j, l), (j, l, i), (l, i, j)):
                        for p in range(n):
                            x = c[a][b][p]
                            if x:
                                s += x * c[p][d][k]
                    if s:
                        report.append(Violation("jacobi", (i, j, l, k), s))
    return report


class LieAlgebra:
    """Lie algebra over Q from structure constants; validated on construction."""

    def __init__(self, structure_constants, name: str | None = None, *, check: bool = True):
        self.structure_constants = _normalize_constants(structure_constants)
        self.dim = len(self.structure_constants)
        self.name = name
        if check:
            report = validate(self.structure_constants)
            if report:
                raise InvalidStructureError(
                    f"structure constants of {name or 'algebra'} violate {report[0].kind} at {report[0].indices}",
                    report,
                )
        self._ad: tuple[RationalMatrix, ...] | None = None

    @classmethod
    def from_brackets(cls, dim: int, brackets: Mapping[tuple[int, int], Sequence], name: str | None = None) -> LieAlgebra:
        """Build from the nonzero brackets ``{(i, j): coords of [e_i, e_j]}`` with i < j."""
        c = [[[_ZERO] * dim for _ in range(dim)] for _ in range(dim)]
        for (i, j), coords in brackets.items():
            vec = vector(coords)
            if len(vec) != dim or i == j:
                raise UsageError(f"bad bracket entry {(i, j)}")
            for k, x in enumerate(vec):
                c[i][j][k] = x
                c[j][i][k] = -x
        return cls(c, name)

    def __eq__(self, other) -> bool:
        return isinstance(other, LieAlgebra) and self.structure_constants == other.structure_constants

    def __hash__(self) -> int:
        return hash(self.structure_constants)

    def __repr__(self) -> str:
        return f"LieAlgebra({self.name or 'unnamed'}, dim={self.dim})"

    def bracket_basis(self, i: int, j: int) -> tuple:
        return self.structure_constants[i][j]

    def bracket(self, u: Sequence, v: Sequence) -> tuple:
        u, v = vector(u), vector(v)
        out = [_ZERO] * self.dim
        for i, a in enumerate(u):
            if not a:
                continue
            for j, b in enumerate(v):
                if not b:
                    continue
                ab = a * b
                for k, x in enumerate(self.structure_constants[i][j]):
                    if x:
                        out[k] += ab * x
        return tuple(out)

    def ad(self, i: int) -> RationalMatrix:
        """Matrix of ad_{e_i}; column j holds the coordinates of [e_i, e_j]."""
        if self._ad is None:
            n = self.dim
            c = self.structure_constants
            self._ad = tuple(
                RationalMatrix([[c[a][j][k] for j in range(n)] for k in range(n)], n, n) for a in range(n)
            )
        return self._ad[i]

    def ad_vector(self, u: Sequence) -> RationalMatrix:
        out = RationalMatrix.zeros(self.dim, self.dim)
        for i, a in enumerate(vector(u)):
            if a:
                out = out + self.ad(i).scale(a)
        return out

    def killing_form(self) -> RationalMatrix:
        n = self.dim
        ads = [self.ad(i) for i in range(n)]
        return RationalMatrix([[(ads[i] @ ads[j]).trace() for j in range(n)] for i in range(n)], n, n)

    def change_basis(self, p: RationalMatrix, name: str | None = None) -> LieAlgebra:
        """Same algebra in the basis whose vectors are the columns of ``p``."""
        n = self.dim
        if p.shape != (n, n) or not p.is_invertible():
            raise UsageError("basis change must be an invertible n x n matrix")
        pinv = p.inverse()
        cols = p.column_list()
        c = [[list(pinv.apply(self.bracket(cols[i], cols[j]))) for j in range(n)] for i in range(n)]
        return LieAlgebra(c, name or self.name)

    def is_morphism_to(self, other: LieAlgebra, a: RationalMatrix) -> list[Violation]:
        """Basis pairs (i, j) where a[e_i, e_j] != [a e_i, a e_j], one entry per bad component."""
        out = []
        cols = a.column_list()
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                lhs = a.apply(self.bracket_basis(i, j))
                rhs = other.bracket(cols[i], cols[j])
                for k, (x, y) in enumerate(zip(lhs, rhs)):
                    if x != y:
                        out.append(Violation("bracket", (i, j, k), x - y))
        return out

    def direct_sum(self, other: LieAlgebra) -> LieAlgebra:
        n, m = self.dim, other.dim
        t = n + m
        c = [[[_ZERO] * t for _ in range(t)] for _ in range(t)]
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    c[i][j][k] = self.structure_constants[i][j][k]
        for i in range(m):
            for j in range(m):
                for k in range(m):
                    c[n + i][n + j][n + k] = other.structure_constants[i][j][k]
        return LieAlgebra(c, f"{self.name}+{other.name}")


class Representation:
    """Action of a Lie algebra on Q^module_dim, one matrix per basis element."""

    def __init__(self, algebra: LieAlgebra, action: Sequence, name: str | None = None, *, module_dim: int | None = None, check: bool = True):
        self.algebra = algebra
        mats = [a if isinstance(a, RationalMatrix) else RationalMatrix(a) for a in action]
        if len(mats) != algebra.dim:
            raise UsageError(f"need {algebra.dim} action matrices, got {len(mats)}")
        if module_dim is None:
            if not mats:
                raise UsageError("module_dim is required for a zero-dimensional algebra")
            module_dim = mats[0].rows
        fixed = []
        for a in mats:
            if a.rows == 0 and module_dim == 0:
                a = RationalMatrix.zeros(0, 0)
            if a.shape != (module_dim, module_dim):
                raise UsageError(f"action matrix of shape {a.shape}, expected {module_dim}x{module_dim}")
            fixed.append(a)
        self.action = tuple(fixed)
        self.module_dim = module_dim
        self.name = name
        if check:
            report = self.violations()
            if report:
                raise InvalidStructureError(
                    f"action of {name or 'representation'} is not a Lie algebra morphism at {report[0].indices}",
                    report,
                )

    def __repr__(self) -> str:
        return f"Representation({self.name or 'unnamed'}, {self.algebra!r}, module_dim={self.module_dim})"

    def violations(self) -> list[Violation]:
        """(i, j, row, col) where action[[e_i,e_j]] != [action e_i, action e_j]."""
        out = []
        n = self.algebra.dim
        for i in range(n):
            for j in range(i + 1, n):
                lhs = self.act(self.algebra.bracket_basis(i, j))
                ai, aj = self.action[i], self.action[j]
                rhs = ai @ aj - aj @ ai
                if lhs != rhs:
                    for r in range(self.module_dim):
                        for s in range(self.module_dim):
                            d = lhs[r, s] - rhs[r, s]
                            if d:
                                out.append(Violation("morphism", (i, j, r, s), d))
        return out

    def act(self, u: Sequence) -> RationalMatrix:
        out = RationalMatrix.zeros(self.module_dim, self.module_dim)
        for i, a in enumerate(vector(u)):
            if a:
                out = out + self.action[i].scale(a)
        return out

    def is_trivial(self) -> bool:
        return all(a.is_zero() for a in self.action)

    def conjugate(self, q: RationalMatrix) -> Representation:
        """Same module in the basis given by the columns of ``q``."""
        qinv = q.inverse()
        return Representation(self.algebra, [qinv @ a @ q for a in self.action], self.name, module_dim=self.module_dim)

    def pull_back(self, algebra: LieAlgebra, phi: RationalMatrix) -> Representation:
        """Representation of ``algebra`` through the morphism ``phi``: algebra -> self.algebra."""
        cols = phi.column_list()
        return Representation(algebra, [self.act(c) for c in cols], self.name, module_dim=self.module_dim)


# -- catalog ---------------------------------------------------------------

def abelian(n: int) -> LieAlgebra:
    return LieAlgebra([[[0] * n for _ in range(n)] for _ in range(n)], f"abelian{n}")


def sl2() -> LieAlgebra:
    """Basis (h, e, f) with [h,e] = 2e, [h,f] = -2f, [e,f] = h."""
    return LieAlgebra.from_brackets(3, {(0, 1): (0, 2, 0), (0, 2): (0, 0, -2), (1, 2): (1, 0, 0)}, "sl2")


def so3() -> LieAlgebra:
    """Basis (L1, L2, L3) with [L1,L2] = L3 and cyclic."""
    return LieAlgebra.from_brackets(3, {(0, 1): (0, 0, 1), (1, 2): (1, 0, 0), (0, 2): (0, -1, 0)}, "so3")


def heisenberg() -> LieAlgebra:
    """Basis (x, y, z) with [x, y] = z."""
    return LieAlgebra.from_brackets(3, {(0, 1): (0, 0, 1)}, "heisenberg")


def affine_line() -> LieAlgebra:
    """Two-dimensional nonabelian algebra, [x, y] = y."""
    return LieAlgebra.from_brackets(2, {(0, 1): (0, 1)}, "aff1")


def semidirect(d: RationalMatrix) -> LieAlgebra:
    """Q x_d Q^k: basis (x, v_1..v_k) with [x, v] = d v and [v, v'] = 0."""
    k = d.rows
    n = k + 1
    brackets = {}
    for j in range(k):
        col = d.column(j)
        if any(col):
            brackets[(0, j + 1)] = (0,) + col
    return LieAlgebra.from_brackets(n, brackets, f"semidirect{k}")


def semidirect_affine_rep(g: LieAlgebra) -> Representation:
    """Affine action of ``semidirect(d)`` on Q^k + Q (x acts by d, v_i translates by e_i)."""
    n = g.dim
    k = n - 1
    d = RationalMatrix([[g.structure_constants[0][j + 1][i + 1] for j in range(k)] for i in range(k)], k, k)
    x_act = block_diag([d, RationalMatrix.zeros(1, 1)])
    mats = [x_act]
    for i in range(k):
        m = [[0] * (k + 1) for _ in range(k + 1)]
        m[i][k] = 1
        mats.append(RationalMatrix(m))
    return Representation(g, mats, "affine", module_dim=k + 1)


def trivial_rep(g: LieAlgebra, m: int) -> Representation:
    return Representation(g, [RationalMatrix.zeros(m, m)] * g.dim, f"trivial{m}", module_dim=m)


def so3_standard_rep(g: LieAlgebra | None = None) -> Representation:
    """Defining 3-dimensional action of so3 by infinitesimal rotations."""
    g = g or so3()
    l1 = RationalMatrix([[0, 0, 0], [0, 0, -1], [0, 1, 0]])
    l2 = RationalMatrix([[0, 0, 1], [0, 0, 0], [-1, 0, 0]])
    l3 = RationalMatrix([[0, -1, 0], [1, 0, 0], [0, 0, 0]])
    return Representation(g, [l1, l2, l3], "standard", module_dim=3)


def direct_sum_rep(a: Representation, b: Representation) -> Representation:
    if a.algebra != b.algebra:
        raise UsageError("direct sum of representations of different algebras")
    return Representation(
        a.algebra,
        [block_diag([x, y]) for x, y in zip(a.action, b.action)],
        f"{a.name}+{b.name}",
        module_dim=a.module_dim + b.module_dim,
    )


def adjoint_rep(g: LieAlgebra) -> Representation:
    return Representation(g, [g.ad(i) for i in range(g.dim)], "adjoint", module_dim=g.dim)


def exterior_square_rep(r: Representation) -> Representation:
    """Induced action on the second exterior power, basis e_a ^ e_b for a < b (lexicographic)."""
    m = r.module_dim
    pairs = subsets(m, 2)
    index = subset_index(m, 2)
    size = len(pairs)
    mats = []
    for act in r.action:
        cols = []
        for a, b in pairs:
            col = [_ZERO] * size
            # u.(a^b) = (u.a)^b + a^(u.b)
            for c in range(m):
                x = act[c, a]
                if x and c != b:
                    key, sgn = ((c, b), 1) if c < b else ((b, c), -1)
                    col[index[key]] += sgn * x
                y = act[c, b]
                if y and c != a:
                    key, sgn = ((a, c), 1) if a < c else ((c, a), -1)
                    col[index[key]] += sgn * y
            cols.append(col)
        mats.append(RationalMatrix.from_columns(cols, size))
    return Representation(r.algebra, mats, f"wedge2({r.name})", module_dim=size)


def invariants(r: Representation) -> Subspace:
    """Common kernel of all action matrices."""
    if r.algebra.dim == 0:
        return Subspace.full(r.module_dim)
    return kernel_basis(vstack(list(r.action), r.module_dim))


def killing_is_nondegenerate(g: LieAlgebra) -> bool:
    return g.killing_form().rank() == g.dim


def _check_invariant(r: Representation, u: Subspace) -> None:
    if u.ambient_dim != r.module_dim:
        raise UsageError("subspace lives in the wrong ambient space")
    for i, a in enumerate(r.action):
        for v in u.vectors():
            if not u.contains(a.apply(v)):
                raise PreconditionError(f"subspace is not invariant under basis element {i}")


def quotient_rep(r: Representation, u: Subspace) -> tuple[Representation, RationalMatrix]:
    """Induced action on V/U together with the projection V -> V/U.

    Quotient coordinates are the non-pivot coordinates of the RREF basis of U:
    a vector is reduced modulo U and those coordinates are read off.
    """
    _check_invariant(r, u)
    m = r.module_dim
    pivots = set(u.pivots)
    free = [j for j in range(m) if j not in pivots]
    proj_cols = []
    for j in range(m):
        e = [0] * m
        e[j] = 1
        red = u.reduce(e)
        proj_cols.append([red[f] for f in free])
    proj = RationalMatrix.from_columns(proj_cols, len(free))
    section = RationalMatrix.from_columns(
        [[1 if i == f else 0 for i in range(m)] for f in free], m
    )
    mats = [proj @ a @ section for a in r.action]
    rep = Representation(r.algebra, mats, f"{r.name}/U", module_dim=len(free))
    return rep, proj


def sub_rep(r: Representation, u: Subspace) -> tuple[Representation, RationalMatrix]:
    """Restricted action on an invariant U together with the inclusion U -> V.

    Coordinates on U are the coefficients in its RREF basis, i.e. the values at
    the pivot columns.
    """
    _check_invariant(r, u)
    incl = u.basis.T
    piv = u.pivots
    mats = [(a @ incl).submatrix(piv, list(range(u.dim))) for a in r.action]
    rep = Representation(r.algebra, mats, f"{r.name}|U", module_dim=u.dim)
    return rep, incl

