"""Lie bialgebra layer: multivectors, Schouten bracket, compatible pairs.

Multivectors of degree k live on the lexicographic k-subset basis of
Lambda^k g.  The Schouten bracket on decomposables is

    [u_1..u_p, v_1..v_q] = sum_{i,j} (-1)^(i+j) [u_i, v_j] ^ u_1..^u_i..u_p ^ v_1..^v_j..v_q

so ``[u, P]`` is the adjoint action on P, and any degree-0 argument gives 0.
A cobracket map Omega: g -> Lambda^2 g is stored as its C(n,2) x n matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Mapping, Sequence

from . import ce
from ._multiindex import sort_with_sign, subset_index, subsets
from .errors import ConsistencyError, PreconditionError, UsageError
from .exactla import Fraction, RationalMatrix, vector
from .liealg import LieAlgebra, Violation, adjoint_rep, exterior_square_rep, validate

__all__ = [
    "CobracketMap",
    "CompatibilityReport",
    "DualBracketReport",
    "MultiVector",
    "coboundary_detect",
    "compatible_pair_check",
    "dual_bracket",
    "extend_derivation",
    "is_cocycle_L2",
    "pairs_equivalent",
    "schouten",
]

MAX_DEGREE = 3
_ZERO = Fraction(0)


@dataclass(frozen=True)
class MultiVector:
    algebra: LieAlgebra
    degree: int
    coords: tuple = field(default=())

    def __post_init__(self) -> None:
        if not 0 <= self.degree <= MAX_DEGREE:
            raise UsageError(f"multivector degree must lie in 0..{MAX_DEGREE}, got {self.degree}")
        object.__setattr__(self, "coords", vector(self.coords))
        if len(self.coords) != comb(self.algebra.dim, self.degree):
            raise UsageError(
                f"degree-{self.degree} multivector on a {self.algebra.dim}-dim algebra needs "
                f"{comb(self.algebra.dim, self.degree)} coordinates, got {len(self.coords)}"
            )

    @classmethod
    def zero(cls, g: LieAlgebra, degree: int) -> MultiVector:
        return cls(g, degree, (_ZERO,) * comb(g.dim, degree))

    @classmethod
    def from_terms(cls, g: LieAlgebra, degree: int, terms: Mapping[tuple, object]) -> MultiVector:
        """Build from ``{(i, j, ..): coefficient}``; unsorted index tuples pick up their sign."""
        idx = subset_index(g.dim, degree)
        coords = [_ZERO] * len(idx)
        for key, c in terms.items():
            if len(key) != degree:
                raise UsageError(f"term {key} does not have degree {degree}")
            if any(not 0 <= i < g.dim for i in key):
                raise UsageError(f"term {key} refers to a missing basis vector")
            sgn, s = sort_with_sign(key)
            if sgn:
                coords[idx[s]] += sgn * vector([c])[0]
        return cls(g, degree, tuple(coords))

    def terms(self) -> dict[tuple, Fraction]:
        return {s: c for s, c in zip(subsets(self.algebra.dim, self.degree), self.coords) if c}

    def is_zero(self) -> bool:
        return not any(self.coords)

    def _like(self, other: MultiVector) -> None:
        if other.algebra != self.algebra or other.degree != self.degree:
            raise UsageError("multivectors differ in algebra or degree")

    def __add__(self, other: MultiVector) -> MultiVector:
        self._like(other)
        return MultiVector(self.algebra, self.degree, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: MultiVector) -> MultiVector:
        self._like(other)
        return MultiVector(self.algebra, self.degree, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> MultiVector:
        return MultiVector(self.algebra, self.degree, tuple(-a for a in self.coords))

    def scale(self, c) -> MultiVector:
        c = vector([c])[0]
        return MultiVector(self.algebra, self.degree, tuple(c * a for a in self.coords))

    def wedge(self, other: MultiVector) -> MultiVector:
        if other.algebra != self.algebra:
            raise UsageError("multivectors live on different algebras")
        deg = self.degree + other.degree
        if deg > MAX_DEGREE:
            raise UsageError(f"wedge would have degree {deg} > {MAX_DEGREE}")
        terms: dict[tuple, Fraction] = {}
        for s, a in self.terms().items():
            for t, b in other.terms().items():
                terms[s + t] = terms.get(s + t, _ZERO) + a * b
        return MultiVector.from_terms(self.algebra, deg, terms)


def basis_vector(g: LieAlgebra, i: int) -> MultiVector:
    return MultiVector.from_terms(g, 1, {(i,): 1})


def _schouten_terms(g: LieAlgebra, s: tuple, t: tuple) -> dict[tuple, Fraction]:
    out: dict[tuple, Fraction] = {}
    c = g.structure_constants
    for i, ui in enumerate(s):
        rest_s = s[:i] + s[i + 1 :]
        for j, vj in enumerate(t):
            rest_t = t[:j] + t[j + 1 :]
            sign = -1 if (i + j) % 2 else 1
            for k, coeff in enumerate(c[ui][vj]):
                if coeff:
                    key = (k,) + rest_s + rest_t
                    out[key] = out.get(key, _ZERO) + sign * coeff
    return out


def schouten(p: MultiVector, q: MultiVector) -> MultiVector:
    """Schouten bracket, degree |p| + |q| - 1 (capped at 3)."""
    if p.algebra != q.algebra:
        raise UsageError("multivectors live on different algebras")
    deg = p.degree + q.degree - 1
    if deg > MAX_DEGREE:
        raise UsageError(f"Schouten bracket would have degree {deg} > {MAX_DEGREE}")
    if deg < 0:
        raise UsageError("Schouten bracket of two scalars is undefined")
    g = p.algebra
    if p.degree == 0 or q.degree == 0:
        return MultiVector.zero(g, deg)
    terms: dict[tuple, Fraction] = {}
    for s, a in p.terms().items():
        for t, b in q.terms().items():
            for key, c in _schouten_terms(g, s, t).items():
                terms[key] = terms.get(key, _ZERO) + a * b * c
    return MultiVector.from_terms(g, deg, terms)


@dataclass(frozen=True)
class CobracketMap:
    """Linear map Omega: g -> Lambda^2 g; column i holds Omega(e_i)."""

    algebra: LieAlgebra
    matrix: RationalMatrix

    def __post_init__(self) -> None:
        m = self.matrix if isinstance(self.matrix, RationalMatrix) else RationalMatrix(self.matrix)
        object.__setattr__(self, "matrix", m)
        n = self.algebra.dim
        if m.shape != (comb(n, 2), n):
            raise UsageError(f"cobracket matrix must be {comb(n, 2)} x {n}, got {m.rows} x {m.cols}")

    @classmethod
    def zero(cls, g: LieAlgebra) -> CobracketMap:
        return cls(g, RationalMatrix.zeros(comb(g.dim, 2), g.dim))

    @classmethod
    def from_images(cls, g: LieAlgebra, images: Sequence[MultiVector]) -> CobracketMap:
        if len(images) != g.dim or any(v.degree != 2 for v in images):
            raise UsageError("need one degree-2 image per basis vector")
        return cls(g, RationalMatrix.from_columns([v.coords for v in images], comb(g.dim, 2)))

    @classmethod
    def inner(cls, mu: MultiVector) -> CobracketMap:
        """The coboundary u -> [mu, u]."""
        if mu.degree != 2:
            raise UsageError("inner cobracket needs a bivector")
        g = mu.algebra
        return cls.from_images(g, [schouten(mu, basis_vector(g, i)) for i in range(g.dim)])

    def __call__(self, u: MultiVector | Sequence) -> MultiVector:
        coords = u.coords if isinstance(u, MultiVector) else vector(u)
        return MultiVector(self.algebra, 2, self.matrix.apply(coords))

    def image(self, i: int) -> MultiVector:
        return MultiVector(self.algebra, 2, self.matrix.column(i))

    def __add__(self, other: CobracketMap) -> CobracketMap:
        return CobracketMap(self.algebra, self.matrix + other.matrix)

    def __sub__(self, other: CobracketMap) -> CobracketMap:
        return CobracketMap(self.algebra, self.matrix - other.matrix)

    def is_zero(self) -> bool:
        return self.matrix.is_zero()


def extend_derivation(omega: CobracketMap, k: int) -> RationalMatrix:
    """Omega extended to Lambda^k g -> Lambda^{k+1} g; zero on degree 0.

    Omega(A_1 ^ .. ^ A_k) = sum_i (-1)^(i+1) A_1 ^ .. ^ Omega(A_i) ^ .. ^ A_k
    """
    if k not in (0, 1, 2):
        raise UsageError("derivation extension is supported for k in {0, 1, 2}")
    g = omega.algebra
    n = g.dim
    src = subsets(n, k)
    dst = subset_index(n, k + 1)
    body = [[_ZERO] * len(src) for _ in range(len(dst))]
    if k == 0:
        return RationalMatrix(body, len(dst), len(src))
    pairs = subsets(n, 2)
    for col, s in enumerate(src):
        for pos, i in enumerate(s):
            sign = -1 if pos % 2 else 1
            for (a, b), c in zip(pairs, omega.matrix.column(i)):
                if not c:
                    continue
                sgn, key = sort_with_sign(s[:pos] + (a, b) + s[pos + 1 :])
                if sgn:
                    body[dst[key]][col] += sign * sgn * c
    return RationalMatrix(body, len(dst), len(src))


def _apply_extension(omega: CobracketMap, p: MultiVector) -> MultiVector:
    return MultiVector(omega.algebra, p.degree + 1, extend_derivation(omega, p.degree).apply(p.coords))


def _cocycle_direct(omega: CobracketMap) -> list[Violation]:
    """Omega[e_i, e_j] - [Omega e_i, e_j] - [e_i, Omega e_j] for i < j."""
    g = omega.algebra
    out = []
    for i in range(g.dim):
        ei = basis_vector(g, i)
        for j in range(i + 1, g.dim):
            ej = basis_vector(g, j)
            lhs = omega(g.bracket_basis(i, j))
            rhs = schouten(omega.image(i), ej) + schouten(ei, omega.image(j))
            diff = lhs - rhs
            if not diff.is_zero():
                k = next(k for k, x in enumerate(diff.coords) if x)
                out.append(Violation("cocycle", (i, j, k), diff.coords[k]))
    return out


def _cocycle_ce(omega: CobracketMap) -> bool:
    g = omega.algebra
    rep = exterior_square_rep(adjoint_rep(g))
    return ce.is_cocycle(ce.cochain_from_matrix(g, rep, omega.matrix))


def is_cocycle_L2(g: LieAlgebra, omega: CobracketMap) -> bool:
    """Cocycle test by the direct bracket identity, cross-checked against the CE route."""
    if omega.algebra != g:
        raise UsageError("cobracket belongs to a different algebra")
    direct = not _cocycle_direct(omega)
    if direct != _cocycle_ce(omega):
        raise ConsistencyError("cocycle routes disagree: direct bracket identity versus Chevalley-Eilenberg check")
    return direct


@dataclass(frozen=True)
class CompatibilityReport:
    cocycle: bool
    residual_zero: bool
    residual: tuple  # per basis vector u, a degree-3 MultiVector
    schouten_lambda: MultiVector
    coboundary: bool
    triangular: bool
    verdict: str
    first_violation: tuple | None = None

    @property
    def passed(self) -> bool:
        return self.verdict == "PASS"


def _residual(lam: MultiVector, omega: CobracketMap) -> tuple:
    """u -> [1/2 [L, L] + Omega(L), u] + Omega^2(u)."""
    g = lam.algebra
    x = schouten(lam, lam).scale(Fraction(1, 2)) + _apply_extension(omega, lam)
    omega2 = extend_derivation(omega, 2) @ omega.matrix
    out = []
    for i in range(g.dim):
        r = schouten(x, basis_vector(g, i))
        out.append(r + MultiVector(g, 3, omega2.column(i)))
    return tuple(out)


def _d_star_squared(lam: MultiVector, omega: CobracketMap) -> tuple:
    """d*^2 on degree-1 basis vectors, with d* = [Lambda, .] + Omega in each degree."""
    g = lam.algebra
    out = []
    for i in range(g.dim):
        e = basis_vector(g, i)
        d1 = schouten(lam, e) + omega(e)
        out.append(schouten(lam, d1) + _apply_extension(omega, d1))
    return tuple(out)


def compatible_pair_check(g: LieAlgebra, lam: MultiVector, omega: CobracketMap) -> CompatibilityReport:
    """Compatibility of (Lambda, Omega): cocycle condition plus vanishing of the degree-3 residual."""
    if lam.degree != 2:
        raise UsageError("Lambda must be a bivector")
    if lam.algebra != g or omega.algebra != g:
        raise UsageError("Lambda and Omega must live on the given algebra")
    cocycle = is_cocycle_L2(g, omega)
    residual = _residual(lam, omega)
    if cocycle and residual != _d_star_squared(lam, omega):
        raise ConsistencyError("compatibility residual disagrees with d*^2 on a cocycle")
    first = None
    for i, r in enumerate(residual):
        if not r.is_zero():
            k = next(k for k, x in enumerate(r.coords) if x)
            first = (i,) + subsets(g.dim, 3)[k]
            break
    if not cocycle:
        first = _cocycle_direct(omega)[0].indices
    ll = schouten(lam, lam)
    mu = coboundary_detect(g, omega) if cocycle else None
    coboundary = mu is not None
    triangular = coboundary and schouten(lam + mu, lam + mu).is_zero()
    ok = cocycle and first is None
    return CompatibilityReport(cocycle, all(r.is_zero() for r in residual), residual, ll, coboundary, triangular, "PASS" if ok else "FAIL", first)


@dataclass(frozen=True)
class DualBracketReport:
    structure_constants: tuple
    algebra: LieAlgebra | None
    jacobi: bool
    violations: tuple

    @property
    def is_abelian(self) -> bool:
        return not any(x for plane in self.structure_constants for row in plane for x in row)


def dual_bracket(g: LieAlgebra, lam: MultiVector, omega: CobracketMap) -> DualBracketReport:
    """Bracket on g*: <[xi_a, xi_b]_*, e_k> = -<d* e_k, xi_a ^ xi_b>, d* = [Lambda, .] + Omega."""
    if lam.degree != 2 or lam.algebra != g or omega.algebra != g:
        raise UsageError("dual bracket needs a bivector and cobracket on g")
    n = g.dim
    idx = subset_index(n, 2)
    dstar = [(schouten(lam, basis_vector(g, k)) + omega.image(k)).coords for k in range(n)]
    c = [[[_ZERO] * n for _ in range(n)] for _ in range(n)]
    for a in range(n):
        for b in range(a + 1, n):
            for k in range(n):
                v = -dstar[k][idx[(a, b)]]
                c[a][b][k] = v
                c[b][a][k] = -v
    table = tuple(tuple(tuple(r) for r in plane) for plane in c)
    problems = validate(table)
    alg = LieAlgebra(table, name=f"{g.name or 'g'}*", check=False) if not problems else None
    return DualBracketReport(table, alg, not problems, tuple(problems))


def pairs_equivalent(
    g: LieAlgebra, p: tuple[MultiVector, CobracketMap], q: tuple[MultiVector, CobracketMap]
) -> MultiVector | None:
    """nu with Lambda' = Lambda + nu and Omega' = Omega - [nu, .], or None."""
    (lam, om), (lam2, om2) = p, q
    if lam.degree != 2 or lam2.degree != 2:
        raise UsageError("pairs need bivectors")
    nu = lam2 - lam
    if om - CobracketMap.inner(nu) == om2:
        return nu
    return None


def coboundary_detect(g: LieAlgebra, omega: CobracketMap) -> MultiVector | None:
    """mu in Lambda^2 g with Omega = [mu, .], or None when Omega is not a coboundary."""
    if not is_cocycle_L2(g, omega):
        raise PreconditionError("coboundary detection needs a cocycle")
    rep = exterior_square_rep(adjoint_rep(g))
    tau = ce.coboundary_primitive(ce.cochain_from_matrix(g, rep, omega.matrix))
    if tau is None:
        return None
    # D tau (u) = u . tau = [u, tau] = -[tau, u]
    mu = MultiVector(g, 2, tuple(-x for x in tau.coords))
    if CobracketMap.inner(mu) != omega:
        raise ConsistencyError("recovered bivector does not reproduce the cobracket")
    return mu
