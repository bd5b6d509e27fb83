"""Discrete flat transitive Lie algebroids over a presentation 2-complex.

Each vertex x carries a Lie algebra g_x acting on V_x; each edge e: x -> y
carries a Lie algebra isomorphism A_e: g_x -> g_y and an intertwiner
T_e: V_x -> V_y.  A degree-1 cochain is a pair (delta, theta):

* ``delta[x]``: linear map g_x -> V_x (an m_x x n_x matrix), the vertical part;
* ``theta[e]``: a vector of V_y for e: x -> y, the horizontal part.

It is a cocycle when

1. every delta[x] is a Chevalley-Eilenberg 1-cocycle,
2. ``T_e delta_x(u) - delta_y(A_e u) = (A_e u) . theta_e`` for every edge and u,
3. theta accumulates to zero around every cell (see :mod:`alglab.basecomplex`).

Coboundaries are ``delta_x(u) = u . mu_x`` and ``theta_e = T_e mu_src - mu_dst``.

Mixed-cochain coordinates: the delta blocks vertex by vertex (each in the
Chevalley-Eilenberg C^1 ordering, index ``i * m + a`` = component a of
delta(e_i)), followed by the theta blocks edge by edge.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from . import ce
from .basecomplex import BaseComplex, LocalSystem, h_dims, word_accumulator
from .errors import InvalidStructureError, PreconditionError, UsageError
from .exactla import (
    Fraction,
    QuotientBasis,
    RationalMatrix,
    Subspace,
    image_basis,
    intersect,
    kernel_basis,
    kron,
    preimage,
    solve,
    vector,
)
from .liealg import (
    LieAlgebra,
    Representation,
    Violation,
    invariants,
    quotient_rep,
    sub_rep,
)

__all__ = [
    "AlgebroidModel",
    "H1Report",
    "ImageComparisonReport",
    "KernelTheoremReport",
    "KernelUpsilon",
    "LesReport",
    "LocalClass",
    "MixedCochain",
    "SixStatementsReport",
    "coboundary",
    "compare_images",
    "h1",
    "is_cocycle",
    "kernel_upsilon",
    "localize",
    "rho_pullback",
    "validate_model",
    "verify_kernel_theorem",
    "verify_les",
    "verify_six_statements",
]

_ZERO = Fraction(0)


class AlgebroidModel:
    """Flat discrete transitive Lie algebroid with a representation."""

    def __init__(
        self,
        base: BaseComplex,
        algebras: Sequence[LieAlgebra],
        reps: Sequence[Representation],
        edge_maps: Sequence[tuple[RationalMatrix, RationalMatrix]],
        *,
        check: bool = True,
    ):
        self.base = base
        self.algebras = tuple(algebras)
        self.reps = tuple(reps)
        self.edge_maps = tuple(
            (a if isinstance(a, RationalMatrix) else RationalMatrix(a), t if isinstance(t, RationalMatrix) else RationalMatrix(t))
            for a, t in edge_maps
        )
        if len(self.algebras) != base.vertex_count or len(self.reps) != base.vertex_count:
            raise UsageError("need one algebra and one representation per vertex")
        if len(self.edge_maps) != len(base.edges):
            raise UsageError(f"need one (A, T) pair per edge, got {len(self.edge_maps)}")
        for x, (g, r) in enumerate(zip(self.algebras, self.reps)):
            if r.algebra != g:
                raise UsageError(f"representation at vertex {x} belongs to a different algebra")
        if check:
            report = validate_model(self)
            if report:
                raise InvalidStructureError(f"invalid algebroid model: {report[0].kind} at {report[0].indices}", report)

    @classmethod
    def uniform(cls, base: BaseComplex, rep: Representation, edge_maps: Sequence | None = None, **kw) -> AlgebroidModel:
        """Same (g, V) at every vertex; identity transports when ``edge_maps`` is None."""
        g = rep.algebra
        if edge_maps is None:
            ident = (RationalMatrix.identity(g.dim), RationalMatrix.identity(rep.module_dim))
            edge_maps = [ident] * len(base.edges)
        nv = base.vertex_count
        return cls(base, [g] * nv, [rep] * nv, edge_maps, **kw)

    def __repr__(self) -> str:
        return (
            f"AlgebroidModel(vertices={self.base.vertex_count}, edges={len(self.base.edges)}, "
            f"cells={len(self.base.cells)}, dims={[(g.dim, r.module_dim) for g, r in zip(self.algebras, self.reps)]})"
        )

    # -- layout ---------------------------------------------------------
    @cached_property
    def _delta_offsets(self) -> tuple[int, ...]:
        out, k = [], 0
        for g, r in zip(self.algebras, self.reps):
            out.append(k)
            k += g.dim * r.module_dim
        return tuple(out + [k])

    @cached_property
    def _theta_offsets(self) -> tuple[int, ...]:
        out, k = [], self._delta_offsets[-1]
        for _, b in self.base.edges:
            out.append(k)
            k += self.reps[b].module_dim
        return tuple(out + [k])

    @property
    def cochain_dim(self) -> int:
        return self._theta_offsets[-1]

    @cached_property
    def _mu_offsets(self) -> tuple[int, ...]:
        out, k = [], 0
        for r in self.reps:
            out.append(k)
            k += r.module_dim
        return tuple(out + [k])

    def delta_slice(self, x: int) -> slice:
        return slice(self._delta_offsets[x], self._delta_offsets[x + 1])

    def theta_slice(self, e: int) -> slice:
        return slice(self._theta_offsets[e], self._theta_offsets[e + 1])

    def to_coords(self, w: MixedCochain) -> tuple:
        self._check_shape(w)
        out: list[Fraction] = []
        for d in w.delta:
            for j in range(d.cols):
                out.extend(d.column(j))
        for t in w.theta:
            out.extend(t)
        return tuple(out)

    def from_coords(self, coords: Sequence) -> MixedCochain:
        v = vector(coords)
        if len(v) != self.cochain_dim:
            raise UsageError(f"expected {self.cochain_dim} coordinates, got {len(v)}")
        delta = []
        for x, (g, r) in enumerate(zip(self.algebras, self.reps)):
            block = v[self.delta_slice(x)]
            m = r.module_dim
            delta.append(RationalMatrix.from_columns([block[i * m : (i + 1) * m] for i in range(g.dim)], m))
        theta = [v[self.theta_slice(e)] for e in range(len(self.base.edges))]
        return MixedCochain(tuple(delta), tuple(theta))

    def zero_cochain(self) -> MixedCochain:
        return self.from_coords((_ZERO,) * self.cochain_dim)

    def _check_shape(self, w: MixedCochain) -> None:
        if len(w.delta) != self.base.vertex_count or len(w.theta) != len(self.base.edges):
            raise UsageError("mixed cochain does not match the model's vertex/edge counts")
        for x, d in enumerate(w.delta):
            if d.shape != (self.reps[x].module_dim, self.algebras[x].dim):
                raise UsageError(f"delta at vertex {x} has shape {d.shape}")
        for e, t in enumerate(w.theta):
            if len(t) != self.reps[self.base.edges[e][1]].module_dim:
                raise UsageError(f"theta at edge {e} has length {len(t)}")

    # -- derived data ---------------------------------------------------
    @cached_property
    def module_system(self) -> LocalSystem:
        return LocalSystem(self.base, self._uniform_dim([r.module_dim for r in self.reps]), tuple(t for _, t in self.edge_maps))

    @cached_property
    def algebra_system(self) -> LocalSystem:
        return LocalSystem(self.base, self._uniform_dim([g.dim for g in self.algebras]), tuple(a for a, _ in self.edge_maps))

    @staticmethod
    def _uniform_dim(dims: list[int]) -> int:
        if len(set(dims)) != 1:
            raise InvalidStructureError(f"fiber dimensions differ across vertices: {dims}")
        return dims[0]

    @cached_property
    def invariant_subspaces(self) -> tuple[Subspace, ...]:
        """V0_x = H^0(g_x, V_x) at every vertex."""
        return tuple(invariants(r) for r in self.reps)

    @cached_property
    def f0_model(self) -> tuple[AlgebroidModel, tuple[RationalMatrix, ...]]:
        """Model on the invariant subsystem F0 and the vertexwise inclusions F0 -> F."""
        subs = [sub_rep(r, u) for r, u in zip(self.reps, self.invariant_subspaces)]
        incl = tuple(i for _, i in subs)
        maps = []
        for e, (a, b) in enumerate(self.base.edges):
            A, T = self.edge_maps[e]
            u_b = self.invariant_subspaces[b]
            image = T @ incl[a]
            maps.append((A, image.submatrix(u_b.pivots, list(range(image.cols)))))
        return AlgebroidModel(self.base, self.algebras, [s for s, _ in subs], maps), incl

    @cached_property
    def quotient_model(self) -> tuple[AlgebroidModel, tuple[RationalMatrix, ...]]:
        """Model on F/F0 and the vertexwise projections F -> F/F0."""
        quots = [quotient_rep(r, u) for r, u in zip(self.reps, self.invariant_subspaces)]
        proj = tuple(p for _, p in quots)
        sections = self.quotient_sections
        maps = []
        for e, (a, b) in enumerate(self.base.edges):
            A, T = self.edge_maps[e]
            maps.append((A, proj[b] @ T @ sections[a]))
        return AlgebroidModel(self.base, self.algebras, [q for q, _ in quots], maps), proj

    @cached_property
    def quotient_sections(self) -> tuple[RationalMatrix, ...]:
        """Right inverses V/V0 -> V of the projections: unit vectors at the non-pivot coordinates."""
        out = []
        for u, r in zip(self.invariant_subspaces, self.reps):
            piv = set(u.pivots)
            free = [j for j in range(r.module_dim) if j not in piv]
            out.append(RationalMatrix.from_columns([[1 if i == f else 0 for i in range(r.module_dim)] for f in free], r.module_dim))
        return tuple(out)

    @cached_property
    def f0_local_system(self) -> tuple[LocalSystem, tuple[RationalMatrix, ...]]:
        """The flat bundle V0 with the reduced transports, plus inclusions into V."""
        model, incl = self.f0_model
        return model.module_system, incl

    # -- matrices -------------------------------------------------------
    @cached_property
    def cocycle_matrix(self) -> RationalMatrix:
        """Stacked vertical, mixed-edge and cell conditions; its kernel is Z^1."""
        ncols = self.cochain_dim
        rows: list[list[Fraction]] = []
        for x, (g, r) in enumerate(zip(self.algebras, self.reps)):
            d1 = ce.ce_differential(g, r, 1)
            off = self._delta_offsets[x]
            for i in range(d1.rows):
                row = [_ZERO] * ncols
                for j, val in enumerate(d1.row(i)):
                    if val:
                        row[off + j] = val
                rows.append(row)
        for e, (xa, yb) in enumerate(self.base.edges):
            A, T = self.edge_maps[e]
            gx = self.algebras[xa]
            mx, my = self.reps[xa].module_dim, self.reps[yb].module_dim
            offx, offy, offt = self._delta_offsets[xa], self._delta_offsets[yb], self._theta_offsets[e]
            for i in range(gx.dim):
                au = A.column(i)
                act = self.reps[yb].act(au)
                for b in range(my):
                    row = [_ZERO] * ncols
                    for a in range(mx):
                        row[offx + i * mx + a] += T[b, a]
                    for j, aji in enumerate(au):
                        if aji:
                            row[offy + j * my + b] -= aji
                    for c in range(my):
                        if act[b, c]:
                            row[offt + c] -= act[b, c]
                    rows.append(row)
        if self.base.cells:
            ls = self.module_system
            start = self._theta_offsets[0] if self.base.edges else ncols
            for w in self.base.cells:
                acc = word_accumulator(ls, w)
                for i in range(acc.rows):
                    row = [_ZERO] * start + list(acc.row(i))
                    rows.append(row)
        return RationalMatrix(rows, len(rows), ncols)

    @cached_property
    def coboundary_matrix(self) -> RationalMatrix:
        """mu (vertex-major) -> mixed cochain coordinates of D mu."""
        ncols = self._mu_offsets[-1]
        body = [[_ZERO] * ncols for _ in range(self.cochain_dim)]
        for x, (g, r) in enumerate(zip(self.algebras, self.reps)):
            m = r.module_dim
            off, moff = self._delta_offsets[x], self._mu_offsets[x]
            for i in range(g.dim):
                act = r.action[i]
                for a in range(m):
                    for c in range(m):
                        if act[a, c]:
                            body[off + i * m + a][moff + c] = act[a, c]
        for e, (xa, yb) in enumerate(self.base.edges):
            _, T = self.edge_maps[e]
            off = self._theta_offsets[e]
            for b in range(T.rows):
                for a in range(T.cols):
                    if T[b, a]:
                        body[off + b][self._mu_offsets[xa] + a] += T[b, a]
                body[off + b][self._mu_offsets[yb] + b] -= 1
        return RationalMatrix(body, self.cochain_dim, ncols)

    @cached_property
    def cocycles(self) -> Subspace:
        return kernel_basis(self.cocycle_matrix)

    @cached_property
    def coboundaries(self) -> Subspace:
        return image_basis(self.coboundary_matrix)

    @cached_property
    def h1_basis(self) -> QuotientBasis:
        return QuotientBasis.complement(self.cocycles, self.coboundaries)

    def fiber_cohomology(self, x: int) -> ce.CohomologyResult:
        cache = self.__dict__.setdefault("_fiber_h1", {})
        if x not in cache:
            cache[x] = ce.cohomology(self.algebras[x], self.reps[x], 1)
        return cache[x]

    def class_coordinates(self, w: MixedCochain | Sequence) -> tuple:
        coords = self.to_coords(w) if isinstance(w, MixedCochain) else vector(w)
        out = self.h1_basis.coordinates(coords)
        if out is None:
            raise PreconditionError("mixed cochain is not a cocycle")
        return out

    def localization_matrix(self, x: int) -> RationalMatrix:
        """Upsilon_x in coordinates: H^1(model) basis -> H^1(g_x, V_x) basis."""
        fib = self.fiber_cohomology(x)
        sl = self.delta_slice(x)
        cols = [fib.class_coordinates(rep[sl]) for rep in self.h1_basis.reps]
        return RationalMatrix.from_columns(cols, fib.dim)


@dataclass(frozen=True)
class MixedCochain:
    """(delta, theta): per-vertex maps g_x -> V_x and per-edge vectors in V_dst."""

    delta: tuple = field(default=())
    theta: tuple = field(default=())

    def __post_init__(self) -> None:
        object.__setattr__(self, "delta", tuple(d if isinstance(d, RationalMatrix) else RationalMatrix(d) for d in self.delta))
        object.__setattr__(self, "theta", tuple(vector(t) for t in self.theta))

    def is_zero(self) -> bool:
        return all(d.is_zero() for d in self.delta) and not any(x for t in self.theta for x in t)


def _add(model: AlgebroidModel, p: MixedCochain, q: MixedCochain, sign: int = 1) -> MixedCochain:
    a, b = model.to_coords(p), model.to_coords(q)
    return model.from_coords([x + sign * y for x, y in zip(a, b)])


def validate_model(m: AlgebroidModel) -> list[Violation]:
    """Every violated edge/cell invariant: shapes, brackets, intertwining, flatness."""
    out: list[Violation] = []
    base = m.base
    for e, (xa, yb) in enumerate(base.edges):
        A, T = m.edge_maps[e]
        gx, gy = m.algebras[xa], m.algebras[yb]
        rx, ry = m.reps[xa], m.reps[yb]
        if A.shape != (gy.dim, gx.dim):
            out.append(Violation("algebra-map-shape", (e,)))
            continue
        if T.shape != (ry.module_dim, rx.module_dim):
            out.append(Violation("transport-shape", (e,)))
            continue
        if not A.is_invertible():
            out.append(Violation("algebra-map-singular", (e,)))
        if not T.is_invertible():
            out.append(Violation("transport-singular", (e,)))
        for v in gx.is_morphism_to(gy, A):
            out.append(Violation("bracket", (e,) + v.indices, v.value))
        for i in range(gx.dim):
            lhs = T @ rx.action[i]
            rhs = ry.act(A.column(i)) @ T
            if lhs != rhs:
                diff = lhs - rhs
                r0, c0 = next((r, c) for r in range(diff.rows) for c in range(diff.cols) if diff[r, c])
                out.append(Violation("intertwining", (e, i), diff[r0, c0]))
    if out:
        return out
    if len({g.dim for g in m.algebras}) > 1 or len({r.module_dim for r in m.reps}) > 1:
        return [Violation("fiber-dimension", ())]
    for c, w in enumerate(base.cells):
        ha = _holonomy_pair(m, w)
        if ha[0] != RationalMatrix.identity(ha[0].rows):
            out.append(Violation("flatness-algebra", (c,)))
        if ha[1] != RationalMatrix.identity(ha[1].rows):
            out.append(Violation("flatness-module", (c,)))
    return out


def _holonomy_pair(m: AlgebroidModel, word) -> tuple[RationalMatrix, RationalMatrix]:
    n = m.algebras[0].dim
    d = m.reps[0].module_dim
    A = RationalMatrix.identity(n)
    T = RationalMatrix.identity(d)
    for e, s in word:
        a, t = m.edge_maps[e]
        if s > 0:
            A, T = a @ A, t @ T
        else:
            A, T = a.inverse() @ A, t.inverse() @ T
    return A, T


# -- basic operations ------------------------------------------------------

def coboundary(m: AlgebroidModel, mu: Sequence[Sequence]) -> MixedCochain:
    """D mu for per-vertex vectors mu_x in V_x."""
    if len(mu) != m.base.vertex_count:
        raise UsageError("need one vector per vertex")
    flat = []
    for x, v in enumerate(mu):
        v = vector(v)
        if len(v) != m.reps[x].module_dim:
            raise UsageError(f"mu at vertex {x} has length {len(v)}")
        flat.extend(v)
    return m.from_coords(m.coboundary_matrix.apply(flat))


def is_cocycle(m: AlgebroidModel, w: MixedCochain) -> bool:
    return not any(m.cocycle_matrix.apply(m.to_coords(w)))


def cocycle_violations(m: AlgebroidModel, w: MixedCochain) -> list[int]:
    """Row indices of the stacked condition matrix that ``w`` violates."""
    return [i for i, x in enumerate(m.cocycle_matrix.apply(m.to_coords(w))) if x]


@dataclass(frozen=True)
class VertexLocalization:
    vertex: int
    fiber_h1_dim: int
    matrix: RationalMatrix
    image_dim: int
    kernel_dim: int


@dataclass(frozen=True)
class H1Report:
    z1_dim: int
    b1_dim: int
    h1_dim: int
    representatives: tuple
    localization: tuple


def h1(m: AlgebroidModel) -> H1Report:
    z, b = m.cocycles, m.coboundaries
    reps = tuple(m.from_coords(v) for v in m.h1_basis.reps)
    loc = []
    for x in range(m.base.vertex_count):
        mat = m.localization_matrix(x)
        rank = mat.rank()
        loc.append(VertexLocalization(x, mat.rows, mat, rank, mat.cols - rank))
    return H1Report(z.dim, b.dim, z.dim - b.dim, reps, tuple(loc))


@dataclass(frozen=True)
class LocalClass:
    """Class of delta_x in H^1(g_x, V_x): the cochain and its basis coordinates."""

    vertex: int
    cochain: ce.Cochain
    coordinates: tuple

    def is_zero(self) -> bool:
        return not any(self.coordinates)


def localize(m: AlgebroidModel, w: MixedCochain, x: int) -> LocalClass:
    """Upsilon_x: restrict a cocycle to the vertical fiber at x and take its class."""
    if not is_cocycle(m, w):
        raise PreconditionError("localize expects a cocycle")
    c = ce.cochain_from_matrix(m.algebras[x], m.reps[x], w.delta[x])
    return LocalClass(x, c, m.fiber_cohomology(x).class_coordinates(c))


@dataclass(frozen=True)
class KernelUpsilon:
    dim: int
    classes: tuple
    subspace: Subspace  # in H^1(model) class coordinates


def _kernel_cocycles(m: AlgebroidModel, x: int) -> Subspace:
    """Cocycles whose delta_x is a Chevalley-Eilenberg coboundary."""
    sl = m.delta_slice(x)
    n = m.cochain_dim
    proj = RationalMatrix.from_columns(
        [[1 if j == i else 0 for j in range(n)] for i in range(sl.start, sl.stop)], n
    ).T if sl.stop > sl.start else RationalMatrix.zeros(0, n)
    fiber_b = m.fiber_cohomology(x).coboundaries
    return intersect(m.cocycles, preimage(proj, fiber_b))


def kernel_upsilon(m: AlgebroidModel, x: int) -> KernelUpsilon:
    k = _kernel_cocycles(m, x)
    qb = QuotientBasis.complement(k, m.coboundaries)
    classes = tuple(m.from_coords(v) for v in qb.reps)
    h = m.h1_basis.dim
    sub = Subspace.span([m.class_coordinates(v) for v in qb.reps], h)
    return KernelUpsilon(qb.dim, classes, sub)


def rho_pullback(m: AlgebroidModel, theta0: Sequence[Sequence]) -> MixedCochain:
    """(delta = 0, theta = theta0) for a V0-valued twisted 1-cocycle theta0 (in V coordinates)."""
    if len(theta0) != len(m.base.edges):
        raise UsageError("need one vector per edge")
    theta = [vector(t) for t in theta0]
    for e, t in enumerate(theta):
        dst = m.base.edges[e][1]
        if len(t) != m.reps[dst].module_dim:
            raise UsageError(f"theta at edge {e} has length {len(t)}")
        if not m.invariant_subspaces[dst].contains(t):
            raise PreconditionError(f"theta at edge {e} is not invariant-valued")
    flat = [x for t in theta for x in t]
    ls = m.module_system
    for c, w in enumerate(m.base.cells):
        if any(word_accumulator(ls, w).apply(flat)):
            raise PreconditionError(f"theta is not closed around cell {c}")
    zero = [RationalMatrix.zeros(r.module_dim, g.dim) for g, r in zip(m.algebras, m.reps)]
    return MixedCochain(tuple(zero), tuple(theta))


def _rho_of_f0_coords(m: AlgebroidModel, theta_f0: Sequence) -> MixedCochain:
    """rho pullback of a cocycle of the V0 local system given in V0 coordinates."""
    ls0, incl = m.f0_local_system
    d0 = ls0.fiber_dim
    theta = []
    for e, (_, b) in enumerate(m.base.edges):
        theta.append(incl[b].apply(theta_f0[e * d0 : (e + 1) * d0]))
    return rho_pullback(m, theta)


# -- verifications ---------------------------------------------------------

@dataclass(frozen=True)
class KernelTheoremReport:
    vertex: int
    ker_dim: int
    h1_f0: int
    h1_dim: int
    rho_matrix: RationalMatrix
    dims_equal: bool
    rho_injective: bool
    image_is_kernel: bool
    ker_f0_dim: int
    verdict: str
    failures: tuple = ()

    @property
    def passed(self) -> bool:
        return self.verdict == "PASS"


def verify_kernel_theorem(m: AlgebroidModel, x: int) -> KernelTheoremReport:
    """Ker Upsilon_x versus rho^*(H^1(base, V0)), computed by separate routes.

    Route 1 takes the preimage of the fiber coboundaries inside Z^1.  Route 2
    computes H^1 of the invariant local system on the base alone and pushes
    its representatives through rho^*.
    """
    _check_vertex(m, x)
    ker = kernel_upsilon(m, x)
    ls0, _ = m.f0_local_system
    base_h = h_dims(ls0)
    cols = [m.class_coordinates(_rho_of_f0_coords(m, rep)) for rep in base_h.representatives]
    rho = RationalMatrix.from_columns(cols, m.h1_basis.dim)
    rank = rho.rank()
    image = Subspace.span(cols, m.h1_basis.dim)
    dims_equal = ker.dim == base_h.h1
    injective = rank == base_h.h1
    image_is_kernel = image == ker.subspace
    f0_model, _ = m.f0_model
    ker_f0 = kernel_upsilon(f0_model, x).dim
    failures = []
    if not dims_equal:
        failures.append(f"dim Ker Upsilon_{x} = {ker.dim} but h1(base, V0) = {base_h.h1}")
    if not injective:
        failures.append(f"rho^* has rank {rank} < {base_h.h1}")
    if not image_is_kernel:
        failures.append("image of rho^* differs from Ker Upsilon")
    verdict = "PASS" if not failures else "FAIL"
    return KernelTheoremReport(
        x, ker.dim, base_h.h1, m.h1_basis.dim, rho, dims_equal, injective, image_is_kernel, ker_f0, verdict, tuple(failures)
    )


@dataclass(frozen=True)
class SixStatementsReport:
    vertex: int
    statements: tuple
    verdict: str
    first_disagreement: int | None = None

    @property
    def passed(self) -> bool:
        return self.verdict == "PASS"


def _vertical_coboundary(m: AlgebroidModel, w: MixedCochain, y: int) -> bool:
    c = ce.cochain_from_matrix(m.algebras[y], m.reps[y], w.delta[y])
    return ce.coboundary_primitive(c) is not None


def gauge_fix(m: AlgebroidModel, w: MixedCochain) -> tuple[MixedCochain, tuple]:
    """Subtract D mu so that theta vanishes on every spanning-tree edge.

    mu is zero at the basepoint and propagated outward along the tree.
    Returns the gauge-fixed cochain and mu.
    """
    base = m.base
    mu: dict[int, tuple] = {base.basepoint: (_ZERO,) * m.reps[base.basepoint].module_dim}
    order = sorted(base.spanning_tree, key=lambda v: len(base.tree_path(v)))
    for v in order:
        e, s = base.spanning_tree[v]
        T = m.edge_maps[e][1]
        src, dst = base.edges[e]
        th = w.theta[e]
        if s > 0:
            # v = dst: require T mu_src - mu_dst = theta
            mu[v] = tuple(a - b for a, b in zip(T.apply(mu[src]), th))
        else:
            # v = src: T mu_src = theta + mu_dst
            mu[v] = m.module_system.inverses[e].apply(tuple(a + b for a, b in zip(th, mu[dst])))
    mus = tuple(mu[v] for v in range(base.vertex_count))
    fixed = _add(m, w, coboundary(m, mus), -1)
    return fixed, mus


def _tree_coboundary(m: AlgebroidModel, w: MixedCochain) -> bool:
    """Is ``w`` restricted to the spanning tree (no cycles, no cells) a coboundary there?

    The tree is simply connected, so this stands in for pulling back to the
    universal cover.  Solved as one linear system in the unknowns mu_x.
    """
    fixed, _ = gauge_fix(m, w)
    tree = sorted(m.base.tree_edges)
    full = m.coboundary_matrix
    rows_idx = list(range(m._delta_offsets[-1]))
    for e in tree:
        rows_idx.extend(range(m._theta_offsets[e], m._theta_offsets[e + 1]))
    sub = full.submatrix(rows_idx, list(range(full.cols)))
    coords = m.to_coords(fixed)
    return solve(sub, [coords[i] for i in rows_idx]) is not None


def _invariant_valued_cocycles(m: AlgebroidModel, vertical_zero_at: Sequence[int]) -> Subspace:
    """Cocycles with values in V0 everywhere and delta = 0 at the given vertices."""
    n = m.cochain_dim
    extra: list[list[Fraction]] = []
    ann = [u.annihilator() for u in m.invariant_subspaces]
    for x, (g, r) in enumerate(zip(m.algebras, m.reps)):
        off, mm = m._delta_offsets[x], r.module_dim
        for i in range(g.dim):
            for w in ann[x].vectors():
                row = [_ZERO] * n
                for a, val in enumerate(w):
                    row[off + i * mm + a] = val
                extra.append(row)
        if x in vertical_zero_at:
            for j in range(m._delta_offsets[x], m._delta_offsets[x + 1]):
                row = [_ZERO] * n
                row[j] = Fraction(1)
                extra.append(row)
    for e, (_, b) in enumerate(m.base.edges):
        off = m._theta_offsets[e]
        for w in ann[b].vectors():
            row = [_ZERO] * n
            for a, val in enumerate(w):
                row[off + a] = val
            extra.append(row)
    stacked = RationalMatrix(m.cocycle_matrix.row_list() + [tuple(r) for r in extra], m.cocycle_matrix.rows + len(extra), n)
    return kernel_basis(stacked)


def verify_six_statements(m: AlgebroidModel, w: MixedCochain, x: int) -> SixStatementsReport:
    """Evaluate the six equivalent characterizations of Ker Upsilon for one cocycle."""
    _check_vertex(m, x)
    if not is_cocycle(m, w):
        raise PreconditionError("six-statement check needs a cocycle")
    coords = m.to_coords(w)
    s1 = _vertical_coboundary(m, w, x)
    s2 = all(_vertical_coboundary(m, w, y) for y in range(m.base.vertex_count))
    s3 = _tree_coboundary(m, w)
    s4 = (_invariant_valued_cocycles(m, [x]) + m.coboundaries).contains(coords)
    s5 = (_invariant_valued_cocycles(m, range(m.base.vertex_count)) + m.coboundaries).contains(coords)
    ls0, incl = m.f0_local_system
    z0 = h_dims(ls0).cocycles
    rho_vecs = [m.to_coords(_rho_of_f0_coords(m, v)) for v in z0.vectors()]
    s6 = (Subspace.span(rho_vecs, m.cochain_dim) + m.coboundaries).contains(coords)
    stmts = (s1, s2, s3, s4, s5, s6)
    first = next((i + 1 for i, s in enumerate(stmts) if s != s1), None)
    return SixStatementsReport(x, stmts, "PASS" if first is None else "FAIL", first)


def _map_cochain(src: AlgebroidModel, dst: AlgebroidModel, maps: Sequence[RationalMatrix], coords: Sequence) -> tuple:
    w = src.from_coords(coords)
    delta = [maps[x] @ d for x, d in enumerate(w.delta)]
    theta = [maps[b].apply(t) for t, (_, b) in zip(w.theta, src.base.edges)]
    return dst.to_coords(MixedCochain(tuple(delta), tuple(theta)))


@dataclass(frozen=True)
class LesReport:
    h1_f0: int
    h1_f: int
    h1_fbar: int
    i_matrix: RationalMatrix
    j_matrix: RationalMatrix
    i_injective: bool
    exact_at_middle: bool
    h0_fbar: int
    connecting_matrix: RationalMatrix
    exact_at_f0: bool
    verdict: str
    failures: tuple = ()

    @property
    def passed(self) -> bool:
        return self.verdict == "PASS"


def verify_les(m: AlgebroidModel, x: int | None = None) -> LesReport:
    """0 -> H^1(F0) -> H^1(F) -> H^1(F/F0): injectivity on the left, exactness in the middle."""
    if x is not None:
        _check_vertex(m, x)
    f0, incl = m.f0_model
    fbar, proj = m.quotient_model
    h_f = m.h1_basis.dim
    i_cols = [m.class_coordinates(_map_cochain(f0, m, incl, v)) for v in f0.h1_basis.reps]
    j_cols = [fbar.class_coordinates(_map_cochain(m, fbar, proj, v)) for v in m.h1_basis.reps]
    i_mat = RationalMatrix.from_columns(i_cols, h_f)
    j_mat = RationalMatrix.from_columns(j_cols, fbar.h1_basis.dim)
    injective = i_mat.rank() == f0.h1_basis.dim
    ker_j = kernel_basis(j_mat)
    im_i = Subspace.span(i_cols, h_f)
    exact = ker_j == im_i
    # connecting map H^0(Fbar) -> H^1(F0): lift a flat section, apply D, read off F0 coordinates
    flat_bar = kernel_basis(fbar.coboundary_matrix)
    sections = m.quotient_sections
    to_f0 = [RationalMatrix.identity(u.ambient_dim).submatrix(u.pivots, list(range(u.ambient_dim))) for u in m.invariant_subspaces]
    conn_cols = []
    for s in flat_bar.vectors():
        lift = [sections[x].apply(s[fbar._mu_offsets[x] : fbar._mu_offsets[x + 1]]) for x in range(m.base.vertex_count)]
        conn_cols.append(f0.class_coordinates(_map_cochain(m, f0, to_f0, m.to_coords(coboundary(m, lift)))))
    conn = RationalMatrix.from_columns(conn_cols, f0.h1_basis.dim)
    exact_f0 = kernel_basis(i_mat) == Subspace.span(conn_cols, f0.h1_basis.dim)
    failures = []
    if not injective:
        failures.append(
            f"i_*1 is not injective: kernel of dim {f0.h1_basis.dim - i_mat.rank()} "
            f"comes from H^0(Fbar) of dim {flat_bar.dim} through the connecting map"
        )
    if not exact:
        failures.append(f"Ker j_*1 (dim {ker_j.dim}) differs from Im i_*1 (dim {im_i.dim})")
    if not exact_f0:
        failures.append("Ker i_*1 differs from the image of the connecting map")
    return LesReport(
        f0.h1_basis.dim, h_f, fbar.h1_basis.dim, i_mat, j_mat, injective, exact,
        flat_bar.dim, conn, exact_f0, "PASS" if not failures else "FAIL", tuple(failures),
    )


@dataclass(frozen=True)
class ImageComparisonReport:
    x: int
    y: int
    image_dim_x: int
    image_dim_y: int
    path: tuple
    transport_matrix: RationalMatrix
    triangle_commutes: bool
    maps_image_onto: bool
    loops_checked: int
    path_independent: bool
    verdict: str
    failures: tuple = ()

    @property
    def passed(self) -> bool:
        return self.verdict == "PASS"


def _fiber_transport(m: AlgebroidModel, word, x: int, y: int) -> RationalMatrix:
    """Induced map H^1(g_x, V_x) -> H^1(g_y, V_y) of transporting along ``word``."""
    A, T = _holonomy_pair(m, word) if word else (
        RationalMatrix.identity(m.algebras[x].dim), RationalMatrix.identity(m.reps[x].module_dim)
    )
    # delta -> T delta A^{-1}, column-stacked
    cochain_map = kron(A.inverse().T, T)
    src, dst = m.fiber_cohomology(x), m.fiber_cohomology(y)
    cols = [dst.class_coordinates(cochain_map.apply(r.coords)) for r in src.representatives]
    return RationalMatrix.from_columns(cols, dst.dim)


def compare_images(m: AlgebroidModel, x: int, y: int) -> ImageComparisonReport:
    """Im Upsilon_x versus Im Upsilon_y under transport along a tree path x -> y."""
    _check_vertex(m, x)
    _check_vertex(m, y)
    lx, ly = m.localization_matrix(x), m.localization_matrix(y)
    img_x = Subspace.span(lx.column_list(), lx.rows)
    img_y = Subspace.span(ly.column_list(), ly.rows)
    path = m.base.tree_path(y, start=x)
    J = _fiber_transport(m, path, x, y)
    triangle = (J @ lx) == ly
    onto = img_x.image(J) == img_y
    loops = m.base.fundamental_loops(at=x)
    independent = True
    for loop in loops:
        H = _fiber_transport(m, loop, x, x)
        if any(H.apply(v) != v for v in img_x.vectors()):
            independent = False
            break
    failures = []
    if img_x.dim != img_y.dim:
        failures.append(f"image dims differ: {img_x.dim} vs {img_y.dim}")
    if not triangle:
        failures.append("transport does not carry Upsilon_x to Upsilon_y")
    if not onto:
        failures.append("transport does not map Im Upsilon_x onto Im Upsilon_y")
    if not independent:
        failures.append("loop transport moves Im Upsilon_x")
    from .basecomplex import format_word

    return ImageComparisonReport(
        x, y, img_x.dim, img_y.dim, tuple(format_word(path)), J, triangle, onto, len(loops), independent,
        "PASS" if not failures else "FAIL", tuple(failures),
    )


def _check_vertex(m: AlgebroidModel, x: int) -> None:
    if not 0 <= x < m.base.vertex_count:
        raise UsageError(f"vertex {x} does not exist")
