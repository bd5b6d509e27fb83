"""Seeded generators of valid random inputs for property tests and acceptance runs.

Algebroid models are built flat by construction: tree edges carry the
identity, every non-tree edge carries a power of one automorphism pair
(A, T) of the fiber, and cells are words whose holonomy is then trivial
(commutators of fundamental loops, loops with trivial holonomy, powers of
finite-order loops).  A random change of basis at every vertex hides the
construction from the code under test.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable

from .algebroid import AlgebroidModel
from .basecomplex import BaseComplex
from .exactla import Fraction, RationalMatrix, block_diag
from .liealg import (
    LieAlgebra,
    Representation,
    abelian,
    adjoint_rep,
    affine_line,
    direct_sum_rep,
    exterior_square_rep,
    heisenberg,
    semidirect,
    semidirect_affine_rep,
    sl2,
    so3,
    so3_standard_rep,
    trivial_rep,
)

__all__ = [
    "FIBER_KINDS",
    "Fiber",
    "random_lie_pair",
    "random_model",
    "random_models",
    "random_unimodular",
]

M = RationalMatrix


@dataclass(frozen=True)
class Fiber:
    """A fiber (g, V) with a list of automorphism pairs (A, T) with T rho(u) = rho(Au) T."""

    kind: str
    rep: Representation
    autos: tuple

    @property
    def invariants_vanish(self) -> bool:
        return self.kind.startswith("sl2-adjoint") and "+" not in self.kind


def _abelian_trivial(rng: random.Random) -> Fiber:
    g = abelian(2)
    a_choices = [M([[1, 1], [0, 1]]), M([[0, 1], [1, 0]]), M([[2, 0], [0, 1]]), M.identity(2)]
    t_choices = [M([[2, 0], [0, 1]]), M([[0, 1], [1, 0]]), M([[1, 1], [0, 1]]), M.identity(2), M([[-1, 0], [0, 1]])]
    autos = tuple((rng.choice(a_choices), t) for t in t_choices)
    return Fiber("abelian2-trivial", trivial_rep(g, 2), autos)


def _abelian_diagonal(rng: random.Random) -> Fiber:
    g = abelian(2)
    r = Representation(g, [M.diagonal([1, 0, 0]), M.diagonal([0, 1, 0])], "diag", module_dim=3)
    swap = M([[0, 1], [1, 0]])
    autos = (
        (M.identity(2), M.diagonal([2, -1, 1])),
        (M.identity(2), M.diagonal([1, 1, 2])),
        (M.identity(2), M.diagonal([1, 1, -1])),
        (swap, block_diag([swap, M([[rng.choice([1, -1, 2])]])])),
    )
    return Fiber("abelian2-diag", r, autos)


_HEIS_AUTOS = (
    M([[1, 1, 0], [0, 1, 0], [0, 0, 1]]),
    M([[2, 0, 0], [0, 1, 0], [0, 0, 2]]),
    M([[0, 1, 0], [1, 0, 0], [0, 0, -1]]),
    M([[1, 0, 0], [0, 1, 0], [1, 0, 1]]),
    M([[-1, 0, 0], [0, 1, 0], [0, 0, -1]]),
)

_SL2_AUTOS = (
    M.diagonal([1, 2, Fraction(1, 2)]),
    M.diagonal([1, -1, -1]),
    M([[-1, 0, 0], [0, 0, -1], [0, -1, 0]]),
    M.diagonal([1, -3, Fraction(-1, 3)]),
)


def _heisenberg_adjoint(rng: random.Random) -> Fiber:
    return Fiber("heisenberg-adjoint", adjoint_rep(heisenberg()), tuple((a, a) for a in _HEIS_AUTOS))


def _heisenberg_adjoint_plus(rng: random.Random) -> Fiber:
    g = heisenberg()
    r = direct_sum_rep(adjoint_rep(g), trivial_rep(g, 1))
    autos = tuple((a, block_diag([a, M([[rng.choice([1, -1, 2])]])])) for a in _HEIS_AUTOS)
    return Fiber("heisenberg-adjoint+trivial", r, autos)


def _heisenberg_trivial(rng: random.Random) -> Fiber:
    g = heisenberg()
    autos = tuple((a, M([[c]])) for a in _HEIS_AUTOS for c in (1, 2, -1))
    return Fiber("heisenberg-trivial", trivial_rep(g, 1), autos)


def _sl2_adjoint(rng: random.Random) -> Fiber:
    return Fiber("sl2-adjoint", adjoint_rep(sl2()), tuple((a, a) for a in _SL2_AUTOS))


def _sl2_adjoint_plus(rng: random.Random) -> Fiber:
    g = sl2()
    r = direct_sum_rep(adjoint_rep(g), trivial_rep(g, 1))
    autos = tuple((a, block_diag([a, M([[c]])])) for a in _SL2_AUTOS for c in (1, -1, 2))
    return Fiber("sl2-adjoint+trivial", r, autos)


FIBER_KINDS: dict[str, Callable[[random.Random], Fiber]] = {
    "abelian2-trivial": _abelian_trivial,
    "abelian2-diag": _abelian_diagonal,
    "heisenberg-adjoint": _heisenberg_adjoint,
    "heisenberg-adjoint+trivial": _heisenberg_adjoint_plus,
    "heisenberg-trivial": _heisenberg_trivial,
    "sl2-adjoint": _sl2_adjoint,
    "sl2-adjoint+trivial": _sl2_adjoint_plus,
}


def random_unimodular(rng: random.Random, n: int, steps: int = 3) -> RationalMatrix:
    """Integer matrix of determinant +-1: a permutation times a few elementary row operations."""
    rows = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    rng.shuffle(rows)
    for _ in range(steps if n > 1 else 0):
        i, j = rng.sample(range(n), 2)
        c = rng.choice([-1, 1, 2])
        rows[i] = [a + c * b for a, b in zip(rows[i], rows[j])]
    if n and rng.random() < 0.3:
        rows[0] = [-a for a in rows[0]]
    return M(rows, n, n)


def _power(mat: RationalMatrix, k: int) -> RationalMatrix:
    return mat.power(k) if k >= 0 else mat.inverse().power(-k)


def _random_base_graph(rng: random.Random, max_vertices: int, max_edges: int, tree: bool) -> BaseComplex:
    nv = rng.randint(1, max_vertices)
    edges = []
    for v in range(1, nv):
        u = rng.randrange(v)
        edges.append((u, v) if rng.random() < 0.5 else (v, u))
    if not tree:
        extra = rng.randint(1 if nv == 1 else 0, max_edges - len(edges))
        for _ in range(extra):
            edges.append((rng.randrange(nv), rng.randrange(nv)))
    rng.shuffle(edges)
    return BaseComplex(nv, tuple(edges))


def _inverse_word(w):
    return tuple((e, -s) for e, s in reversed(w))


def random_model(
    seed: int,
    *,
    fiber: str | None = None,
    max_vertices: int = 4,
    max_edges: int = 6,
    max_cells: int = 2,
    tree: bool = False,
    gauge: bool = True,
) -> AlgebroidModel:
    """One valid random model; identical seeds give identical models."""
    rng = random.Random(seed)
    kind = fiber or rng.choice(sorted(FIBER_KINDS))
    fib = FIBER_KINDS[kind](rng)
    g, r = fib.rep.algebra, fib.rep
    n, m = g.dim, r.module_dim
    graph = _random_base_graph(rng, max_vertices, max_edges, tree)
    gen_a, gen_t = rng.choice(fib.autos)
    tree_edges = graph.tree_edges
    powers = {}
    maps = []
    for e in range(len(graph.edges)):
        if e in tree_edges:
            maps.append((M.identity(n), M.identity(m)))
        else:
            k = rng.choice([-1, 0, 1, 1, 2])
            powers[e] = k
            maps.append((_power(gen_a, k), _power(gen_t, k)))

    loops = {e: w for e, w in zip(sorted(powers), graph.fundamental_loops())}
    candidates = []
    keys = sorted(loops)
    for i, a in enumerate(keys):
        if powers[a] == 0:
            candidates.append(loops[a])
        for b in keys[i + 1 :]:
            la, lb = loops[a], loops[b]
            candidates.append(la + lb + _inverse_word(la) + _inverse_word(lb))
            if powers[a] == powers[b]:
                candidates.append(la + _inverse_word(lb))
        for order in (2, 3, 4):
            if powers[a] and _power(gen_a, powers[a] * order) == M.identity(n) and _power(gen_t, powers[a] * order) == M.identity(m):
                candidates.append(loops[a] * order)
                break
    cells = []
    if candidates and not tree:
        cells = rng.sample(candidates, min(len(candidates), rng.randint(0, max_cells)))
    base = BaseComplex(graph.vertex_count, graph.edges, tuple(cells), graph.basepoint)

    algebras, reps, phis, psis = [], [], [], []
    for _ in range(base.vertex_count):
        if gauge and rng.random() < 0.8:
            phi, psi = random_unimodular(rng, n), random_unimodular(rng, m)
        else:
            phi, psi = M.identity(n), M.identity(m)
        gx = g.change_basis(phi) if n else g
        rx = r.pull_back(gx, phi).conjugate(psi) if m else Representation(gx, [M.zeros(0, 0)] * n, module_dim=0)
        algebras.append(gx)
        reps.append(rx)
        phis.append(phi)
        psis.append(psi)
    gauged = []
    for e, (a, b) in enumerate(base.edges):
        A, T = maps[e]
        gauged.append((phis[b].inverse() @ A @ phis[a], psis[b].inverse() @ T @ psis[a]))
    return AlgebroidModel(base, algebras, reps, gauged)


def random_models(count: int, seed: int = 0, **kw) -> list[AlgebroidModel]:
    return [random_model(seed * 100_003 + i, **kw) for i in range(count)]


def _random_commuting(rng: random.Random, n: int, m: int) -> list[RationalMatrix]:
    """n commuting m x m matrices: polynomials in one random matrix."""
    base = M([[rng.choice([0, 0, 1, -1, 2]) for _ in range(m)] for _ in range(m)], m, m)
    sq = base @ base
    return [base.scale(rng.choice([0, 1, -1, 2])) + sq.scale(rng.choice([0, 1])) for _ in range(n)]


def random_lie_pair(seed: int, max_dim: int = 4, max_module: int = 4) -> tuple[LieAlgebra, Representation]:
    """A random valid (g, V) with dim g <= max_dim and dim V <= max_module, in a random basis."""
    rng = random.Random(seed)
    choice = rng.randrange(8)
    if choice == 0:
        n, m = rng.randint(1, max_dim), rng.randint(1, max_module)
        g = abelian(n)
        r = Representation(g, _random_commuting(rng, n, m), "commuting", module_dim=m)
    elif choice == 1:
        k = rng.randint(1, min(max_dim, max_module) - 1)
        d = M([[rng.choice([0, 1, -1, 2]) for _ in range(k)] for _ in range(k)], k, k)
        g = semidirect(d)
        r = semidirect_affine_rep(g) if rng.random() < 0.6 else adjoint_rep(g)
    elif choice == 2:
        g = sl2()
        r = rng.choice([adjoint_rep(g), trivial_rep(g, rng.randint(1, max_module))])
        if rng.random() < 0.3 and max_module >= 4:
            r = direct_sum_rep(adjoint_rep(g), trivial_rep(g, 1))
    elif choice == 3:
        g = so3()
        r = rng.choice([so3_standard_rep(g), adjoint_rep(g), exterior_square_rep(so3_standard_rep(g))])
    elif choice == 4:
        g = heisenberg()
        r = rng.choice([adjoint_rep(g), trivial_rep(g, rng.randint(1, max_module))])
        if rng.random() < 0.4:
            r = direct_sum_rep(adjoint_rep(g), trivial_rep(g, 1))
    elif choice == 5:
        g = affine_line()
        r = adjoint_rep(g)
        if rng.random() < 0.5:
            r = exterior_square_rep(direct_sum_rep(r, trivial_rep(g, 1)))
    elif choice == 6:
        g = affine_line().direct_sum(abelian(rng.randint(1, max_dim - 2)))
        r = adjoint_rep(g) if g.dim <= max_module else trivial_rep(g, 2)
    else:
        g = heisenberg()
        # x, y act by a nilpotent pair whose commutator is the action of z
        x = M([[0, 1, 0], [0, 0, 0], [0, 0, 0]])
        y = M([[0, 0, 0], [0, 0, 1], [0, 0, 0]])
        r = Representation(g, [x, y, x @ y - y @ x], "nilpotent", module_dim=3)
    phi = random_unimodular(rng, g.dim)
    psi = random_unimodular(rng, r.module_dim)
    g2 = g.change_basis(phi)
    return g2, r.pull_back(g2, phi).conjugate(psi)
