"""Presentation 2-complexes, local systems on them, and twisted cohomology.

A base complex is a connected graph plus 2-cells attached along closed edge
words.  A step of a word is ``(edge, +1)`` (src -> dst) or ``(edge, -1)``
(dst -> src).  A local system puts one invertible transport on each edge
with identity holonomy around every cell.

Conventions for the twisted complex, used throughout the package:

* ``(d0 mu)(e) = T_e mu_src - mu_dst``
* ``(d1 theta)(cell)`` is the value accumulated along the cell word starting
  from 0: a step ``+e`` maps ``acc -> T_e acc + theta_e`` and a step ``-e``
  maps ``acc -> T_e^{-1} (acc - theta_e)``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence, Union

from .errors import InvalidStructureError, UsageError
from .exactla import (
    QuotientBasis,
    RationalMatrix,
    Subspace,
    hstack,
    image_basis,
    kernel_basis,
    vstack,
)

__all__ = [
    "BaseComplex",
    "CohomologyReport",
    "LocalSystem",
    "TwistedComplex",
    "h_dims",
    "holonomy",
    "parse_word",
    "twisted_complex",
    "word_accumulator",
]

Step = tuple  # (edge index, +1 | -1)
StepLike = Union[Step, str, Sequence]


def _parse_step(s) -> Step:
    if isinstance(s, str):
        text = s.strip()
        if len(text) < 2 or text[0] not in "+-" or not text[1:].isdigit():
            raise UsageError(f"bad word step {s!r}; expected '+<edge>' or '-<edge>'")
        return (int(text[1:]), 1 if text[0] == "+" else -1)
    e, sgn = s
    if sgn not in (1, -1) or int(e) != e or e < 0:
        raise UsageError(f"bad word step {s!r}")
    return (int(e), int(sgn))


def parse_word(word: Iterable[StepLike]) -> tuple[Step, ...]:
    """Normalize a word given as ``(edge, sign)`` pairs or ``"+e"``/``"-e"`` strings."""
    return tuple(_parse_step(s) for s in word)


def format_word(word: Sequence[Step]) -> list[str]:
    return [("+" if s > 0 else "-") + str(e) for e, s in word]


@dataclass(frozen=True)
class BaseComplex:
    vertex_count: int
    edges: tuple = ()
    cells: tuple = ()
    basepoint: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "edges", tuple((int(a), int(b)) for a, b in self.edges))
        object.__setattr__(self, "cells", tuple(parse_word(w) for w in self.cells))
        problems = self.violations()
        if problems:
            raise InvalidStructureError(f"invalid base complex: {problems[0]}", problems)

    def violations(self) -> list[str]:
        out = []
        n = self.vertex_count
        if n < 1:
            return ["base complex needs at least one vertex"]
        if not 0 <= self.basepoint < n:
            out.append(f"basepoint {self.basepoint} out of range")
        for i, (a, b) in enumerate(self.edges):
            if not (0 <= a < n and 0 <= b < n):
                out.append(f"edge {i} has an endpoint out of range")
        if out:
            return out
        seen = {0}
        todo = [0]
        adj = self._adjacency()
        while todo:
            v = todo.pop()
            for _, _, w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
        if len(seen) != n:
            out.append(f"graph is not connected (vertices {sorted(set(range(n)) - seen)} unreachable)")
        for c, word in enumerate(self.cells):
            if not word:
                out.append(f"cell {c} has an empty boundary word")
                continue
            try:
                start, end = self.path_endpoints(word)
            except UsageError as exc:
                out.append(f"cell {c}: {exc}")
                continue
            if start != end:
                out.append(f"cell {c} boundary is not closed ({start} -> {end})")
        return out

    def _adjacency(self) -> list[list[tuple[int, int, int]]]:
        adj: list[list[tuple[int, int, int]]] = [[] for _ in range(self.vertex_count)]
        for i, (a, b) in enumerate(self.edges):
            adj[a].append((i, 1, b))
            adj[b].append((i, -1, a))
        return adj

    def step_endpoints(self, step: Step) -> tuple[int, int]:
        e, s = step
        if not 0 <= e < len(self.edges):
            raise UsageError(f"edge {e} does not exist")
        a, b = self.edges[e]
        return (a, b) if s > 0 else (b, a)

    def path_endpoints(self, word: Sequence[Step]) -> tuple[int, int]:
        word = parse_word(word)
        if not word:
            raise UsageError("empty path has no endpoints")
        start, cur = self.step_endpoints(word[0])
        for k, step in enumerate(word[1:], 1):
            a, b = self.step_endpoints(step)
            if a != cur:
                raise UsageError(f"word is not composable at step {k} (at vertex {cur}, step starts at {a})")
            cur = b
        return start, cur

    @cached_property
    def spanning_tree(self) -> dict[int, Step]:
        """BFS tree from the basepoint: vertex -> step entering it (basepoint absent)."""
        parent: dict[int, Step] = {}
        seen = {self.basepoint}
        queue = deque([self.basepoint])
        adj = self._adjacency()
        while queue:
            v = queue.popleft()
            for e, s, w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    parent[w] = (e, s)
                    queue.append(w)
        return parent

    @property
    def tree_edges(self) -> frozenset[int]:
        return frozenset(e for e, _ in self.spanning_tree.values())

    def tree_path(self, v: int, start: int | None = None) -> tuple[Step, ...]:
        """Word along the spanning tree from ``start`` (default basepoint) to ``v``."""
        to_v = self._tree_path_from_base(v)
        if start is None or start == self.basepoint:
            return to_v
        back = tuple((e, -s) for e, s in reversed(self._tree_path_from_base(start)))
        return back + to_v

    def _tree_path_from_base(self, v: int) -> tuple[Step, ...]:
        word = []
        cur = v
        while cur != self.basepoint:
            e, s = self.spanning_tree[cur]
            word.append((e, s))
            cur = self.step_endpoints((e, -s))[1]
        return tuple(reversed(word))

    def fundamental_loops(self, at: int | None = None) -> list[tuple[Step, ...]]:
        """One closed word per non-tree edge, based at ``at`` (default basepoint)."""
        at = self.basepoint if at is None else at
        loops = []
        for e, (a, b) in enumerate(self.edges):
            if e in self.tree_edges:
                continue
            loops.append(self.tree_path(a, at) + ((e, 1),) + self.tree_path(at, b))
        return loops

    def is_tree(self) -> bool:
        return not self.cells and len(self.edges) == self.vertex_count - 1

    def subdivide(self, edge: int) -> BaseComplex:
        """Insert a new vertex in the middle of ``edge``; the second half becomes a new last edge."""
        a, b = self.edges[edge]
        mid = self.vertex_count
        new_edge = len(self.edges)
        edges = list(self.edges)
        edges[edge] = (a, mid)
        edges.append((mid, b))
        cells = []
        for w in self.cells:
            out = []
            for e, s in w:
                if e != edge:
                    out.append((e, s))
                elif s > 0:
                    out += [(edge, 1), (new_edge, 1)]
                else:
                    out += [(new_edge, -1), (edge, -1)]
            cells.append(tuple(out))
        return BaseComplex(self.vertex_count + 1, tuple(edges), tuple(cells), self.basepoint)


@dataclass(frozen=True)
class LocalSystem:
    base: BaseComplex
    fiber_dim: int
    transports: tuple = field(default=())

    def __post_init__(self) -> None:
        object.__setattr__(
            self,
            "transports",
            tuple(t if isinstance(t, RationalMatrix) else RationalMatrix(t, self.fiber_dim, self.fiber_dim) for t in self.transports),
        )
        problems = self.violations()
        if problems:
            raise InvalidStructureError(f"invalid local system: {problems[0]}", problems)

    @classmethod
    def trivial(cls, base: BaseComplex, fiber_dim: int) -> LocalSystem:
        return cls(base, fiber_dim, tuple(RationalMatrix.identity(fiber_dim) for _ in base.edges))

    def violations(self) -> list[str]:
        out = []
        if len(self.transports) != len(self.base.edges):
            return [f"{len(self.transports)} transports for {len(self.base.edges)} edges"]
        for e, t in enumerate(self.transports):
            if t.shape != (self.fiber_dim, self.fiber_dim):
                out.append(f"transport of edge {e} has shape {t.shape}")
            elif not t.is_invertible():
                out.append(f"transport of edge {e} is not invertible")
        if out:
            return out
        ident = RationalMatrix.identity(self.fiber_dim)
        for c, w in enumerate(self.base.cells):
            if holonomy(self, w) != ident:
                out.append(f"holonomy around cell {c} is not the identity")
        return out

    @cached_property
    def inverses(self) -> tuple:
        return tuple(t.inverse() for t in self.transports)

    def subdivide(self, edge: int) -> LocalSystem:
        base = self.base.subdivide(edge)
        return LocalSystem(base, self.fiber_dim, self.transports + (RationalMatrix.identity(self.fiber_dim),))


def holonomy(ls: LocalSystem, word: Iterable[StepLike]) -> RationalMatrix:
    """Ordered product of T_e^{+-1} along ``word`` (fiber at start -> fiber at end)."""
    word = parse_word(word)
    out = RationalMatrix.identity(ls.fiber_dim)
    if not word:
        return out
    ls.base.path_endpoints(word)
    for e, s in word:
        out = (ls.transports[e] if s > 0 else ls.inverses[e]) @ out
    return out


def word_accumulator(ls: LocalSystem, word: Iterable[StepLike]) -> RationalMatrix:
    """Linear map theta (all edges stacked) -> value accumulated along ``word``."""
    word = parse_word(word)
    f = ls.fiber_dim
    ne = len(ls.base.edges)
    acc = RationalMatrix.zeros(f, f * ne)
    if word:
        ls.base.path_endpoints(word)
    for e, s in word:
        sel = hstack(
            [RationalMatrix.identity(f) if k == e else RationalMatrix.zeros(f, f) for k in range(ne)]
        ) if ne else RationalMatrix.zeros(f, 0)
        if s > 0:
            acc = ls.transports[e] @ acc + sel
        else:
            acc = ls.inverses[e] @ (acc - sel)
    return acc


@dataclass(frozen=True)
class TwistedComplex:
    d0: RationalMatrix
    d1: RationalMatrix


def twisted_complex(ls: LocalSystem) -> TwistedComplex:
    base = ls.base
    f = ls.fiber_dim
    nv, ne = base.vertex_count, len(base.edges)
    rows = []
    for e, (a, b) in enumerate(base.edges):
        blocks = [RationalMatrix.zeros(f, f) for _ in range(nv)]
        blocks[a] = blocks[a] + ls.transports[e]
        blocks[b] = blocks[b] - RationalMatrix.identity(f)
        rows.append(hstack(blocks))
    d0 = vstack(rows, nv * f)
    d1 = vstack([word_accumulator(ls, w) for w in base.cells], ne * f)
    return TwistedComplex(d0, d1)


@dataclass(frozen=True)
class CohomologyReport:
    h0: int
    h1: int
    representatives: tuple
    cocycles: Subspace
    coboundaries: Subspace
    basis: QuotientBasis
    flat_sections: Subspace

    def class_coordinates(self, theta) -> tuple | None:
        return self.basis.coordinates(theta)


def h_dims(ls: LocalSystem) -> CohomologyReport:
    """h0 = dim Ker d0, h1 = dim Ker d1 - rank d0, with canonical H^1 representatives.

    Representatives are flat vectors of length edges x fiber_dim (edge-major).
    """
    tc = twisted_complex(ls)
    sections = kernel_basis(tc.d0)
    z = kernel_basis(tc.d1)
    b = image_basis(tc.d0)
    basis = QuotientBasis.complement(z, b)
    return CohomologyReport(sections.dim, z.dim - b.dim, tuple(basis.reps), z, b, basis, sections)

