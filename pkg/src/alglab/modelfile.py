"""Loading JSON model files into library objects, with located error messages.

Every parse or validation problem raises :class:`ModelFileError` carrying a
JSONPath-like location (``$.representations.ad.action[1][0][2]``).
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from math import comb
from pathlib import Path
from typing import Any

from .algebroid import AlgebroidModel, MixedCochain, validate_model
from .basecomplex import BaseComplex, parse_word
from .bialg import CobracketMap, MultiVector
from .errors import AlglabError, InvalidStructureError, UsageError
from .exactla import Fraction, RationalMatrix, as_rational
from .liealg import (
    LieAlgebra,
    Representation,
    abelian,
    affine_line,
    direct_sum_rep,
    exterior_square_rep,
    heisenberg,
    sl2,
    so3,
    so3_standard_rep,
    trivial_rep,
    validate,
)

__all__ = ["ModelFileError", "Workspace", "load_document", "load_path", "max_dim"]

SCHEMA_VERSION = 1

BUILTIN_ALGEBRAS = {
    "sl2": sl2,
    "so3": so3,
    "heisenberg": heisenberg,
    "affine_line": affine_line,
}


class ModelFileError(UsageError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.detail = message


def max_dim() -> int:
    raw = os.environ.get("ALGLAB_MAX_DIM", "10")
    try:
        value = int(raw)
    except ValueError:
        raise ModelFileError("$ENV.ALGLAB_MAX_DIM", f"not an integer: {raw!r}") from None
    if value < 0:
        raise ModelFileError("$ENV.ALGLAB_MAX_DIM", "must be non-negative")
    return value


@dataclass
class Workspace:
    """Everything a model file defines, plus the structural problems found while loading."""

    source: str
    document: dict
    algebras: dict[str, LieAlgebra] = field(default_factory=dict)
    representations: dict[str, Representation] = field(default_factory=dict)
    base: BaseComplex | None = None
    model: AlgebroidModel | None = None
    bialgebra: tuple | None = None  # (algebra, Lambda, Omega)
    cocycles: dict[str, MixedCochain] = field(default_factory=dict)
    tasks: list[dict] = field(default_factory=list)
    violations: list[dict] = field(default_factory=list)

    def require_valid(self) -> None:
        if self.violations:
            v = self.violations[0]
            raise ModelFileError(v["path"], f"invalid structure ({v['kind']} at {v['indices']})")

    def require_model(self) -> AlgebroidModel:
        self.require_valid()
        if self.model is None:
            raise ModelFileError("$.base", "this command needs an algebroid model (base + fibers)")
        return self.model


# -- primitive readers -----------------------------------------------------

def _rational(x: Any, path: str) -> Fraction:
    if isinstance(x, float):
        raise ModelFileError(path, f"floating-point value {x!r}; write exact rationals as strings like \"3/4\"")
    try:
        return as_rational(x)
    except (AlglabError, ValueError, TypeError, ZeroDivisionError):
        raise ModelFileError(path, f"not an exact rational: {x!r}") from None


def _int(x: Any, path: str, lo: int = 0) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise ModelFileError(path, f"expected an integer, got {x!r}")
    if x < lo:
        raise ModelFileError(path, f"expected an integer >= {lo}, got {x}")
    return x


def _obj(x: Any, path: str) -> dict:
    if not isinstance(x, dict):
        raise ModelFileError(path, f"expected an object, got {type(x).__name__}")
    return x


def _list(x: Any, path: str) -> list:
    if not isinstance(x, list):
        raise ModelFileError(path, f"expected a list, got {type(x).__name__}")
    return x


def _str(x: Any, path: str) -> str:
    if not isinstance(x, str):
        raise ModelFileError(path, f"expected a string, got {type(x).__name__}")
    return x


def _vector(x: Any, path: str, length: int | None = None) -> tuple:
    items = _list(x, path)
    if length is not None and len(items) != length:
        raise ModelFileError(path, f"expected {length} entries, got {len(items)}")
    return tuple(_rational(v, f"{path}[{i}]") for i, v in enumerate(items))


def _matrix(x: Any, path: str, rows: int | None = None, cols: int | None = None) -> RationalMatrix:
    items = _list(x, path)
    if rows is not None and len(items) != rows:
        raise ModelFileError(path, f"expected {rows} rows, got {len(items)}")
    body = []
    for i, row in enumerate(items):
        body.append(_vector(row, f"{path}[{i}]", cols))
        cols = len(body[-1]) if cols is None else cols
    return RationalMatrix(body, len(body), cols if cols is not None else 0)


def _check_cap(dim: int, path: str, what: str) -> None:
    cap = max_dim()
    if dim > cap:
        raise ModelFileError(path, f"{what} {dim} exceeds ALGLAB_MAX_DIM={cap}")


def _record(ws: Workspace, path: str, violations) -> None:
    for v in violations:
        if hasattr(v, "as_dict"):
            d = v.as_dict()
        else:
            d = {"kind": "structure", "indices": [], "value": str(v)}
        d["path"] = path
        ws.violations.append(d)


# -- sections --------------------------------------------------------------

def _load_algebra(name: str, spec: Any, path: str, ws: Workspace) -> LieAlgebra:
    spec = _obj(spec, path)
    if "builtin" in spec:
        b = _str(spec["builtin"], f"{path}.builtin")
        if b == "abelian":
            n = _int(spec.get("dim"), f"{path}.dim")
            _check_cap(n, f"{path}.dim", "algebra dimension")
            return LieAlgebra(abelian(n).structure_constants, name, check=False)
        if b not in BUILTIN_ALGEBRAS:
            raise ModelFileError(f"{path}.builtin", f"unknown builtin algebra {b!r}; known: abelian, {', '.join(sorted(BUILTIN_ALGEBRAS))}")
        g = BUILTIN_ALGEBRAS[b]()
        _check_cap(g.dim, f"{path}.builtin", "algebra dimension")
        return LieAlgebra(g.structure_constants, name, check=False)
    if "structure_constants" in spec:
        p = f"{path}.structure_constants"
        planes = _list(spec["structure_constants"], p)
        n = len(planes)
        _check_cap(n, p, "algebra dimension")
        c = []
        for i, plane in enumerate(planes):
            plane = _list(plane, f"{p}[{i}]")
            if len(plane) != n:
                raise ModelFileError(f"{p}[{i}]", f"expected {n} rows, got {len(plane)}")
            c.append([list(_vector(row, f"{p}[{i}][{j}]", n)) for j, row in enumerate(plane)])
    elif "brackets" in spec:
        n = _int(spec.get("dim"), f"{path}.dim")
        _check_cap(n, f"{path}.dim", "algebra dimension")
        c = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
        for k, entry in enumerate(_list(spec["brackets"], f"{path}.brackets")):
            ep = f"{path}.brackets[{k}]"
            entry = _list(entry, ep)
            if len(entry) != 3:
                raise ModelFileError(ep, "expected [i, j, [coefficients]]")
            i, j = _int(entry[0], f"{ep}[0]"), _int(entry[1], f"{ep}[1]")
            if i >= n or j >= n:
                raise ModelFileError(ep, f"basis index out of range for dimension {n}")
            vec = _vector(entry[2], f"{ep}[2]", n)
            c[i][j] = list(vec)
            c[j][i] = [-x for x in vec]
    else:
        raise ModelFileError(path, "an algebra needs 'builtin', 'brackets' or 'structure_constants'")
    problems = validate(c)
    if problems:
        _record(ws, path, problems)
    return LieAlgebra(c, name, check=False)


def _load_representation(name: str, spec: Any, path: str, ws: Workspace) -> Representation:
    spec = _obj(spec, path)
    kind = spec.get("builtin")
    if kind in ("exterior_square", "direct_sum"):
        of = spec.get("of")
        if kind == "exterior_square":
            base = _ref(ws.representations, of, f"{path}.of", "representation")
            r = exterior_square_rep(base)
        else:
            names = _list(of, f"{path}.of")
            if len(names) < 2:
                raise ModelFileError(f"{path}.of", "direct_sum needs at least two representations")
            parts = [_ref(ws.representations, x, f"{path}.of[{i}]", "representation") for i, x in enumerate(names)]
            if len({id(p.algebra) for p in parts}) != 1 and len({p.algebra for p in parts}) != 1:
                raise ModelFileError(f"{path}.of", "summands act on different algebras")
            r = parts[0]
            for p in parts[1:]:
                r = direct_sum_rep(r, p)
        _check_cap(r.module_dim, path, "module dimension")
        return Representation(r.algebra, r.action, name, module_dim=r.module_dim, check=False)
    g = _ref(ws.algebras, spec.get("algebra"), f"{path}.algebra", "algebra")
    if kind is not None:
        kind = _str(kind, f"{path}.builtin")
        if kind == "adjoint":
            r = Representation(g, [g.ad(i) for i in range(g.dim)], module_dim=g.dim, check=False)
        elif kind == "trivial":
            m = _int(spec.get("dim"), f"{path}.dim")
            _check_cap(m, f"{path}.dim", "module dimension")
            r = trivial_rep(g, m)
        elif kind == "standard":
            if g != so3():
                raise ModelFileError(f"{path}.builtin", "the standard representation is defined for so3 only")
            r = so3_standard_rep(g)
        else:
            raise ModelFileError(f"{path}.builtin", f"unknown builtin representation {kind!r}")
        return Representation(g, r.action, name, module_dim=r.module_dim, check=False)
    if "action" not in spec:
        raise ModelFileError(path, "a representation needs 'builtin' or 'action'")
    ap = f"{path}.action"
    mats = _list(spec["action"], ap)
    if len(mats) != g.dim:
        raise ModelFileError(ap, f"expected {g.dim} action matrices (one per basis vector), got {len(mats)}")
    m = spec.get("dim")
    if m is None:
        m = len(_list(mats[0], f"{ap}[0]")) if mats else 0
    else:
        m = _int(m, f"{path}.dim")
    _check_cap(m, ap, "module dimension")
    action = [_matrix(a, f"{ap}[{i}]", m, m) for i, a in enumerate(mats)]
    r = Representation(g, action, name, module_dim=m, check=False)
    if not _algebra_invalid(ws, g):
        _record(ws, path, r.violations())
    return r


def _algebra_invalid(ws: Workspace, g: LieAlgebra) -> bool:
    return any(v["path"] == f"$.lie_algebras.{g.name}" for v in ws.violations)


def _ref(table: dict, key: Any, path: str, what: str):
    if not isinstance(key, str):
        raise ModelFileError(path, f"expected the name of a {what}")
    if key not in table:
        known = ", ".join(sorted(table)) or "none defined"
        raise ModelFileError(path, f"unknown {what} {key!r} (known: {known})")
    return table[key]


def _load_base(spec: Any, path: str) -> BaseComplex:
    spec = _obj(spec, path)
    nv = _int(spec.get("vertices"), f"{path}.vertices", 1)
    edges = []
    for i, e in enumerate(_list(spec.get("edges", []), f"{path}.edges")):
        ep = f"{path}.edges[{i}]"
        e = _list(e, ep)
        if len(e) != 2:
            raise ModelFileError(ep, "an edge is [src, dst]")
        a, b = _int(e[0], f"{ep}[0]"), _int(e[1], f"{ep}[1]")
        if a >= nv or b >= nv:
            raise ModelFileError(ep, f"endpoint out of range for {nv} vertices")
        edges.append((a, b))
    cells = []
    for c, w in enumerate(_list(spec.get("cells", []), f"{path}.cells")):
        cp = f"{path}.cells[{c}]"
        word = _list(w, cp)
        try:
            steps = parse_word(word)
        except UsageError as exc:
            raise ModelFileError(cp, str(exc)) from None
        for k, (e, _) in enumerate(steps):
            if e >= len(edges):
                raise ModelFileError(f"{cp}[{k}]", f"edge {e} does not exist")
        cells.append(steps)
    bp = _int(spec.get("basepoint", 0), f"{path}.basepoint")
    try:
        return BaseComplex(nv, tuple(edges), tuple(cells), bp)
    except InvalidStructureError as exc:
        raise ModelFileError(path, str(exc)) from None


def _transport_matrix(x: Any, path: str, size: tuple[int, int], named: dict) -> RationalMatrix:
    if x is None or x == "identity":
        if size[0] != size[1]:
            raise ModelFileError(path, "identity needs equal fiber dimensions")
        return RationalMatrix.identity(size[0])
    if isinstance(x, str):
        m = _ref(named, x, path, "matrix")
    else:
        m = _matrix(x, path, size[0], size[1])
    if m.shape != size:
        raise ModelFileError(path, f"expected a {size[0]}x{size[1]} matrix, got {m.rows}x{m.cols}")
    return m


def _load_model(ws: Workspace, doc: dict) -> None:
    base = ws.base
    nv = base.vertex_count
    fp = "$.fibers"
    fibers = doc.get("fibers")
    if fibers is None:
        if len(ws.representations) != 1:
            raise ModelFileError(fp, "give 'fibers' (a representation name, or one per vertex) when several representations are defined")
        names = [next(iter(ws.representations))] * nv
    elif isinstance(fibers, str):
        names = [fibers] * nv
    else:
        names = _list(fibers, fp)
        if len(names) != nv:
            raise ModelFileError(fp, f"expected {nv} fiber names, got {len(names)}")
    reps = [_ref(ws.representations, n, f"{fp}[{i}]" if not isinstance(fibers, str) and fibers is not None else fp, "representation") for i, n in enumerate(names)]
    named = {}
    for k, v in _obj(doc.get("matrices", {}), "$.matrices").items():
        named[k] = _matrix(v, f"$.matrices.{k}")
    tp = "$.transports"
    raw = doc.get("transports")
    if raw is None:
        raw = [{}] * len(base.edges)
    raw = _list(raw, tp)
    if len(raw) != len(base.edges):
        raise ModelFileError(tp, f"expected {len(base.edges)} transports (one per edge), got {len(raw)}")
    maps = []
    for e, entry in enumerate(raw):
        ep = f"{tp}[{e}]"
        entry = _obj(entry, ep)
        a, b = base.edges[e]
        A = _transport_matrix(entry.get("A"), f"{ep}.A", (reps[b].algebra.dim, reps[a].algebra.dim), named)
        T = _transport_matrix(entry.get("T"), f"{ep}.T", (reps[b].module_dim, reps[a].module_dim), named)
        maps.append((A, T))
    model = AlgebroidModel(base, [r.algebra for r in reps], reps, maps, check=False)
    if not ws.violations:
        for v in validate_model(model):
            d = v.as_dict()
            kind = v.kind
            if kind.startswith("flatness"):
                d["path"] = f"$.base.cells[{v.indices[0]}]"
            elif v.indices:
                d["path"] = f"{tp}[{v.indices[0]}]"
            else:
                d["path"] = fp
            ws.violations.append(d)
    ws.model = model


def _load_multivector(g: LieAlgebra, x: Any, path: str, degree: int) -> MultiVector:
    if isinstance(x, dict):
        terms = {}
        for key, val in x.items():
            try:
                idx = tuple(int(t) for t in key.split(","))
            except ValueError:
                raise ModelFileError(f"{path}.{key}", "term keys look like \"1,2\"") from None
            if len(idx) != degree or any(not 0 <= i < g.dim for i in idx):
                raise ModelFileError(f"{path}.{key}", f"expected {degree} basis indices below {g.dim}")
            terms[idx] = _rational(val, f"{path}.{key}")
        return MultiVector.from_terms(g, degree, terms)
    return MultiVector(g, degree, _vector(x, path, comb(g.dim, degree)))


def _load_bialgebra(ws: Workspace, spec: Any) -> None:
    path = "$.bialgebra"
    spec = _obj(spec, path)
    g = _ref(ws.algebras, spec.get("algebra"), f"{path}.algebra", "algebra")
    lam = _load_multivector(g, spec.get("Lambda", {}), f"{path}.Lambda", 2)
    om = spec.get("Omega")
    if om is None:
        omega = CobracketMap.zero(g)
    else:
        images = _list(om, f"{path}.Omega")
        if len(images) != g.dim:
            raise ModelFileError(f"{path}.Omega", f"expected one image per basis vector ({g.dim}), got {len(images)}")
        omega = CobracketMap.from_images(g, [
            MultiVector.zero(g, 2) if v is None else _load_multivector(g, v, f"{path}.Omega[{i}]", 2)
            for i, v in enumerate(images)
        ])
    ws.bialgebra = (g, lam, omega)


def _load_cocycles(ws: Workspace, spec: Any) -> None:
    m = ws.model
    if m is None:
        raise ModelFileError("$.cocycles", "cocycles need an algebroid model")
    for name, entry in _obj(spec, "$.cocycles").items():
        p = f"$.cocycles.{name}"
        entry = _obj(entry, p)
        deltas = _list(entry.get("delta", [None] * m.base.vertex_count), f"{p}.delta")
        if len(deltas) != m.base.vertex_count:
            raise ModelFileError(f"{p}.delta", f"expected one matrix per vertex ({m.base.vertex_count})")
        delta = []
        for x, d in enumerate(deltas):
            shape = (m.reps[x].module_dim, m.algebras[x].dim)
            delta.append(RationalMatrix.zeros(*shape) if d is None else _matrix(d, f"{p}.delta[{x}]", *shape))
        thetas = _list(entry.get("theta", [None] * len(m.base.edges)), f"{p}.theta")
        if len(thetas) != len(m.base.edges):
            raise ModelFileError(f"{p}.theta", f"expected one vector per edge ({len(m.base.edges)})")
        theta = []
        for e, t in enumerate(thetas):
            dim = m.reps[m.base.edges[e][1]].module_dim
            theta.append((Fraction(0),) * dim if t is None else _vector(t, f"{p}.theta[{e}]", dim))
        ws.cocycles[name] = MixedCochain(tuple(delta), tuple(theta))


def load_document(doc: Any, source: str = "<document>") -> Workspace:
    doc = _obj(doc, "$")
    if "schema_version" not in doc:
        raise ModelFileError("$.schema_version", "missing schema version")
    if doc["schema_version"] != SCHEMA_VERSION:
        raise ModelFileError("$.schema_version", f"unsupported schema version {doc['schema_version']!r} (expected {SCHEMA_VERSION})")
    known = {"schema_version", "lie_algebras", "representations", "fibers", "base", "matrices", "transports", "bialgebra", "cocycles", "tasks", "description"}
    for key in doc:
        if key not in known:
            raise ModelFileError(f"$.{key}", "unknown top-level key")
    ws = Workspace(source, doc)
    for name, spec in _obj(doc.get("lie_algebras", {}), "$.lie_algebras").items():
        ws.algebras[name] = _load_algebra(name, spec, f"$.lie_algebras.{name}", ws)
    for name, spec in _obj(doc.get("representations", {}), "$.representations").items():
        ws.representations[name] = _load_representation(name, spec, f"$.representations.{name}", ws)
    if "base" in doc:
        ws.base = _load_base(doc["base"], "$.base")
        if ws.representations:
            _load_model(ws, doc)
    if "bialgebra" in doc:
        _load_bialgebra(ws, doc["bialgebra"])
    if "cocycles" in doc:
        _load_cocycles(ws, doc["cocycles"])
    for i, t in enumerate(_list(doc.get("tasks", []), "$.tasks")):
        t = _obj(t, f"$.tasks[{i}]")
        _str(t.get("command"), f"$.tasks[{i}].command")
        ws.tasks.append(t)
    return ws


def load_path(path: str | Path) -> Workspace:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ModelFileError("$", f"cannot read {p}: {exc.strerror}") from None
    try:
        doc = json.loads(text, parse_float=lambda s: float(s))
    except json.JSONDecodeError as exc:
        raise ModelFileError("$", f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return load_document(doc, p.name)
