"""Command-line front end: ``alglab <command> MODEL.json [options]``.

Exit status: 0 when every requested verification passes, 1 when one fails,
2 on unreadable or invalid input.  Computations that only report values
(cohomology dimensions, coboundary detection) carry the verdict ``OK``.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable

from . import __version__
from .algebroid import (
    MixedCochain,
    compare_images,
    h1,
    is_cocycle,
    verify_kernel_theorem,
    verify_les,
    verify_six_statements,
)
from .basecomplex import LocalSystem, format_word, h_dims
from .bialg import MultiVector, coboundary_detect, compatible_pair_check, dual_bracket, is_cocycle_L2
from .ce import cohomology
from .errors import AlglabError
from .exactla import Fraction, RationalMatrix, Subspace
from .liealg import Representation
from .modelfile import ModelFileError, Workspace, load_path

REPORT_SCHEMA_VERSION = 1

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


# -- serialization ---------------------------------------------------------

def to_jsonable(x: Any) -> Any:
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, int):
        return x
    if isinstance(x, RationalMatrix):
        return [[str(v) for v in row] for row in x.row_list()]
    if isinstance(x, Subspace):
        return [[str(v) for v in row] for row in x.vectors()]
    if isinstance(x, MultiVector):
        return {"degree": x.degree, "coords": [str(v) for v in x.coords]}
    if isinstance(x, MixedCochain):
        return {"delta": [to_jsonable(d) for d in x.delta], "theta": [[str(v) for v in t] for t in x.theta]}
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    raise TypeError(f"cannot serialize {type(x).__name__}")


def _verdict(ok: bool) -> str:
    return "PASS" if ok else "FAIL"


# -- commands --------------------------------------------------------------

def _pick_representation(ws: Workspace, params: dict) -> Representation:
    name = params.get("representation")
    if name is not None:
        if name not in ws.representations:
            raise ModelFileError("$.params.representation", f"unknown representation {name!r}")
        return ws.representations[name]
    alg = params.get("algebra")
    if alg is not None:
        if alg not in ws.algebras:
            raise ModelFileError("$.params.algebra", f"unknown algebra {alg!r}")
        g = ws.algebras[alg]
        for r in ws.representations.values():
            if r.algebra is g:
                return r
        return Representation(g, [g.ad(i) for i in range(g.dim)], "adjoint", module_dim=g.dim)
    if not ws.representations:
        raise ModelFileError("$.representations", "no representation defined")
    return next(iter(ws.representations.values()))


def cmd_validate(ws: Workspace, params: dict) -> dict:
    ok = not ws.violations
    out = {"verdict": _verdict(ok), "violations": ws.violations}
    if ws.model is not None:
        b = ws.model.base
        out["model"] = {
            "vertices": b.vertex_count,
            "edges": len(b.edges),
            "cells": len(b.cells),
            "fiber_dims": [[g.dim, r.module_dim] for g, r in zip(ws.model.algebras, ws.model.reps)],
        }
    if not ok:
        out["first_violation"] = ws.violations[0]
    return out


def cmd_ce_cohomology(ws: Workspace, params: dict) -> dict:
    ws.require_valid()
    k = params.get("degree")
    if isinstance(k, bool) or not isinstance(k, int) or k < 0:
        raise ModelFileError("$.params.degree", "degree must be a non-negative integer")
    r = _pick_representation(ws, params)
    res = cohomology(r.algebra, r, k)
    return {
        "verdict": "OK",
        "representation": r.name,
        "degree": k,
        "h_dim": res.dim,
        "z_dim": res.z_dim,
        "b_dim": res.b_dim,
        "representatives": [c.coords for c in res.representatives],
    }


def cmd_algebroid_h1(ws: Workspace, params: dict) -> dict:
    m = ws.require_model()
    rep = h1(m)
    return {
        "verdict": "OK",
        "z1_dim": rep.z1_dim,
        "b1_dim": rep.b1_dim,
        "h1_dim": rep.h1_dim,
        "representatives": list(rep.representatives),
        "localization": [
            {
                "vertex": loc.vertex,
                "fiber_h1_dim": loc.fiber_h1_dim,
                "image_dim": loc.image_dim,
                "kernel_dim": loc.kernel_dim,
                "matrix": loc.matrix,
            }
            for loc in rep.localization
        ],
    }


def _vertex(ws: Workspace, params: dict, key: str = "vertex") -> int:
    m = ws.require_model()
    x = params.get(key, m.base.basepoint)
    if isinstance(x, bool) or not isinstance(x, int) or not 0 <= x < m.base.vertex_count:
        raise ModelFileError(f"$.params.{key}", f"vertex must be an integer in 0..{m.base.vertex_count - 1}, got {x!r}")
    return x


def cmd_kernel_theorem(ws: Workspace, params: dict) -> dict:
    m = ws.require_model()
    x = _vertex(ws, params)
    r = verify_kernel_theorem(m, x)
    out = {
        "verdict": r.verdict,
        "vertex": x,
        "ker_dim": r.ker_dim,
        "h1_f0": r.h1_f0,
        "h1_dim": r.h1_dim,
        "rho_matrix": r.rho_matrix,
        "dims_equal": r.dims_equal,
        "rho_injective": r.rho_injective,
        "image_is_kernel": r.image_is_kernel,
        "ker_f0_dim": r.ker_f0_dim,
    }
    if r.failures:
        out["first_violation"] = r.failures[0]
    return out


def cmd_six_statements(ws: Workspace, params: dict) -> dict:
    m = ws.require_model()
    x = _vertex(ws, params)
    name = params.get("cocycle")
    if name is None:
        targets = [(f"h1[{i}]", w) for i, w in enumerate(h1(m).representatives)]
        targets += sorted(ws.cocycles.items())
    else:
        if name not in ws.cocycles:
            raise ModelFileError("$.params.cocycle", f"unknown cocycle {name!r} (known: {', '.join(sorted(ws.cocycles)) or 'none'})")
        targets = [(name, ws.cocycles[name])]
    results = []
    for label, w in targets:
        if not is_cocycle(m, w):
            raise ModelFileError(f"$.cocycles.{label}", "not a cocycle of the model")
        r = verify_six_statements(m, w, x)
        entry = {"cocycle": label, "statements": list(r.statements), "verdict": r.verdict}
        if r.first_disagreement is not None:
            entry["first_violation"] = {"statement": r.first_disagreement}
        results.append(entry)
    ok = all(e["verdict"] == "PASS" for e in results)
    out = {"verdict": _verdict(ok), "vertex": x, "results": results}
    if not ok:
        out["first_violation"] = next(e for e in results if e["verdict"] != "PASS")["first_violation"]
    return out


def cmd_les_check(ws: Workspace, params: dict) -> dict:
    m = ws.require_model()
    r = verify_les(m)
    out = {
        "verdict": r.verdict,
        "h1_f0": r.h1_f0,
        "h1_f": r.h1_f,
        "h1_fbar": r.h1_fbar,
        "i_matrix": r.i_matrix,
        "j_matrix": r.j_matrix,
        "i_injective": r.i_injective,
        "exact_at_middle": r.exact_at_middle,
        "h0_fbar": r.h0_fbar,
        "connecting_matrix": r.connecting_matrix,
        "exact_at_f0": r.exact_at_f0,
    }
    if r.failures:
        out["first_violation"] = r.failures[0]
    return out


def cmd_compare_images(ws: Workspace, params: dict) -> dict:
    m = ws.require_model()
    n = m.base.vertex_count
    if "x" in params or "y" in params:
        pairs = [(_vertex(ws, params, "x"), _vertex(ws, params, "y"))]
    else:
        pairs = [(a, b) for a in range(n) for b in range(n) if a < b] or [(0, 0)]
    results = []
    for a, b in pairs:
        r = compare_images(m, a, b)
        entry = {
            "x": a,
            "y": b,
            "image_dim_x": r.image_dim_x,
            "image_dim_y": r.image_dim_y,
            "path": list(r.path),
            "transport_matrix": r.transport_matrix,
            "triangle_commutes": r.triangle_commutes,
            "maps_image_onto": r.maps_image_onto,
            "loops_checked": r.loops_checked,
            "path_independent": r.path_independent,
            "verdict": r.verdict,
        }
        if r.failures:
            entry["first_violation"] = r.failures[0]
        results.append(entry)
    ok = all(e["verdict"] == "PASS" for e in results)
    out = {"verdict": _verdict(ok), "results": results}
    if not ok:
        out["first_violation"] = next(e for e in results if e["verdict"] != "PASS")["first_violation"]
    return out


def _bialgebra(ws: Workspace):
    ws.require_valid()
    if ws.bialgebra is None:
        raise ModelFileError("$.bialgebra", "this command needs a 'bialgebra' section")
    return ws.bialgebra


def cmd_bialgebra_check(ws: Workspace, params: dict) -> dict:
    g, lam, omega = _bialgebra(ws)
    r = compatible_pair_check(g, lam, omega)
    d = dual_bracket(g, lam, omega)
    ok = r.passed and d.jacobi
    out = {
        "verdict": _verdict(ok),
        "cocycle": r.cocycle,
        "residual_zero": r.residual_zero,
        "schouten_lambda_lambda": r.schouten_lambda,
        "coboundary": r.coboundary,
        "triangular": r.triangular,
        "dual_structure_constants": d.structure_constants,
        "dual_jacobi": d.jacobi,
        "dual_abelian": d.is_abelian,
    }
    if not ok:
        if r.first_violation is not None:
            out["first_violation"] = {"compatibility": list(r.first_violation)}
        else:
            out["first_violation"] = {"dual_jacobi": d.violations[0].as_dict()}
    return out


def cmd_coboundary_detect(ws: Workspace, params: dict) -> dict:
    g, _, omega = _bialgebra(ws)
    if not is_cocycle_L2(g, omega):
        raise ModelFileError("$.bialgebra.Omega", "Omega is not a cocycle; coboundary detection needs a cocycle")
    mu = coboundary_detect(g, omega)
    return {"verdict": "OK", "coboundary": mu is not None, "mu": mu}


def cmd_base_cohomology(ws: Workspace, params: dict) -> dict:
    ws.require_valid()
    if ws.base is None:
        raise ModelFileError("$.base", "this command needs a base complex")
    coeff = params.get("coefficients", "trivial")
    if coeff == "trivial":
        dim = params.get("dim", 1)
        if isinstance(dim, bool) or not isinstance(dim, int) or dim < 0:
            raise ModelFileError("$.params.dim", "coefficient dimension must be a non-negative integer")
        ls = LocalSystem.trivial(ws.base, dim)
    elif coeff == "f0":
        m = ws.require_model()
        ls, _ = m.f0_local_system
    else:
        raise ModelFileError("$.params.coefficients", f"expected 'trivial' or 'f0', got {coeff!r}")
    r = h_dims(ls)
    return {
        "verdict": "OK",
        "coefficients": coeff,
        "fiber_dim": ls.fiber_dim,
        "h0": r.h0,
        "h1": r.h1,
        "representatives": list(r.representatives),
    }


COMMANDS: dict[str, Callable[[Workspace, dict], dict]] = {
    "validate": cmd_validate,
    "ce-cohomology": cmd_ce_cohomology,
    "algebroid-h1": cmd_algebroid_h1,
    "kernel-theorem": cmd_kernel_theorem,
    "six-statements": cmd_six_statements,
    "les-check": cmd_les_check,
    "compare-images": cmd_compare_images,
    "bialgebra-check": cmd_bialgebra_check,
    "coboundary-detect": cmd_coboundary_detect,
    "base-cohomology": cmd_base_cohomology,
}

PARAMS = {
    "validate": set(),
    "ce-cohomology": {"degree", "representation", "algebra"},
    "algebroid-h1": set(),
    "kernel-theorem": {"vertex"},
    "six-statements": {"cocycle", "vertex"},
    "les-check": set(),
    "compare-images": {"x", "y"},
    "bialgebra-check": set(),
    "coboundary-detect": set(),
    "base-cohomology": {"coefficients", "dim"},
}


def run_task(ws: Workspace, index: int, command: str, params: dict) -> dict:
    head = {"task": index, "command": command, "params": params}
    try:
        if command not in COMMANDS:
            raise ModelFileError(f"$.tasks[{index}].command", f"unknown command {command!r}")
        extra = set(params) - PARAMS[command]
        if extra:
            raise ModelFileError(f"$.tasks[{index}]", f"unknown parameter(s) for {command}: {', '.join(sorted(extra))}")
        body = COMMANDS[command](ws, params)
    except ModelFileError as exc:
        return {**head, "verdict": "ERROR", "error": {"path": exc.path, "message": exc.detail}}
    except AlglabError as exc:
        return {**head, "verdict": "ERROR", "error": {"path": "$", "message": str(exc)}}
    return {**head, **body}


def run_tasks(ws: Workspace, tasks: list[tuple[str, dict]], jobs: int = 1) -> list[dict]:
    """Run tasks, possibly concurrently; results come back in task order."""
    def one(item):
        i, (cmd, params) = item
        return run_task(ws, i, cmd, params)

    items = list(enumerate(tasks))
    if jobs > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(one, items))
    return [one(it) for it in items]


def exit_code(reports: list[dict]) -> int:
    verdicts = {r["verdict"] for r in reports}
    if "ERROR" in verdicts:
        return EXIT_INPUT
    if "FAIL" in verdicts:
        return EXIT_FAIL
    return EXIT_OK


def build_document(source: str, reports: list[dict]) -> dict:
    counts = {v: sum(r["verdict"] == v for r in reports) for v in ("PASS", "FAIL", "OK", "ERROR")}
    return to_jsonable({
        "schema_version": REPORT_SCHEMA_VERSION,
        "source": source,
        "reports": reports,
        "summary": counts,
        "exit_code": exit_code(reports),
    })


def render_json(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _short(v: Any) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(_short(x) for x in v) + "]"
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}: {_short(x)}" for k, x in sorted(v.items())) + "}"
    return str(v)


def render_text(doc: dict) -> str:
    lines = [f"alglab report for {doc['source']}"]
    for r in doc["reports"]:
        params = " ".join(f"{k}={v}" for k, v in sorted(r["params"].items()))
        lines.append(f"[{r['task']}] {r['command']}{' ' + params if params else ''}: {r['verdict']}")
        for key in sorted(r):
            if key in ("task", "command", "params", "verdict"):
                continue
            lines.append(f"    {key}: {_short(r[key])}")
    s = doc["summary"]
    lines.append(f"summary: {s['PASS']} pass, {s['FAIL']} fail, {s['OK']} ok, {s['ERROR']} error")
    return "\n".join(lines) + "\n"


# -- argument parsing ------------------------------------------------------

def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="text", help="report format (default: text)")
    common.add_argument("--jobs", type=int, default=1, help="run independent tasks on this many threads")

    p = argparse.ArgumentParser(prog="alglab", description="Exact Lie algebroid cohomology checks on JSON model files.")
    p.add_argument("--version", action="version", version=f"alglab {__version__}")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name: str, help_: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.add_argument("model", help="path to a JSON model file")
        return sp

    add("run", "run the tasks listed in the model file")
    add("validate", "check every structure in the file")
    sp = add("ce-cohomology", "Chevalley-Eilenberg cohomology H^k(g, V)")
    sp.add_argument("--degree", type=int, required=True)
    sp.add_argument("--representation")
    sp.add_argument("--algebra")
    add("algebroid-h1", "H^1 of the algebroid model with localization data")
    sp = add("kernel-theorem", "kernel of the localization map versus H^1(base, V0)")
    sp.add_argument("--vertex", type=int)
    sp = add("six-statements", "six characterizations of the localization kernel for one cocycle")
    sp.add_argument("--cocycle")
    sp.add_argument("--vertex", type=int)
    add("les-check", "exactness of H^1(F0) -> H^1(F) -> H^1(F/F0)")
    sp = add("compare-images", "localization images at two vertices")
    sp.add_argument("--x", type=int)
    sp.add_argument("--y", type=int)
    add("bialgebra-check", "compatible pair check and dual bracket")
    add("coboundary-detect", "decide whether Omega is a coboundary")
    sp = add("base-cohomology", "cohomology of the base with trivial or invariant coefficients")
    sp.add_argument("--coefficients", choices=("trivial", "f0"), default="trivial")
    sp.add_argument("--dim", type=int)
    return p


def _cli_params(args: argparse.Namespace) -> dict:
    keys = PARAMS.get(args.command, set())
    return {k: getattr(args, k) for k in sorted(keys) if getattr(args, k, None) is not None}


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        ws = load_path(args.model)
    except ModelFileError as exc:
        return _input_error(args, exc.path, exc.detail)
    except AlglabError as exc:
        return _input_error(args, "$", str(exc))
    if args.command == "run":
        if not ws.tasks:
            return _input_error(args, "$.tasks", "the file lists no tasks")
        tasks = [(t["command"], {k: v for k, v in t.items() if k != "command"}) for t in ws.tasks]
    else:
        tasks = [(args.command, _cli_params(args))]
    reports = run_tasks(ws, tasks, max(1, args.jobs))
    doc = build_document(ws.source, reports)
    out = render_json(doc) if args.format == "json" else render_text(doc)
    sys.stdout.write(out)
    for r in reports:
        if r["verdict"] == "ERROR":
            print(f"alglab: error in task {r['task']} at {r['error']['path']}: {r['error']['message']}", file=sys.stderr)
    return doc["exit_code"]


def _input_error(args: argparse.Namespace, path: str, message: str) -> int:
    if args.format == "json":
        doc = {"schema_version": REPORT_SCHEMA_VERSION, "error": {"path": path, "message": message}, "exit_code": EXIT_INPUT}
        sys.stdout.write(render_json(doc))
    print(f"alglab: input error at {path}: {message}", file=sys.stderr)
    return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
