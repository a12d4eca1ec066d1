"""Command-line front end.

Every command prints a JSON envelope (or a short text summary with
``--format text``).  Exit status: 0 for a conclusive result, 2 when a
search is Inconclusive, 1 on any error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from math import gcd
from pathlib import Path
from typing import Optional

from . import __version__
from .bounds import VARIANTS, SlopeConstraint, ale_constant, audit_zero_efficiency
from .coords import is_admissible
from .enumeration import EnumerationBudget, ResourceBudgetExceeded, enumerate_fundamental_solutions, enumerate_vertex_solutions
from .filling import build_lst, dehn_drill, dehn_fill
from .fixtures import FIXTURES, load_triangulation
from .geometry import classify, reconstruct
from .search import ORACLES, SearchBudget, find_essential_disk, search_longitude, search_planar, search_punctured_disk, slope_set
from .slopes import BoundaryFrame, InvalidSlope, boundary_frame, enumerate_short_slopes, parse_slope, slope_from_curve, slope_length
from .triangulation import layer_on_edge

EXIT_OK, EXIT_ERROR, EXIT_INCONCLUSIVE = 0, 1, 2


class UsageError(Exception):
    code = "UsageError"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _boundary_id(text: str) -> int:
    t = text.strip()
    if t[:1] in "Bb":
        t = t[1:]
    if not t.isdigit():
        raise UsageError(f"boundary must look like B0, got {text!r}")
    return int(t)


def _budget(args) -> SearchBudget:
    b = SearchBudget()
    if args.budget_rays is not None:
        b.max_rays = args.budget_rays
    if args.budget_parallelepiped is not None:
        b.max_parallelepiped = args.budget_parallelepiped
    if args.budget_seconds is not None:
        b.max_seconds = args.budget_seconds
    if args.budget_fillings is not None:
        b.max_fillings = args.budget_fillings
    if args.budget_slope_length is not None:
        b.max_slope_length = args.budget_slope_length
    return b


def _slope(T, text: str, boundary: Optional[int] = None):
    p, q, k = parse_slope(text, boundary if boundary is not None else 0)
    if boundary is not None and k != boundary:
        raise UsageError(f"slope {text} names B{k} but --boundary is B{boundary}")
    if gcd(p, q) != 1:
        raise InvalidSlope(f"{p}/{q} is not a primitive slope")
    return boundary_frame(T, k).slope(p, q)


def _surface(v, T) -> dict:
    sg = reconstruct(v, T)
    out = sg.to_json()
    out["classification"] = classify(sg).to_json()
    slopes = []
    for c in sg.curves:
        if c.trivial:
            slopes.append(f"trivial@B{c.boundary_id}")
        elif c.z is not None:
            slopes.append(str(slope_from_curve(c, T)))
        else:
            slopes.append(None)
    out["slopes"] = slopes
    return out


# ----------------------------------------------------------------------
# command handlers: each returns (result payload, exit code)


def cmd_tri(args, T):
    if args.action == "layer":
        L = layer_on_edge(T, args.edge)
        return {"triangulation": L.to_json(), "counts": L.counts}, EXIT_OK
    info = {
        "counts": T.counts,
        "orientable": T.orientable,
        "valid_edges": T.valid_edges,
        "manifold": T.is_manifold,
        "boundary": [
            {"id": f"B{c.id}", "triangles": [list(x) for x in c.triangles], "edges": list(c.edges),
             "vertices": len(c.vertices), "euler": c.euler_characteristic, "one_vertex_torus": c.one_vertex_torus}
            for c in T.boundary
        ],
        "warnings": T.warnings(),
    }
    if args.action == "check":
        ok = T.is_manifold and not T.warnings()
        return {"ok": ok, **info}, EXIT_OK if ok else EXIT_ERROR
    info["edge_classes"] = [[list(m) for m in cls] for cls in T.edge_classes]
    info["vertex_classes"] = [[list(m) for m in cls] for cls in T.vertex_classes]
    return info, EXIT_OK


def cmd_ns(args, T):
    if args.action == "info":
        data = json.loads(Path(args.vector).read_text())
        v = tuple(data["vector"] if isinstance(data, dict) else data)
        if not is_admissible(v, T):
            return {"admissible": False}, EXIT_ERROR
        return {"admissible": True, "surface": _surface(v, T)}, EXIT_OK
    budget = EnumerationBudget(**{k: v for k, v in (
        ("max_rays", args.budget_rays), ("max_parallelepiped", args.budget_parallelepiped),
        ("max_seconds", args.budget_seconds)) if v is not None})
    constraint = None
    if args.slope:
        s = _slope(T, args.slope)
        constraint = SlopeConstraint(s.boundary_id, s)
    if args.vertex:
        basis = enumerate_vertex_solutions(T, constraint, budget)
    else:
        basis = enumerate_fundamental_solutions(T, constraint, budget, jobs=args.jobs)
    surfaces = []
    for v in basis.admissible:
        sg = reconstruct(v, T)
        comp = sg.components[0] if sg.connected else None
        surfaces.append({
            "vector": list(v),
            "chi": sg.euler,
            "connected": sg.connected,
            "orientable": comp.orientable if comp else None,
            "boundary_curves": len(sg.curves),
            "vertex_linking": bool(comp and comp.vertex_linking),
            "slopes": _surface(v, T)["slopes"],
        })
    return {
        "mode": "vertex" if args.vertex else "fundamental",
        "constraint": constraint.to_json() if constraint else None,
        "count": len(surfaces),
        "surfaces": surfaces,
    }, EXIT_OK


def cmd_lst(args, T):
    if args.weights:
        w = tuple(int(x) for x in args.weights.split(","))
    else:
        p, q, _ = parse_slope(args.slope)
        frame = BoundaryFrame(0, (0, 1, 2), 1, (0, 0))
        w = frame.slope(p, q).weights
    L = build_lst(w)
    return {**L.to_json(), "meridian": str(L.meridian), "counts": L.triangulation.counts}, EXIT_OK


def cmd_fill(args, T):
    b = _boundary_id(args.boundary)
    F = dehn_fill(T, b, _slope(T, args.slope, b))
    return {**F.to_json(), "counts": F.triangulation.counts}, EXIT_OK


def cmd_drill(args, T):
    b = _boundary_id(args.boundary)
    D = dehn_drill(T, b, _slope(T, args.slope, b))
    return {**D.to_json(), "counts": D.triangulation.counts}, EXIT_OK


def cmd_ale(args, T):
    constraint = None
    if args.slope:
        s = _slope(T, args.slope)
        constraint = SlopeConstraint(s.boundary_id, s)
    basis = enumerate_fundamental_solutions(T, constraint, jobs=args.jobs)
    C = ale_constant(basis, T, args.variant)
    return {**C.to_json(), "constraint": constraint.to_json() if constraint else None}, EXIT_OK


def cmd_slopes(args, T):
    b = _boundary_id(args.boundary)
    frame = boundary_frame(T, b)
    slopes = enumerate_short_slopes(frame, args.bound)
    return {"boundary": f"B{b}", "bound": str(args.bound), "count": len(slopes),
            "slopes": [{"slope": str(s), "length": slope_length(s), "weights": list(s.weights)} for s in slopes]}, EXIT_OK


def cmd_audit(args, T):
    return audit_zero_efficiency(T).to_json(), EXIT_OK


def cmd_search(args, T):
    budget = _budget(args)
    oracle = args.oracle
    if args.kind == "planar":
        rep = search_planar(T, oracle, budget)
    elif args.kind in ("punctured-disk", "longitude"):
        if args.slope is None:
            raise UsageError(f"search {args.kind} needs --slope")
        b = _boundary_id(args.boundary)
        s = _slope(T, args.slope, b)
        rep = (search_punctured_disk if args.kind == "punctured-disk" else search_longitude)(T, b, s, oracle, budget)
    elif args.kind == "disk":
        rep = find_essential_disk(T, _boundary_id(args.boundary), oracle, budget)
    else:
        ss = slope_set(T, _boundary_id(args.boundary), oracle, budget)
        return ss.to_json(), EXIT_OK if ss.complete else EXIT_INCONCLUSIVE
    return rep.to_json(), EXIT_OK if rep.conclusive else EXIT_INCONCLUSIVE


HANDLERS = {
    "tri": cmd_tri, "ns": cmd_ns, "lst": cmd_lst, "fill": cmd_fill, "drill": cmd_drill,
    "ale": cmd_ale, "slopes": cmd_slopes, "audit": cmd_audit, "search": cmd_search,
}


def _add_budget(p):
    p.add_argument("--budget-rays", type=int)
    p.add_argument("--budget-parallelepiped", type=int)
    p.add_argument("--budget-seconds", type=float)


def _common(defaults: bool) -> argparse.ArgumentParser:
    """Options accepted both before and after the subcommand."""
    kw = {} if defaults else {"default": argparse.SUPPRESS}
    p = _Parser(add_help=False)
    p.add_argument("-i", "--input", help=f"gluing-table JSON file or fixture ({', '.join(FIXTURES)})",
                   **({"default": "solid-torus"} if defaults else kw))
    p.add_argument("--format", choices=("json", "text"), **({"default": "json"} if defaults else kw))
    p.add_argument("-o", "--output", help="write the report here instead of stdout",
                   **({"default": None} if defaults else kw))
    p.add_argument("--jobs", type=int, **({"default": 1} if defaults else kw))
    return p


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="normsurf", description="Normal-surface computations on triangulated 3-manifolds.",
                 parents=[_common(True)])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)
    common = _common(False)
    _add = sub.add_parser

    def add_parser(name, **kw):
        return _add(name, parents=[common], **kw)

    sub.add_parser = add_parser

    p = sub.add_parser("tri", help="triangulation checks and layering")
    p.add_argument("action", choices=("check", "info", "layer"))
    p.add_argument("--edge", type=int, help="boundary edge class to layer on")

    p = sub.add_parser("ns", help="normal-surface enumeration and inspection")
    p.add_argument("action", choices=("enumerate", "info"))
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--vertex", action="store_true")
    mode.add_argument("--fundamental", action="store_true")
    p.add_argument("--slope", help="restrict to surfaces meeting Bk only in P/Q (P/Q@Bk)")
    p.add_argument("--vector", help="JSON file holding a vector (ns info)")
    _add_budget(p)

    p = sub.add_parser("lst", help="layered solid tori")
    p.add_argument("action", choices=("build",))
    p.add_argument("--slope", help="meridian P/Q in the standard edge frame")
    p.add_argument("--weights", help="meridian edge weights a,b,c")

    for name in ("fill", "drill"):
        p = sub.add_parser(name, help=f"triangulated Dehn {'filling' if name == 'fill' else 'drilling'}")
        p.add_argument("--boundary", default="B0")
        p.add_argument("--slope", required=True)

    p = sub.add_parser("ale", help="average-length constants")
    p.add_argument("--variant", choices=VARIANTS, default="Basic")
    p.add_argument("--slope")

    p = sub.add_parser("slopes", help="slope utilities")
    p.add_argument("action", choices=("short",))
    p.add_argument("--bound", type=int, required=True)
    p.add_argument("--boundary", default="B0")

    p = sub.add_parser("audit", help="0-efficiency audit")
    p.add_argument("action", choices=("zero-efficiency",))

    p = sub.add_parser("search", help="search drivers")
    p.add_argument("kind", choices=("planar", "punctured-disk", "longitude", "slope-set", "disk"))
    p.add_argument("--boundary", default="B0")
    p.add_argument("--slope")
    p.add_argument("--oracle", default="default", help=f"registered oracle ({', '.join(ORACLES)})")
    _add_budget(p)
    p.add_argument("--budget-fillings", type=int)
    p.add_argument("--budget-slope-length", type=int)
    return ap


def _text(result: dict, command: str) -> str:
    lines = [f"command: {command}"]
    for key in ("outcome", "ok", "count", "C", "meridian", "zero_efficient", "complete", "slopes", "reasons"):
        if key in result:
            val = result[key]
            if key == "slopes" and isinstance(val, list) and val and isinstance(val[0], dict):
                val = ", ".join(s["slope"] for s in val)
            lines.append(f"{key}: {val}")
    if "certificate" in result and result["certificate"]:
        cert = result["certificate"]
        lines.append(f"certificate: chi={cert.get('euler')} slopes={cert.get('slopes')}")
    if "counts" in result:
        lines.append("counts: " + ", ".join(f"{k}={v}" for k, v in result["counts"].items()))
    return "\n".join(lines)


def run(argv=None) -> tuple[int, dict]:
    """Execute one command; returns the exit code and the report envelope."""
    argv = list(sys.argv[1:] if argv is None else argv)
    start = time.time()
    envelope = {"tool": "normsurf", "version": __version__, "argv": argv}
    try:
        args = build_parser().parse_args(argv)
        envelope["_format"], envelope["_output"] = args.format, args.output
        T = load_triangulation(args.input)
        envelope.update(command=args.command, input=args.input,
                        input_hash=hashlib.sha256(T.dumps().encode()).hexdigest()[:16],
                        parameters={k: v for k, v in vars(args).items() if k not in ("input", "output", "format")})
        result, code = HANDLERS[args.command](args, T)
        envelope["result"] = result
    except ResourceBudgetExceeded as exc:
        envelope["error"] = {"code": "ResourceBudgetExceeded", "message": str(exc)}
        code = EXIT_INCONCLUSIVE
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0), {}
    except Exception as exc:
        envelope["error"] = {"code": getattr(exc, "code", type(exc).__name__), "message": str(exc)}
        code = EXIT_ERROR
    envelope["seconds"] = round(time.time() - start, 3)
    envelope["exit"] = code
    return code, envelope


def main(argv=None) -> int:
    code, envelope = run(argv)
    if not envelope:
        return code
    fmt = envelope.pop("_format", "json")
    dest = envelope.pop("_output", None)
    if fmt == "text" and "result" in envelope:
        out = _text(envelope["result"], envelope.get("command", ""))
    else:
        out = json.dumps(envelope, indent=1, default=str)
    if dest:
        Path(dest).write_text(out + "\n")
    else:
        print(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
