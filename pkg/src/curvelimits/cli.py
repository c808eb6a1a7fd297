"""Command line interface.

Subcommands::

    curvelimits analyze <poly>
    curvelimits limit <poly> <germ>
    curvelimits normalize <germ>
    curvelimits newton <poly> <point> <line>
    curvelimits puiseux <poly> <point> <line> [--order q]
    curvelimits classify <poly>

Any argument of the form ``@path`` is replaced by the UTF-8 contents of that
file.  ``--json`` switches to machine output; every JSON document carries
``schema_version`` (see ``SCHEMA_VERSION``) and the tool version.

Exit codes: 0 success, 2 invalid input (parse or geometric precondition),
3 a resource cap was hit, 4 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from typing import Any

from . import __version__
from .classify import SmallOrbitClass, boundary_from_report, classify_limit
from .config import override_limits
from .curve import Flag, Line, PlaneCurve, Point
from .errors import CapError, CurveLimitsError, GeometryError, InvariantError, ParseError
from .forms import HomogeneousForm, factor
from .germs import Germ, normalize_germ
from .limits import apply_germ, is_kernel_star
from .newton import newton_polygon, relevant_sides, side_limit_form
from .parsing import parse_curve, parse_matrix_entries, parse_vector
from .pnc import analyze
from .puiseux import characteristics, puiseux_branches

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_CAP = 3
EXIT_INTERNAL = 4

STAR_NOTE = ("star family: every star of lines through a point of a kernel line is a "
             "limit along rank-2 germs; these limits lie in the boundary but add no "
             "component")


# ---------------------------------------------------------------------------
# input


def read_source(arg: str) -> str:
    if arg.startswith("@"):
        try:
            with open(arg[1:], encoding="utf-8") as fh:
                return fh.read()
        except OSError as exc:
            raise ParseError(f"cannot read {arg[1:]}: {exc.strerror}") from None
    return arg


def _curve(arg: str) -> PlaneCurve:
    return PlaneCurve(parse_curve(read_source(arg)))


def _germ(arg: str, tower=None) -> Germ:
    tower, entries = parse_matrix_entries(read_source(arg), tower)
    return Germ(entries, tower)


def _flag(C: PlaneCurve, point_arg: str, line_arg: str) -> Flag:
    p = Point(parse_vector(read_source(point_arg), C.tower))
    l = Line(parse_vector(read_source(line_arg), C.tower))
    return Flag(p, l)


# ---------------------------------------------------------------------------
# serialisation helpers


def _classification(kind) -> dict:
    if isinstance(kind, SmallOrbitClass):
        return {"id": kind.identifier, "label": kind.label, "dimension": kind.dimension}
    return {"id": str(kind), "label": "large linear orbit", "dimension": 8}


def _class_text(kind) -> str:
    return str(kind) if isinstance(kind, SmallOrbitClass) else f"{kind} (orbit dimension 8)"


def _frac(q: Fraction) -> str:
    return str(q)


def _limit_record(L) -> dict:
    return {"order": L.order, "raw": str(L.form), "factored": str(factor(L.form))}


def _field(tower) -> list[str]:
    return tower.describe()


# ---------------------------------------------------------------------------
# commands; each returns (json document, text lines)


def cmd_analyze(curve_arg: str) -> tuple[dict, list[str]]:
    C = _curve(curve_arg)
    report = analyze(C)
    comps = []
    for comp in report.components:
        comps.append({
            "type": comp.type,
            "features": list(comp.features),
            "point": str(comp.point) if comp.point is not None else None,
            "germ": comp.germ.format(),
            "germs": [g.format() for g in comp.germs],
            "limit": _limit_record(comp.limit),
            "classification": _classification(comp.classification),
        })
    dropped = [{
        "type": d.type,
        "feature": d.feature,
        "reason": d.reason,
        "limit": str(d.candidate.limit.form) if d.candidate is not None else None,
    } for d in report.dropped]
    doc = {
        "input": {"curve": str(C.form), "field": _field(report.tower)},
        "counts": report.counts(),
        "components": comps,
        "dropped": dropped,
        "boundary": {
            "limits": [{"type": e.note, "limit": str(e.limit.form),
                        "classification": _classification(e.kind)}
                       for e in boundary_from_report(report) if e.limit is not None],
            "star_family": STAR_NOTE,
        },
    }
    lines = [f"curve: {C.form}"]
    for rel in _field(report.tower):
        lines.append(f"field: {rel}")
    counts = report.counts()
    lines.append("components: " + " ".join(f"{t}:{n}" for t, n in counts.items()))
    for i, comp in enumerate(comps, 1):
        lines.append("")
        lines.append(f"[{i}] type {comp['type']}")
        for feat in comp["features"]:
            lines.append(f"    feature: {feat}")
        for g in comp["germs"]:
            lines.append(f"    germ: {g}")
        lim = comp["limit"]
        lines.append(f"    limit: {lim['raw']}  (order {lim['order']})")
        lines.append(f"    factored: {lim['factored']}")
        cls = comp["classification"]
        lines.append(f"    class: {cls['id']} ({cls['label']}, orbit dimension {cls['dimension']})")
    if dropped:
        lines.append("")
        lines.append("dropped candidates:")
        for d in dropped:
            lim = f" limit {d['limit']}" if d["limit"] else ""
            lines.append(f"    type {d['type']} {d['feature']}: {d['reason']}{lim}")
    lines.append("")
    lines.append("boundary:")
    for e in doc["boundary"]["limits"]:
        lines.append(f"    {e['classification']['id']}: {e['limit']}  (type {e['type']})")
    lines.append(STAR_NOTE)
    return doc, lines


def cmd_limit(curve_arg: str, germ_arg: str) -> tuple[dict, list[str]]:
    C = _curve(curve_arg)
    alpha = _germ(germ_arg, C.tower)
    L = apply_germ(C, alpha)
    kind = classify_limit(L)
    kernel_star = is_kernel_star(L, alpha) if alpha.center_rank == 1 else None
    doc = {
        "input": {"curve": str(C.form), "germ": alpha.format(), "field": _field(L.tower)},
        "limit": _limit_record(L),
        "classification": _classification(kind),
        "center_rank": alpha.center_rank,
        "kernel_star": kernel_star,
    }
    lines = [f"curve: {C.form}", f"germ: {alpha.format()}",
             f"order: {L.order}", f"limit: {L.form}", f"factored: {factor(L.form)}",
             f"class: {_class_text(kind)}", f"center rank: {alpha.center_rank}"]
    if kernel_star is not None:
        lines.append(f"kernel star: {'yes' if kernel_star else 'no'}")
    return doc, lines


def cmd_normalize(germ_arg: str) -> tuple[dict, list[str]]:
    alpha = _germ(germ_arg)
    sf = normalize_germ(alpha)
    fmt = lambda m: [[str(x) for x in row] for row in m]  # noqa: E731
    doc = {
        "input": {"germ": alpha.format(), "field": _field(alpha.tower)},
        "H": fmt(sf.H), "b": sf.b, "c": sf.c,
        "q": str(sf.q), "r": str(sf.r), "s": str(sf.s),
        "M": fmt(sf.M),
        "reparametrization": str(sf.reparametrization) if sf.reparametrization is not None
        else None,
        "certified": sf.certify(alpha),
        "bound_violations": sf.check_bounds(),
    }
    lines = [f"germ: {alpha.format()}", str(sf)]
    if sf.reparametrization is not None:
        lines.append(f"reparametrization: t -> t*({sf.reparametrization})")
    lines.append(f"certified: {'yes' if doc['certified'] else 'no'}")
    return doc, lines


def cmd_newton(curve_arg: str, point_arg: str, line_arg: str) -> tuple[dict, list[str]]:
    C = _curve(curve_arg)
    flag = _flag(C, point_arg, line_arg)
    poly = newton_polygon(C, flag)
    rel = set(relevant_sides(poly))
    sides = []
    for s in poly.sides:
        rec = {"start": list(s.start), "end": list(s.end), "slope": _frac(s.slope),
               "b": s.b, "c": s.c, "S": s.segments, "relevant": s in rel}
        if s in rel and poly.usable:
            rec["limit"] = str(side_limit_form(C, flag, s))
        sides.append(rec)
    doc = {
        "input": {"curve": str(C.form), "point": str(flag.point), "line": str(flag.line),
                  "field": _field(poly.local.tower)},
        "local_equation": str(poly.local),
        "usable": poly.usable,
        "vertices": [list(v) for v in poly.vertices],
        "sides": sides,
    }
    lines = [f"curve: {C.form}", f"flag: {flag}", f"local equation: {poly.local}",
             "line in tangent cone: " + ("yes" if poly.usable else "no"),
             "vertices (j, k): " + " ".join(f"({j},{k})" for j, k in poly.vertices),
             "sides:", f"    {'start':>8} {'end':>8} {'slope':>7} {'S':>3}  relevant"]
    for s in sides:
        start, end = "({},{})".format(*s["start"]), "({},{})".format(*s["end"])
        lines.append(f"    {start:>8} {end:>8} {s['slope']:>7} {s['S']:>3}  "
                     + ("yes" if s["relevant"] else "no")
                     + (f"  limit {s['limit']}" if "limit" in s else ""))
    return doc, lines


def cmd_puiseux(curve_arg: str, point_arg: str, line_arg: str,
                order: Fraction | None = None) -> tuple[dict, list[str]]:
    C = _curve(curve_arg)
    flag = _flag(C, point_arg, line_arg)
    branches = puiseux_branches(C, flag, order)
    data = characteristics(C, flag, order)

    def series(b):
        return [{"exponent": _frac(e), "coefficient": str(c)} for e, c in b.terms]

    doc = {
        "input": {"curve": str(C.form), "point": str(flag.point), "line": str(flag.line)},
        "branches": [{
            "variable": "z" if b.swapped else "y",
            "terms": series(b),
            "known_to": _frac(b.known_to) if b.known_to is not None else None,
            "multiplicity": b.multiplicity,
        } for b in branches],
        "characteristics": [{
            "C": _frac(d.C), "lambda0": _frac(d.lambda0), "S": d.S,
            "gamma_C": [{"value": str(g), "multiplicity": m} for g, m in d.gammas],
            "gamma_lambda0": str(d.gamma_lambda0), "gamma_mid": str(d.gamma_mid),
            "truncation": [{"exponent": _frac(e), "coefficient": str(c)}
                           for e, c in d.truncation],
        } for d in data],
    }
    lines = [f"curve: {C.form}", f"flag: {flag}", "branches (flag coordinates):"]
    for b in branches:
        mult = f"  (multiplicity {b.multiplicity})" if b.multiplicity > 1 else ""
        lines.append(f"    {b}{mult}")
    if data:
        lines.append("characteristic data:")
        for d in data:
            lines.append(f"    {d}")
    return doc, lines


def cmd_classify(curve_arg: str) -> tuple[dict, list[str]]:
    C = _curve(curve_arg)
    kind = classify_limit(C.form)
    doc = {"input": {"curve": str(C.form)}, "factored": str(factor(C.form)),
           "classification": _classification(kind)}
    return doc, [f"curve: {C.form}", f"factored: {factor(C.form)}", f"class: {_class_text(kind)}"]


# ---------------------------------------------------------------------------
# driver


def _order(text: str) -> Fraction:
    try:
        q = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None
    if q <= 0:
        raise argparse.ArgumentTypeError("order must be positive")
    return q


def _positive(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return n


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="machine readable output")
    common.add_argument("--timing", action="store_true", default=argparse.SUPPRESS,
                        help="report wall clock time (breaks byte-identical output)")
    common.add_argument("--tower-height", type=_positive, default=argparse.SUPPRESS,
                        help="maximum number of adjoined generators (default 4)")
    common.add_argument("--puiseux-order", type=_positive, default=argparse.SUPPRESS,
                        help="Puiseux truncation order (default 4*d^2)")
    common.add_argument("--t-degree-cap", type=_positive, default=argparse.SUPPRESS,
                        help="maximum t-degree of a substituted curve (default 512)")

    parser = argparse.ArgumentParser(
        prog="curvelimits", parents=[common],
        description="Limits of plane curves under degenerating linear transformations.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common],
                       help="enumerate the components of the projective normal cone")
    p.add_argument("poly")
    p = sub.add_parser("limit", parents=[common], help="limit of a curve along a germ")
    p.add_argument("poly")
    p.add_argument("germ")
    p = sub.add_parser("normalize", parents=[common], help="normal form of a germ")
    p.add_argument("germ")
    p = sub.add_parser("newton", parents=[common], help="Newton polygon at a flag")
    p.add_argument("poly")
    p.add_argument("point")
    p.add_argument("line")
    p = sub.add_parser("puiseux", parents=[common], help="Puiseux branches at a flag")
    p.add_argument("poly")
    p.add_argument("point")
    p.add_argument("line")
    p.add_argument("--order", type=_order, default=None,
                   help="truncation exponent (rational, default 4*d^2)")
    p = sub.add_parser("classify", parents=[common], help="small-orbit classification")
    p.add_argument("poly")
    return parser


def _dispatch(args) -> tuple[dict, list[str]]:
    if args.command == "analyze":
        return cmd_analyze(args.poly)
    if args.command == "limit":
        return cmd_limit(args.poly, args.germ)
    if args.command == "normalize":
        return cmd_normalize(args.germ)
    if args.command == "newton":
        return cmd_newton(args.poly, args.point, args.line)
    if args.command == "puiseux":
        return cmd_puiseux(args.poly, args.point, args.line, args.order)
    return cmd_classify(args.poly)


def _emit_error(args, code: int, kind: str, exc: Exception) -> int:
    message = str(exc)
    if getattr(args, "json", False):
        doc: dict[str, Any] = {"schema_version": SCHEMA_VERSION, "tool": "curvelimits",
                               "version": __version__, "command": args.command,
                               "error": {"kind": kind, "message": message, "exit_code": code}}
        if isinstance(exc, ParseError) and exc.position is not None:
            doc["error"]["position"] = exc.position
        if getattr(exc, "feature", None):
            doc["error"]["feature"] = exc.feature
        print(json.dumps(doc, indent=2))
    print(f"curvelimits: {kind}: {message}", file=sys.stderr)
    return code


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    caps = {}
    if getattr(args, "tower_height", None):
        caps["max_tower_height"] = args.tower_height
    if getattr(args, "puiseux_order", None):
        caps["puiseux_order"] = args.puiseux_order
    if getattr(args, "t_degree_cap", None):
        caps["t_degree_cap"] = args.t_degree_cap
    start = time.perf_counter()
    try:
        with override_limits(**caps):
            doc, lines = _dispatch(args)
    except ParseError as exc:
        return _emit_error(args, EXIT_INPUT, "parse error", exc)
    except GeometryError as exc:
        return _emit_error(args, EXIT_INPUT, "invalid input", exc)
    except CapError as exc:
        return _emit_error(args, EXIT_CAP, "resource cap", exc)
    except (InvariantError, CurveLimitsError) as exc:
        return _emit_error(args, EXIT_INTERNAL, "internal error", exc)
    except Exception as exc:  # noqa: BLE001 - any other failure is a bug
        return _emit_error(args, EXIT_INTERNAL, "internal error",
                           RuntimeError(f"{type(exc).__name__}: {exc}"))
    elapsed = time.perf_counter() - start
    if getattr(args, "json", False):
        out = {"schema_version": SCHEMA_VERSION, "tool": "curvelimits", "version": __version__,
               "command": args.command, **doc}
        if getattr(args, "timing", False):
            out["timing_seconds"] = round(elapsed, 3)
        print(json.dumps(out, indent=2))
    else:
        print("\n".join(lines))
        if getattr(args, "timing", False):
            print(f"time: {elapsed:.3f} s")
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
