"""Command-line interface.

Output is JSON unless ``--format`` says otherwise.  Exit codes: 0 success,
1 a consistency sweep found disagreements, 2 bad input, 3 the quadrature
ran out of patch budget.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import kinematics as kin
from . import measure, montecarlo, regions, render
from .kinematics import Triangle
from .measure import BudgetExceeded, DivisionByZeroMeasure
from .montecarlo import InsufficientConditionSamples, McConfig
from .regions import Convention
from .shape_map import shape_point, spherical_coords, stereographic_ratio

EVENTS = ("obtuse", "acute", "tall", "flat", "regular", "isosceles", "collinear", "right")
CURVE_EVENTS = ("regular", "isosceles", "collinear", "right")
CONVENTIONS = tuple(c.value for c in Convention)
TABLE_COLUMNS = ("event", "exact_expr", "exact", "quadrature", "quad_err", "mc", "mc_stderr",
                 "published", "convention")


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _uint64(text: str) -> int:
    v = int(text, 0)
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("expected an unsigned 64-bit integer")
    return v


def _count(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("expected a non-negative integer")
    return v


def _positive_float(text: str) -> float:
    v = float(text)
    if not (math.isfinite(v) and v > 0):
        raise argparse.ArgumentTypeError("expected a positive number")
    return v


def _add_triangle(p):
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--triangle", help="JSON vertex list [[x1,y1],[x2,y2],[x3,y3]]")
    g.add_argument("--in", dest="infile", help="file holding the triangle JSON")


def _add_mc(p, n_default):
    p.add_argument("--seed", type=_uint64, default=42)
    p.add_argument("--n", type=_count, default=n_default, help="Monte Carlo samples (0 to skip)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="triangleland", description="Shape-sphere probabilities for triangles.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("classify", help="angle and aspect classes of one triangle")
    _add_triangle(p)
    p.add_argument("--tol", type=_positive_float, default=kin.DEFAULT_TOL)

    p = sub.add_parser("map", help="shape-sphere point of one triangle")
    _add_triangle(p)
    p.add_argument("--cluster", default="1", choices=("1", "2", "3", "canonical"))

    for name, help_ in (("prob", "probability of an event"),
                        ("conditional", "conditional probability of an event")):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--event", required=True, choices=EVENTS)
        if name == "conditional":
            p.add_argument("--given", required=True,
                           help="an event or a curve: right_cap_k, isosceles_meridian_k, "
                                "regular_meridian_k, equator")
        p.add_argument("--convention", default="canonical", choices=CONVENTIONS)
        p.add_argument("--tol", type=_positive_float, default=1e-5)
        _add_mc(p, 100_000)

    p = sub.add_parser("table", help="full catalog: exact, quadrature, Monte Carlo, published value")
    p.add_argument("--convention", default="canonical", choices=CONVENTIONS)
    p.add_argument("--tol", type=_positive_float, default=1e-4)
    p.add_argument("--format", default="json", choices=("json", "csv", "text"))
    _add_mc(p, 100_000)

    p = sub.add_parser("reconcile", help="published expressions against computed values")
    p.add_argument("--tol", type=_positive_float, default=1e-4)

    p = sub.add_parser("sample", help="uniform shape-sphere samples, or an estimate with --event")
    p.add_argument("--event", choices=tuple(e for e in EVENTS if e not in CURVE_EVENTS))
    p.add_argument("--convention", default="canonical", choices=CONVENTIONS)
    p.add_argument("--format", default="json", choices=("json", "csv", "text"))
    _add_mc(p, 10)

    p = sub.add_parser("sweep", help="sphere predicates against space classifiers")
    p.add_argument("--eps", type=_positive_float, default=1e-6)
    _add_mc(p, 100_000)

    p = sub.add_parser("render", help="SVG of the decorated sphere")
    p.add_argument("--view", default="1,1,1", help="view direction X,Y,Z in frame 1")
    p.add_argument("--out", help="output file (default stdout)")
    return parser


# --- commands ------------------------------------------------------------------

def _read_triangle(args) -> Triangle:
    text = args.triangle
    if text is None:
        with open(args.infile) as f:
            text = f.read()
    try:
        return Triangle.from_json(text)
    except (json.JSONDecodeError, TypeError, KeyError) as e:
        raise UsageError(f"malformed triangle: {e}") from None


def cmd_classify(args) -> dict:
    t = _read_triangle(args)
    angle = kin.classify_angle(t, args.tol)
    out = {
        "angle": angle.kind.value,
        "vertex": None if angle.vertex is None else int(angle.vertex),
        "sides": list(kin.side_lengths(t)),
    }
    try:
        out["angles"] = list(kin.interior_angles(t, args.tol))
    except kin.DegenerateTriangle:
        out["angles"] = None
    for k in kin.CLUSTERS:
        out[f"aspect_cluster{int(k)}"] = kin.classify_aspect(t, k, args.tol).kind.value
    c = kin.canonical_cluster(t, args.tol)
    out["canonical_cluster"] = int(c)
    out["aspect_canonical"] = kin.classify_aspect(t, c, args.tol).kind.value
    out["isosceles_at"] = [int(k) for k in kin.CLUSTERS if kin.is_isosceles(t, k, args.tol)]
    out["collinear"] = kin.is_collinear(t, args.tol)
    return out


def cmd_map(args) -> dict:
    t = _read_triangle(args)
    k = kin.canonical_cluster(t) if args.cluster == "canonical" else int(args.cluster)
    p = shape_point(t, k)
    sc = spherical_coords(p)
    return {"cluster": int(p.cluster), "xyz": [p.X, p.Y, p.Z], "theta": sc.theta, "phi": sc.phi,
            "ratio": stereographic_ratio(p), "cell": regions.cell_of(p).id}


def _mc_cfg(args):
    return McConfig(args.seed, args.n) if args.n else None


def _exact(entry, convention) -> dict:
    exact, expr = measure.exact_for(entry, convention) if entry else (None, "")
    return {"exact": exact, "exact_expr": expr}


def cmd_prob(args) -> dict:
    out = {"event": args.event, "convention": args.convention}
    entry = measure.CATALOG.get(args.event)
    if args.event in CURVE_EVENTS:
        # curves carry no area
        out.update(exact=0.0, exact_expr="0", quadrature=0.0, quad_err=0.0, mc=None, mc_stderr=None)
        return out
    terms = measure.event_terms(args.event, args.convention)
    q, e = measure.probability(terms, args.tol)
    out.update(**_exact(entry, args.convention), quadrature=q, quad_err=e, mc=None, mc_stderr=None)
    cfg = _mc_cfg(args)
    if cfg:
        est = montecarlo.estimate(terms, cfg)
        out.update(mc=est.p_hat, mc_stderr=est.stderr)
    out["published"] = entry.published if entry else None
    return out


def _is_curve(name: str) -> bool:
    try:
        regions.curve_family(name)
    except ValueError:
        return False
    return name in CURVE_EVENTS or name == "equator" or "_" in name


def cmd_conditional(args) -> dict:
    a, b = args.event, args.given.lower()
    out = {"event": a, "given": b, "convention": args.convention}
    if a in CURVE_EVENTS:
        raise UsageError(f"--event {a} is a curve; conditioning a curve event is not supported")
    num = measure.event_terms(a, args.convention)
    if _is_curve(b):
        entry = measure.CATALOG.get(f"{a}|{b}")
        frac = measure.arc_fraction(regions.curve_family(b), num)
        out.update(**_exact(entry, args.convention), quadrature=frac, quad_err=measure.ARC_ERR,
                   mc=None, mc_stderr=None, published=entry.published if entry else None)
        return out
    if b not in EVENTS:
        raise UsageError(f"unknown --given {b!r}")
    entry = measure.CATALOG.get(f"{a}|{b}")
    den = measure.event_terms(b, args.convention)
    res = measure.conditional(num, den, args.tol)
    out.update(**_exact(entry, args.convention), quadrature=res.quad, quad_err=res.quad_err,
               mc=None, mc_stderr=None, published=entry.published if entry else None)
    cfg = _mc_cfg(args)
    if cfg:
        est = montecarlo.estimate_conditional(num, den, cfg)
        out.update(mc=est.p_hat, mc_stderr=est.stderr)
    return out


def cmd_table(args) -> list[dict]:
    rows = measure.catalog_table(args.convention, args.tol, _mc_cfg(args))
    rename = {"quadrature": "quad"}
    return [{c: r.as_dict()[rename.get(c, c)] for c in TABLE_COLUMNS} for r in rows]


def cmd_reconcile(args) -> dict:
    return measure.reconciliation(args.tol)


def cmd_sample(args):
    if args.event:
        if not args.n:
            raise UsageError("--n must be positive with --event")
        est = montecarlo.estimate(measure.event_terms(args.event, args.convention),
                                  McConfig(args.seed, args.n))
        return {"event": args.event, "convention": args.convention, "seed": args.seed,
                **est.as_dict()}
    xyz = montecarlo.sample_array(McConfig(args.seed, max(args.n, 1)))[: args.n]
    return [{"index": i, "X": float(x), "Y": float(y), "Z": float(z)}
            for i, (x, y, z) in enumerate(xyz)]


def cmd_sweep(args) -> dict:
    return montecarlo.consistency_sweep(McConfig(args.seed, max(args.n, 1)), args.eps).as_dict()


def _parse_view(text: str):
    try:
        v = [float(s) for s in text.split(",")]
    except ValueError:
        raise UsageError(f"--view expects X,Y,Z, got {text!r}") from None
    if len(v) != 3 or not all(math.isfinite(c) for c in v) or not any(v):
        raise UsageError(f"--view expects a non-zero X,Y,Z, got {text!r}")
    return v


def cmd_render(args) -> str:
    return render.render_svg(_parse_view(args.view))


COMMANDS = {"classify": cmd_classify, "map": cmd_map, "prob": cmd_prob,
            "conditional": cmd_conditional, "table": cmd_table, "reconcile": cmd_reconcile,
            "sample": cmd_sample, "sweep": cmd_sweep, "render": cmd_render}


# --- formatting ----------------------------------------------------------------

def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.floating, np.integer, np.bool_)):
        return x.item()
    if isinstance(x, float) and not math.isfinite(x):
        return None
    return x


def _rows_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(rows[0]) if rows else [], lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def _cell(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def _rows_text(rows: list[dict]) -> str:
    if not rows:
        return ""
    cols = list(rows[0])
    cells = [[_cell(r[c]) for c in cols] for r in rows]
    widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(cols, widths))]
    lines += ["  ".join(v.ljust(w) for v, w in zip(row, widths)) for row in cells]
    return "\n".join(line.rstrip() for line in lines) + "\n"


def format_payload(payload, fmt: str = "json") -> str:
    if isinstance(payload, str):
        return payload
    payload = _jsonable(payload)
    if fmt == "csv" and isinstance(payload, list):
        return _rows_csv(payload)
    if fmt == "text" and isinstance(payload, list):
        return _rows_text(payload)
    return json.dumps(payload, indent=2) + "\n"


def _emit_error(kind: str, message: str, code: int, **extra) -> int:
    sys.stdout.write(json.dumps({"error": kind, "message": message, **_jsonable(extra)}) + "\n")
    return code


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        payload = COMMANDS[args.command](args)
    except (UsageError, ValueError, kin.DegenerateTriangle, kin.TotalCollision,
            DivisionByZeroMeasure, InsufficientConditionSamples, OSError) as e:
        return _emit_error(type(e).__name__, str(e), 2)
    except BudgetExceeded as e:
        return _emit_error("BudgetExceeded", str(e), 3, area=e.area, err=e.err)

    text = format_payload(payload, getattr(args, "format", "json"))
    out = getattr(args, "out", None)
    if out:
        with open(out, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    if args.command == "sweep" and not payload["passed"]:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
