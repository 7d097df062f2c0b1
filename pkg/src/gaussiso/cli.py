"""Command-line front end.

    gaussiso perimeter --polygon square.txt
    gaussiso special I --alpha 1 --beta 0
    gaussiso verify --all --seed 42
    gaussiso scan Phi --lo 0 --hi 2 --resolution 51 --out phi.csv

Exit status: 0 on success, 1 when a verification claim fails, 2 on usage
errors and unreadable or malformed input.
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import sys

import numpy as np

from . import search, shapes, verify
from . import special as sf
from .errors import GaussIsoError
from .gauss_core import (
    gauss_integral, polygon_gaussian_measure, polygon_gaussian_measure_cubature,
    polygon_gaussian_perimeter, polygon_gaussian_perimeter_quad,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def fmt(x: float) -> str:
    return f"{float(x):.15g}"


def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"{args.func_name} needs " + ", ".join("--" + m.replace("_", "-") for m in missing))
    return [getattr(args, n) for n in names]


# ---------------------------------------------------------------------------
# special functions: name -> (required flags, evaluator)

SPECIAL = {
    "gauss": (("a", "b"), lambda a, b: gauss_integral(a, b)),
    "I": (("alpha", "beta"), lambda a, b: sf.I_func((a, b))),
    "Phi": (("alpha", "beta"), lambda a, b: sf.Phi_func((a, b))),
    "f": (("x",), sf.f_implicit),
    "fprime": (("x",), sf.f_prime),
    "u": (("x",), sf.u_func),
    "u-alt": (("x",), sf.u_func_alt),
    "v": (("t",), sf.v_func),
    "relation": (("x",), sf.critical_point_relation),
    "g": (("r",), sf.g_triangle),
    "ngon": (("n", "r"), lambda n, r: sf.ngon_perimeter_closed(n, r)),
    "side": (("a", "L"), lambda a, L: sf.side_to_alphabeta(sf.SideParams(a, L))),
    "critical-residual": (("alpha", "beta"), lambda a, b: sf.critical_residual((a, b))),
    "gradient": (("alpha", "beta"), lambda a, b: sf.I_gradient((a, b))),
    "cut": (("y0", "fpp"), sf.cut_indicator),
}


def _print_values(value, out) -> None:
    if isinstance(value, sf.AlphaBeta):
        value = (value.alpha, value.beta)
    if isinstance(value, tuple):
        print(" ".join(fmt(v) for v in value), file=out)
    else:
        print(fmt(value), file=out)


def cmd_special(args, out) -> int:
    names, fn = SPECIAL[args.name]
    args.func_name = args.name
    vals = _need(args, *names)
    if "n" in names:
        vals[0] = int(vals[0])
    _print_values(fn(*vals), out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# shapes


def _load_shape(args):
    # open explicitly so a missing path is reported as such, not parsed as text
    if args.polygon is not None:
        with open(args.polygon) as fh:
            return shapes.read_polygon(fh)
    if getattr(args, "cclass", None) is not None:
        with open(args.cclass) as fh:
            return shapes.read_cclass(fh)
    if args.ngon is not None:
        if args.radius is None:
            raise UsageError("--ngon needs --radius")
        return shapes.regular_ngon(args.ngon, args.radius)
    raise UsageError("give one of --polygon, --cclass or --ngon")


def cmd_perimeter(args, out) -> int:
    shape = _load_shape(args)
    if isinstance(shape, shapes.CClassSet):
        val = shapes.cclass_perimeter(shape)
    elif args.method == "quad":
        val = polygon_gaussian_perimeter_quad(shape)
    else:
        val = polygon_gaussian_perimeter(shape)
    print(fmt(val), file=out)
    return EXIT_OK


def cmd_measure(args, out) -> int:
    P = _load_shape(args)
    fn = polygon_gaussian_measure_cubature if args.method == "cubature" else polygon_gaussian_measure
    print(fmt(fn(P)), file=out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verification


def cmd_verify(args, out) -> int:
    if args.all == (args.suite is not None):
        raise UsageError("give exactly one of --all or --suite")
    if args.all:
        report = verify.verify_all(args.seed)
    else:
        report = verify.VerificationReport([verify.SUITES[args.suite](args.seed)], args.seed)
    print(report.to_json() if args.format == "json" else report.table(), file=out)
    return EXIT_OK if report.all_passed else EXIT_FAIL


# ---------------------------------------------------------------------------
# optimizers


def cmd_optimize(args, out) -> int:
    if args.target == "ngon":
        res = search.maximize_ngon_radius(args.n)
        print(f"r_hat {fmt(res.r_hat)}", file=out)
        print(f"perimeter {fmt(res.value)}", file=out)
    elif args.target == "triangle-root":
        print(f"r_hat {fmt(search.triangle_root())}", file=out)
    elif args.target == "phi":
        res = search.maximize_phi()
        print(f"alpha {fmt(res.point.alpha)}", file=out)
        print(f"beta {fmt(res.point.beta)}", file=out)
        print(f"Phi {fmt(res.value)}", file=out)
        print(f"cclass_bound {fmt(4.0 * res.value / (2.0 * math.pi))}", file=out)
    elif args.target == "isup":
        res = search.scan_I_sup(args.G, args.grid)
        print(f"sup {fmt(res.sup_found)}", file=out)
        print(f"argmax {fmt(res.argmax.alpha)} {fmt(res.argmax.beta)}", file=out)
        print(f"log_deficit {fmt(res.log_deficit)}", file=out)
    elif args.target == "critical":
        for p in search.locate_I_critical_points():
            print(f"{fmt(p.alpha)} {fmt(p.beta)} I={fmt(sf.I_func(p))} {sf.critical_branch(p)}", file=out)
    else:  # ascent
        start = _load_shape(args)
        cfg = search.AscentConfig(step0=args.step0, shrink=args.shrink, max_iters=args.iters,
                                  convexity_penalty=args.min_turn, seed=args.seed)
        trace = search.ascend_polygon(start, cfg)
        if args.trace:
            trace.write_csv(args.trace)
        print(f"perimeter {fmt(trace.perimeters[-1])}", file=out)
        print(f"aspect {fmt(trace.aspect)}", file=out)
        print(f"min_turning {fmt(min(trace.flatness))}", file=out)
        print(f"stalled {str(trace.stalled).lower()}", file=out)
        print(shapes.format_polygon(trace.final), end="", file=out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# grid scans

SCAN_FUNCS = {"I": search.I_array, "Phi": search.Phi_array}


def scan_grid(func: str, lo: float, hi: float, resolution: int, out_path=None) -> str:
    """CSV text of ``func`` on a regular grid; also written to ``out_path`` when given.

    I and Phi are sampled on ``[lo, hi]^2`` (rows: alpha outer, beta inner);
    u on ``[lo, hi]`` with the node at 0 dropped and one added at the right.
    Phi is undefined at the origin and is written as nan there.
    """
    if resolution < 2:
        raise UsageError("resolution must be >= 2")
    if not hi > lo:
        raise UsageError("need lo < hi")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if func == "u":
        if lo < 0 or hi > 1:
            raise UsageError("u is defined on (0, 1]")
        xs = np.linspace(lo, hi, resolution + 1)[1:] if lo == 0 else np.linspace(lo, hi, resolution)
        w.writerow(["x", "u"])
        for x, val in zip(xs, search.parallel_map(lambda x: sf.u_func(float(x)), xs)):
            w.writerow([f"{x:.15e}", f"{val:.15e}"])
    else:
        axis = np.linspace(lo, hi, resolution)
        vals = search._grid_rows(SCAN_FUNCS[func], axis)
        w.writerow(["alpha", "beta", func])
        for i, a in enumerate(axis):
            for j, b in enumerate(axis):
                w.writerow([f"{a:.15e}", f"{b:.15e}", f"{vals[i, j]:.15e}"])
    text = buf.getvalue()
    if out_path is not None:
        with open(out_path, "w", newline="") as fh:
            fh.write(text)
    return text


def cmd_scan(args, out) -> int:
    lo = args.lo if args.lo is not None else 0.0
    hi = args.hi if args.hi is not None else (1.0 if args.func == "u" else 4.0)
    text = scan_grid(args.func, lo, hi, args.resolution, args.out)
    if args.out is None:
        out.write(text)
    return EXIT_OK


# ---------------------------------------------------------------------------


def _shape_flags(p, cclass=False):
    p.add_argument("--polygon", metavar="FILE", help='vertex file, one "x y" per line')
    if cclass:
        p.add_argument("--cclass", metavar="FILE", help="C-class knot file (upper/lower sections)")
    p.add_argument("--ngon", type=int, metavar="N", help="regular N-gon centred at the origin")
    p.add_argument("--radius", type=float, help="circumradius for --ngon")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gaussiso", description="Gaussian measure and perimeter of convex planar sets.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("perimeter", help="normalized Gaussian perimeter of a shape")
    _shape_flags(p, cclass=True)
    p.add_argument("--method", choices=("closed", "quad"), default="closed")
    p.set_defaults(handler=cmd_perimeter)

    p = sub.add_parser("measure", help="Gaussian measure of a convex polygon")
    _shape_flags(p)
    p.add_argument("--method", choices=("owen", "cubature"), default="owen")
    p.set_defaults(handler=cmd_measure)

    p = sub.add_parser("special", help="evaluate a special function")
    p.add_argument("name", choices=sorted(SPECIAL))
    for flag in ("a", "b", "alpha", "beta", "x", "t", "r", "n", "L", "y0", "fpp"):
        p.add_argument(f"--{flag}", type=float)
    p.set_defaults(handler=cmd_special)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("--all", action="store_true")
    p.add_argument("--suite", choices=sorted(verify.SUITES))
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--format", choices=("json", "table"), default="json")
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("optimize", help="run an optimizer")
    p.add_argument("target", choices=("ngon", "triangle-root", "phi", "isup", "critical", "ascent"))
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--G", type=float, default=40.0)
    p.add_argument("--grid", type=int, default=2000)
    _shape_flags(p)
    p.add_argument("--iters", type=int, default=1000)
    p.add_argument("--step0", type=float, default=0.1)
    p.add_argument("--shrink", type=float, default=0.5)
    p.add_argument("--min-turn", type=float, default=1e-6)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trace", metavar="CSV", help="write the ascent trace here")
    p.set_defaults(handler=cmd_optimize)

    p = sub.add_parser("scan", help="tabulate I, Phi or u on a grid as CSV")
    p.add_argument("func", choices=("I", "Phi", "u"))
    p.add_argument("--lo", type=float)
    p.add_argument("--hi", type=float)
    p.add_argument("--resolution", type=int, default=50)
    p.add_argument("--out", metavar="CSV")
    p.set_defaults(handler=cmd_scan)
    return ap


def run(argv: list[str] | None = None, out=None) -> int:
    out = sys.stdout if out is None else out
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:     # argparse already printed the message
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.handler(args, out)
    except (UsageError, GaussIsoError, ValueError, OSError) as exc:
        print(f"gaussiso: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
