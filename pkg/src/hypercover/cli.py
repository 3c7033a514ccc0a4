"""Command-line interface: ``hypercover <subcommand> ...``.

Exit codes: 0 success, 2 usage or argument error, 3 numeric failure.
Library modules are imported inside each handler so cheap commands start fast.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3

SCHEMES = ("s1", "s2", "s3", "s4", "s5", "s6", "s7")


class UsageError(Exception):
    pass


def _fmt(v) -> str:
    return "" if v is None else format(float(v), ".17g")


def _emit(args, text: str) -> None:
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)


def _records(args, header, rows) -> str:
    """Plain header + rows as CSV, or a JSON list of objects."""
    if args.format == "json":
        return json.dumps([dict(zip(header, r)) for r in rows], indent=1) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(v) if isinstance(v, float) else ("" if v is None else v) for v in r])
    return buf.getvalue()


def _sweep_output(args, rows, provenance: dict) -> str:
    from .union_cover import rows_to_csv, rows_to_json

    if args.format == "json":
        return rows_to_json(rows, provenance) + "\n"
    return rows_to_csv(rows)


def parse_sweep(text: str) -> list[float]:
    """``lo:hi:step`` -> inclusive list of values, rounded to kill float drift."""
    try:
        lo, hi, step = (float(x) for x in text.split(":"))
    except ValueError:
        raise UsageError(f"--sweep-delta expects lo:hi:step, got {text!r}") from None
    if not (step > 0 and hi >= lo):
        raise UsageError("--sweep-delta needs step > 0 and hi >= lo")
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return [round(lo + k * step, 10) for k in range(count)]


def _deltas(args) -> list[float]:
    if args.sweep_delta:
        return parse_sweep(args.sweep_delta)
    if args.delta is None:
        raise UsageError("give --delta or --sweep-delta")
    return [args.delta]


def _replications(args, spec) -> int:
    if args.replications is not None:
        return args.replications
    return 50 if spec.id.random else 1


# ---------------------------------------------------------------- handlers

def cmd_geometry(args) -> str:
    from . import geometry

    if args.table7:
        from .tables import cells_to_csv, cells_to_json, table7

        cells = table7()
        return cells_to_json(cells) + "\n" if args.format == "json" else cells_to_csv(cells)
    if args.dim is None:
        raise UsageError("--dim is required")
    if args.ball_volume:
        return _records(args, ("quantity", "d", "value"),
                        [("ball_volume", args.dim, geometry.unit_ball_volume(args.dim))])
    if args.unit_radius:
        return _records(args, ("quantity", "d", "value"),
                        [("unit_volume_radius", args.dim, geometry.unit_volume_radius(args.dim))])
    if args.cap:
        if args.r is None or args.h is None:
            raise UsageError("--cap needs --r and --h")
        return _records(args, ("quantity", "d", "r", "h", "value"),
                        [("cap_volume", args.dim, args.r, args.h, geometry.cap_volume(args.dim, args.r, args.h))])
    if args.intersection:
        if args.r is None or args.distance is None:
            raise UsageError("--intersection needs --r and --distance")
        v = geometry.two_ball_intersection_volume(args.dim, args.r, args.distance)
        return _records(args, ("quantity", "d", "r", "distance", "value"),
                        [("intersection_volume", args.dim, args.r, args.distance, v)])
    raise UsageError("choose one of --table7, --ball-volume, --unit-radius, --cap, --intersection")


def cmd_local_cover(args) -> str:
    import numpy as np

    from . import ball_cover as bc
    from .union_cover import SweepRow

    z = None
    if args.z_coords is not None:
        try:
            z = np.array([float(v) for v in args.z_coords.split(",")])
        except ValueError:
            raise UsageError("--z-coords expects comma-separated numbers") from None
        if len(z) != args.dim:
            raise UsageError(f"--z-coords has {len(z)} entries, expected {args.dim}")
        z_sq = float(z @ z)
    else:
        z_sq = (args.z_norm or 0.0) ** 2
    delta = args.delta
    query = bc.rescale_query(args.dim, z_sq, args.r, delta, bc.PointKind(args.point_kind))
    if z is not None:
        z = z / delta
    stderr, seed = 0.0, None
    if args.method == "mc":
        est = bc.mc_oracle(query, args.samples, args.seed, z=z)
        value, stderr, seed = est.value, est.std_err, args.seed
    elif args.method == "cf":
        if z is None:
            z = bc.center_for(query, args.seed)
        value = bc.cf_oracle(z, query.r)
    else:
        func = {"normal": bc.approx_normal, "petrov": bc.approx_petrov, "adjusted": bc.approx_adjusted}
        value = min(1.0, max(0.0, func[args.method](query)))  # clamp for reporting only
    row = SweepRow(delta, value, stderr, args.method, args.dim, 1, args.r, "ball", seed)
    prov = {"z_norm_sq": z_sq, "point_kind": args.point_kind, "samples": args.samples}
    return _sweep_output(args, [row], prov)


def _scheme_spec(args, delta):
    from .designs import SchemeSpec

    alpha = args.alpha if args.scheme == "s4" else None
    if args.scheme == "s4" and alpha is None:
        raise UsageError("--scheme s4 needs --alpha")
    return SchemeSpec(args.scheme, delta, alpha)


def cmd_cover(args) -> str:
    from . import union_cover as uc

    base = _scheme_spec(args, args.delta if args.delta is not None else 1.0)
    m = _replications(args, base)
    prov = {"test_points": args.samples, "replications": m, "seed": args.seed}
    if args.optimize_delta:
        if args.r is None:
            raise UsageError("--optimize-delta needs --r")
        delta, value = uc.optimize_delta(base, args.d, args.n, args.r, args.method, args.samples, m, args.seed)
        row = uc.SweepRow(delta, value, 0.0, args.method + "-argmax", args.d, args.n, args.r,
                          args.scheme, args.seed if args.method == "mc" else None)
        return _sweep_output(args, [row], prov)
    deltas = _deltas(args)
    if args.target is not None:
        rows = []
        for x in deltas:
            spec = base.with_delta(x)
            r = uc.radius_for_target(spec, args.d, args.n, args.target, args.method, args.samples, m, args.seed)
            rows.append(uc.SweepRow(x, args.target, 0.0, args.method + "-radius", args.d, args.n, r,
                                    args.scheme, args.seed if args.method == "mc" else None))
        return _sweep_output(args, rows, prov)
    if args.r is None:
        raise UsageError("give --r or --target")
    if args.method == "mc" and len(deltas) == 1:
        est = uc.coverage_mc_averaged(base.with_delta(deltas[0]), args.d, args.n, args.r, args.samples, m,
                                      args.seed)
        rows = [uc.SweepRow(deltas[0], est.value, est.std_err, "mc", args.d, args.n, args.r, args.scheme,
                            args.seed)]
    else:
        for x in deltas:
            base.with_delta(x)  # validate every delta before running anything
        rows = uc.sweep_delta(base, args.d, args.n, args.r, deltas, args.method, args.samples, m, args.seed)
    return _sweep_output(args, rows, prov)


def cmd_cube_cover(args) -> str:
    from . import cube_cover as cc
    from .union_cover import SweepRow

    rows = []
    for x in _deltas(args):
        if args.method == "closed":
            value = cc.expected_coverage_closed_form(cc.CubeCoverQuery(args.d, args.n, args.r, x))
            rows.append(SweepRow(x, value, 0.0, "closed", args.d, args.n, args.r, "cube-uniform", None))
        else:
            m = args.replications if args.replications is not None else 20
            est = cc.cube_cover_mc(args.d, args.n, args.r, x, args.samples, m, args.seed)
            rows.append(SweepRow(x, est.value, est.std_err, "mc", args.d, args.n, args.r, "cube-uniform",
                                 args.seed))
    return _sweep_output(args, rows, {"test_points": args.samples, "seed": args.seed})


def cmd_quantize(args) -> str:
    from . import quantize as qz
    from .union_cover import SweepRow

    # the delta carried by the spec is a placeholder; every path below sets or validates its own
    base = _scheme_spec(args, 1.0)
    m = _replications(args, base)
    prov = {"test_points": args.samples, "replications": m, "seed": args.seed}
    if args.method != "mc":
        if args.scheme != "s1":
            raise UsageError("the closed-form approximation covers scheme s1 only")
        corrected = args.method == "approx"
        rows = [SweepRow(x, qz.normalized_error(args.d, args.n, max(qz.quantization_approx(args.d, args.n, x,
                                                                                           corrected), 0.0)),
                         0.0, args.method, args.d, args.n, None, args.scheme, None) for x in _deltas(args)]
        return _sweep_output(args, rows, prov)
    if args.minimize_delta:
        delta, value = qz.minimize_over_delta(base, args.d, args.n, args.samples, m, args.seed)
        rows = [SweepRow(delta, value, 0.0, "mc-argmin", args.d, args.n, None, args.scheme, args.seed)]
    else:
        deltas = _deltas(args)
        for x in deltas:
            base.with_delta(x)
        rows = qz.sweep_delta(base, args.d, args.n, deltas, args.samples, m, args.seed)
    return _sweep_output(args, rows, prov)


def cmd_design(args) -> str:
    from .designs import generate

    if args.delta is None:
        raise UsageError("--delta is required")
    spec = _scheme_spec(args, args.delta)
    design = generate(spec, args.d, args.n, args.seed if spec.id.random else None)
    return design.to_json() + "\n" if args.format == "json" else design.to_csv()


def cmd_table(args) -> str:
    from .tables import Budget, cells_to_csv, cells_to_json, reproduce

    schemes = args.schemes.split(",") if args.schemes else None
    if schemes:
        bad = [s for s in schemes if s not in SCHEMES]
        if bad:
            raise UsageError(f"unknown schemes {bad}")
    ns = [int(v) for v in args.ns.split(",")] if args.ns else None
    budget = Budget(args.samples, args.replications or 10, args.seed, args.delta_step)
    cells = reproduce(args.id, budget, schemes, ns)
    prov = {"test_points": budget.test_points, "replications": budget.replications, "seed": budget.seed}
    return cells_to_json(cells, prov) + "\n" if args.format == "json" else cells_to_csv(cells)


# ---------------------------------------------------------------- parser

def _positive_int(text: str) -> int:
    v = int(float(text))
    if v < 1 or v != float(text):
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", default=None, help="output file (default: stdout)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--samples", type=_positive_int, default=None, help="Monte Carlo test points")
    common.add_argument("--replications", type=_positive_int, default=None, help="independent designs")

    parser = argparse.ArgumentParser(prog="hypercover", description="Coverage and quantization in high-dimensional cubes.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("geometry", parents=[common], help="ball volumes, caps, unit-volume radii")
    p.add_argument("--table7", action="store_true")
    p.add_argument("--ball-volume", action="store_true")
    p.add_argument("--unit-radius", action="store_true")
    p.add_argument("--cap", action="store_true")
    p.add_argument("--intersection", action="store_true")
    p.add_argument("--dim", type=_positive_int)
    p.add_argument("--r", type=float)
    p.add_argument("--h", type=float)
    p.add_argument("--distance", type=float)
    p.set_defaults(handler=cmd_geometry)

    p = sub.add_parser("local-cover", parents=[common], help="single ball: fraction of the cube covered")
    p.add_argument("--dim", type=_positive_int, required=True)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--z-norm", type=float)
    g.add_argument("--z-coords")
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--delta", type=float, default=1.0, help="half-side of the cube (default 1)")
    p.add_argument("--method", choices=("normal", "petrov", "adjusted", "mc", "cf"), default="adjusted")
    p.add_argument("--point-kind", choices=("diagonal", "typical"), default="typical")
    p.set_defaults(handler=cmd_local_cover, samples_default=1_000_000)

    def design_args(p):
        p.add_argument("--d", type=_positive_int, required=True)
        p.add_argument("--n", type=_positive_int, required=True)
        p.add_argument("--scheme", choices=SCHEMES, default="s1")
        p.add_argument("--alpha", type=float)
        p.add_argument("--delta", type=float)
        p.add_argument("--sweep-delta", metavar="LO:HI:STEP")

    p = sub.add_parser("cover", parents=[common], help="union-of-balls coverage")
    design_args(p)
    p.add_argument("--r", type=float)
    p.add_argument("--target", type=float, help="find the radius reaching this coverage")
    p.add_argument("--method", choices=("mc", "approx1", "approx2"), default="mc")
    p.add_argument("--optimize-delta", action="store_true")
    p.set_defaults(handler=cmd_cover, samples_default=100_000)

    p = sub.add_parser("cube-cover", parents=[common], help="union-of-cubes coverage (uniform centers)")
    p.add_argument("--d", type=_positive_int, required=True)
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--delta", type=float)
    p.add_argument("--sweep-delta", metavar="LO:HI:STEP")
    p.add_argument("--method", choices=("closed", "mc"), default="closed")
    p.set_defaults(handler=cmd_cube_cover, samples_default=100_000)

    p = sub.add_parser("quantize", parents=[common], help="normalized quantization error")
    design_args(p)
    p.add_argument("--method", choices=("mc", "approx", "approx-uncorrected"), default="mc")
    p.add_argument("--minimize-delta", action="store_true")
    p.set_defaults(handler=cmd_quantize, samples_default=20_000)

    p = sub.add_parser("design", parents=[common], help="write a design as CSV or JSON")
    p.add_argument("--d", type=_positive_int, required=True)
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--scheme", choices=SCHEMES, default="s1")
    p.add_argument("--alpha", type=float)
    p.add_argument("--delta", type=float)
    p.set_defaults(handler=cmd_design, samples_default=None)

    p = sub.add_parser("table", parents=[common], help="reproduce a published table with PASS/NEAR/FAIL flags")
    p.add_argument("--id", type=int, required=True, choices=range(1, 8), metavar="{1..7}")
    p.add_argument("--schemes", help="comma-separated subset, e.g. s1,s7")
    p.add_argument("--ns", help="comma-separated subset of n")
    p.add_argument("--delta-step", type=float, default=0.02)
    p.set_defaults(handler=cmd_table, samples_default=20_000)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.samples is None:
        args.samples = getattr(args, "samples_default", None)
    try:
        text = args.handler(args)
    except (UsageError, ValueError, NotImplementedError) as exc:
        parser.print_usage(sys.stderr)
        print(f"hypercover {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ArithmeticError as exc:
        print(f"hypercover {args.command}: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    _emit(args, text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
