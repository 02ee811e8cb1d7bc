"""Command line front end.

Subcommands emit plot data (CSV or JSON) for the analytic curves, the
iso-power ellipses, the simulated curves and the two-dimensional table, and
run the two-sample test on CSV data files.

Exit codes: 0 success, 2 usage or input error, 3 simulation failure,
4 exact test refused because the dimension is degenerate.
"""

import argparse
import csv
import io
import json
import math
import sys

from . import ellipse as ell
from .equicorr import EquicorrModel, ShiftAlternative, t_star_squared
from .exceptions import DegenerateDimension, HotellingError, InvalidInput
from .hotelling import MIN_PERMUTATIONS, hotelling_t2, permutation_test
from .simulate import (DEFAULT_SEED, TABLE1_RHOS, TABLE1_SAMPLE_SIZES, figure3_curve,
                       sample_size, table1)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_SIMULATION = 3
EXIT_DEGENERATE = 4

FIGURE1_N = (10, 15, 25, 40)
FIGURE1_RHO = (0.1, 0.3, 0.5, 0.7, 0.9)
# 0.25/0.5/0.9 plus 0.3, the value used in the worked examples
FIGURE2_RHO = (0.25, 0.3, 0.5, 0.9)
FIGURE3_N = (10, 15, 25)
FIGURE3_RHO = (0.1, 0.5, 0.9)
FIGURE3_NS_FACTOR = (1.0, 1.4, 2.4)


class UsageError(Exception):
    pass


def _format_value(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def render(records, fields, fmt):
    """Serialise a list of dicts as CSV (header + 17 significant digits) or JSON."""
    if fmt == "json":
        rows = [{f: rec.get(f) for f in fields} for rec in records]
        return json.dumps(rows, indent=1) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(fields)
    for rec in records:
        writer.writerow([_format_value(rec.get(f)) for f in fields])
    return buf.getvalue()


def _emit(text, out):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def read_matrix(path):
    """Headerless numeric CSV, one observation per row."""
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            rows = [row for row in csv.reader(fh) if row and any(c.strip() for c in row)]
    except OSError as exc:
        raise UsageError(f"{path}: cannot read ({exc.strerror})") from None
    if not rows:
        raise UsageError(f"{path}: no data rows")
    width = len(rows[0])
    data = []
    for i, row in enumerate(rows, start=1):
        if len(row) != width:
            raise UsageError(f"{path}: row {i} has {len(row)} columns, expected {width}")
        values = []
        for j, cell in enumerate(row, start=1):
            try:
                v = float(cell)
            except ValueError:
                raise UsageError(f"{path}: row {i}, column {j}: cannot parse {cell.strip()!r}") from None
            if not math.isfinite(v):
                raise UsageError(f"{path}: row {i}, column {j}: non-finite value")
            values.append(v)
        data.append(values)
    return data


def cmd_analytic_curve(args):
    records = []
    for n in args.n:
        for rho in args.rho:
            model = EquicorrModel(n, rho)
            for m in range(1, n + 1):
                records.append({"n": n, "rho": rho, "m": m,
                                "t_star_squared": t_star_squared(model, ShiftAlternative(m, args.shift))})
    return render(records, ["n", "rho", "m", "t_star_squared"], args.format)


def cmd_ellipse(args):
    records = []
    for rho in args.rho:
        shape = ell.IsoPowerEllipse.from_rho(rho)
        for t, p in zip(ell.ellipse_angles(args.count), ell.ellipse_points(rho, args.count)):
            records.append({"record": "point", "rho": rho, "t": float(t), "a1": p.a1, "a2": p.a2,
                            "residual": ell.iso_power_residual(rho, p)})
        records.append({"record": "summary", "rho": rho, "major_radius": shape.major_radius,
                        "minor_radius": shape.minor_radius})
    fields = ["record", "rho", "t", "a1", "a2", "residual", "major_radius", "minor_radius"]
    return render(records, fields, args.format)


def cmd_simulate_curve(args):
    records = []
    for n in args.n:
        for rho in args.rho:
            for factor in args.ns_factor:
                n_s = sample_size(n, factor)
                if n >= 2 * n_s - 1:
                    raise UsageError(f"n={n} with ns-factor {factor} gives n_x=n_y={n_s}: "
                                     "need n < n_x + n_y - 1")
                for pt in figure3_curve(n, rho, factor, args.reps, args.seed):
                    records.append({"n": n, "rho": rho, "ns_factor": factor, "n_s": n_s, "m": pt.m,
                                    "mean_t2_over_k": pt.mean_t2_over_k,
                                    "variance_of_mean": pt.variance_of_mean,
                                    "t_star_squared": pt.t_star_squared,
                                    "expected_t2_over_k": pt.expected_t2_over_k})
    fields = ["n", "rho", "ns_factor", "n_s", "m", "mean_t2_over_k", "variance_of_mean",
              "t_star_squared", "expected_t2_over_k"]
    return render(records, fields, args.format)


def cmd_table1(args):
    for ns in args.ns:
        if ns < 3:
            raise UsageError(f"--ns values must be >= 3, got {ns}")
    cells, columns = table1(args.rho, args.ns, args.reps, args.seed)
    records = [{"record": "cell", "rho": c.rho, "a1": c.a1, "a2": c.a2, "ns": c.ns,
                "mean_t2_over_k": c.mean_t2_over_k, "variance_of_mean": c.variance_of_mean,
                "expected_t2_over_k": c.expected_t2_over_k, "t_star_squared": c.t_star_squared}
               for c in cells]
    records += [{"record": "variance", "rho": c.rho, "ns": c.ns,
                 "variance_of_mean": c.mean_variance_of_mean,
                 "across_row_variance": c.across_row_variance} for c in columns]
    fields = ["record", "rho", "a1", "a2", "ns", "mean_t2_over_k", "variance_of_mean",
              "expected_t2_over_k", "t_star_squared", "across_row_variance"]
    return render(records, fields, args.format)


def cmd_test(args):
    x = read_matrix(args.x)
    y = read_matrix(args.y)
    if len(x[0]) != len(y[0]):
        raise UsageError(f"{args.x} has {len(x[0])} columns but {args.y} has {len(y[0])}")
    if args.permutation_reps is not None:
        result = permutation_test(x, y, args.permutation_reps, args.seed)
    else:
        try:
            result = hotelling_t2(x, y)
        except DegenerateDimension as exc:
            raise DegenerateDimension(f"{exc}; rerun with --permutation-reps N") from None
    fields = ["t2", "k", "f_stat", "df1", "df2", "p_value", "method", "n_permutations"]
    record = result.to_dict()
    if args.format == "text":
        width = max(len(f) for f in fields)
        return "".join(f"{f:<{width}}  {_format_value(record[f]) or '-'}\n" for f in fields)
    return render([record], fields, args.format)


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _seed(text):
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be in [0, 2**64)")
    return value


def _rho(text):
    value = float(text)
    if not 0.0 <= value < 1.0:
        raise argparse.ArgumentTypeError(f"rho must lie in [0, 1), got {text}")
    return value


def build_parser():
    parser = argparse.ArgumentParser(
        prog="hotelling-equicorr",
        description="Hotelling T^2 under equicorrelation: plot data and two-sample tests.")
    sub = parser.add_subparsers(dest="command", required=True)

    def output_flags(p, formats=("csv", "json"), default="csv"):
        p.add_argument("--format", choices=formats, default=default)
        p.add_argument("--out", default=None, help="output file (default: stdout)")

    p = sub.add_parser("analytic-curve", help="T*^2 against m for grids of n and rho")
    p.add_argument("--n", type=_positive_int, nargs="+", default=list(FIGURE1_N))
    p.add_argument("--rho", type=_rho, nargs="+", default=list(FIGURE1_RHO))
    p.add_argument("--shift", type=float, default=1.0, help="common shift magnitude a")
    output_flags(p)
    p.set_defaults(handler=cmd_analytic_curve)

    p = sub.add_parser("ellipse", help="points of the two-dimensional iso-power ellipses")
    p.add_argument("--rho", type=_rho, nargs="+", default=list(FIGURE2_RHO))
    p.add_argument("--count", type=_positive_int, default=200)
    output_flags(p)
    p.set_defaults(handler=cmd_ellipse)

    p = sub.add_parser("simulate-curve", help="simulated mean of T^2/k against m")
    p.add_argument("--n", type=_positive_int, nargs="+", default=list(FIGURE3_N))
    p.add_argument("--rho", type=_rho, nargs="+", default=list(FIGURE3_RHO))
    p.add_argument("--ns-factor", type=float, nargs="+", default=list(FIGURE3_NS_FACTOR))
    p.add_argument("--reps", type=_positive_int, default=1000)
    p.add_argument("--seed", type=_seed, default=DEFAULT_SEED)
    output_flags(p)
    p.set_defaults(handler=cmd_simulate_curve)

    p = sub.add_parser("table1", help="two-dimensional simulation on the iso-power ellipse")
    p.add_argument("--rho", type=_rho, nargs="+", default=list(TABLE1_RHOS))
    p.add_argument("--ns", type=_positive_int, nargs="+", default=list(TABLE1_SAMPLE_SIZES))
    p.add_argument("--reps", type=_positive_int, default=1000)
    p.add_argument("--seed", type=_seed, default=DEFAULT_SEED)
    output_flags(p)
    p.set_defaults(handler=cmd_table1)

    p = sub.add_parser("test", help="two-sample Hotelling test on CSV files")
    p.add_argument("--x", required=True, help="headerless CSV, rows are observations")
    p.add_argument("--y", required=True)
    p.add_argument("--permutation-reps", type=_positive_int, default=None,
                   help=f"use the pseudo-inverse permutation test with this many relabellings "
                        f"(>= {MIN_PERMUTATIONS})")
    p.add_argument("--seed", type=_seed, default=DEFAULT_SEED)
    output_flags(p, ("text", "csv", "json"), "text")
    p.set_defaults(handler=cmd_test)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code
    try:
        text = args.handler(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DegenerateDimension as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except InvalidInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except HotellingError as exc:
        print(f"simulation failed: {exc}", file=sys.stderr)
        return EXIT_SIMULATION
    _emit(text, args.out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
