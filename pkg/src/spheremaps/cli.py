"""Command-line front end: degree estimates, semi-norms, pair distances,
named golden-value experiments, parameter sweeps, and distance optimization.

Exit codes: 0 = all declared tolerances met, 1 = a numerical check failed,
2 = usage error.  CSV output is byte-stable for fixed seed and flags
(LF line endings, 17 significant digits).
"""

import argparse
import sys

import numpy as np

from . import experiments, gallery, grid, optimize, seminorms, sphere2
from .grid import CircleMap, SobolevIndex
from .sphere2 import Sphere2Map


def _fmt(x):
    if isinstance(x, (bool, np.bool_)):
        return "True" if x else "False"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    return str(x)


def _write_table(rows, path=None, sep=","):
    if not rows:
        return ""
    cols = list(rows[0])
    lines = [sep.join(cols)]
    lines += [sep.join(_fmt(r.get(c, "")) for c in cols) for r in rows]
    text = "\n".join(lines) + "\n"
    if path:
        with open(path, "w", newline="\n") as fh:
            fh.write(text)
    return text


def parse_map_spec(spec):
    """`name:key=value,key=value` with ints, reals, scientific notation;
    a path ending in .csv loads sampled values (theta, Re f, Im f)."""
    if spec.endswith(".csv"):
        data = np.loadtxt(spec, delimiter=",", skiprows=1, ndmin=2)
        samples = data[:, 1] + 1j * data[:, 2]
        samples = samples / np.abs(samples)
        return grid.from_samples(samples)
    name, _, blob = spec.partition(":")
    params = {}
    if blob:
        for item in blob.split(","):
            key, _, raw = item.partition("=")
            if not _ or not key:
                raise ValueError(f"bad key=value item '{item}' in '{spec}'")
            try:
                val = int(raw)
            except ValueError:
                val = float(raw)
            params[key.strip()] = val
    return gallery.build_map(name.strip(), **params)


def parse_pair_spec(spec):
    name, _, blob = spec.partition(":")
    params = {}
    if blob:
        for item in blob.split(","):
            key, _, raw = item.partition("=")
            try:
                val = int(raw)
            except ValueError:
                val = float(raw)
            params[key.strip()] = val
    return gallery.build_pair(name.strip(), **params)


def cmd_degree(args):
    f = parse_map_spec(args.map)
    rows = []
    if isinstance(f, Sphere2Map):
        deg = sphere2.degree_kronecker_s2(f)
        rows.append({"method": "kronecker", "value": deg,
                     "rounded": grid.round_degree(deg)})
    else:
        w = grid.degree_winding(f)
        kr = grid.degree_kronecker_s1(f)
        fo = grid.degree_fourier(f)
        rows.append({"method": "winding", "value": float(w), "rounded": w})
        rows.append({"method": "kronecker", "value": kr,
                     "rounded": grid.round_degree(kr)})
        rows.append({"method": "fourier", "value": fo,
                     "rounded": grid.round_degree(fo)})
    sys.stdout.write(_write_table(rows, args.output, args.sep))
    return 0


_METHOD_ALIASES = {
    "w1p": "w1p_quadrature", "gagliardo": "gagliardo_quadrature",
    "fourier": "fourier_h_half", "sup": "sup_norm",
}


def _applicable_methods(index):
    if index.s == 1.0:
        return ["w1p_quadrature", "sup_norm"]
    methods = ["gagliardo_quadrature", "sup_norm"]
    if index.s == 0.5 and index.p == 2.0:
        methods.insert(1, "fourier_h_half")
    return methods


def _norm_rows(f, g, index, method):
    methods = ([_METHOD_ALIASES.get(method, method)] if method
               else _applicable_methods(index))
    rows = []
    for m in methods:
        res = seminorms.seminorm(f, index, m, g=g)
        row = {"method": m, "s": index.s, "p": index.p, "value": res.value}
        if m == "fourier_h_half":
            row["value_sq"] = res.value ** 2
        rows.append(row)
    return rows


def cmd_seminorm(args):
    f = parse_map_spec(args.map)
    index = SobolevIndex(args.s, args.p)
    rows = _norm_rows(f, None, index, args.method)
    sys.stdout.write(_write_table(rows, args.output, args.sep))
    return 0


def cmd_pair(args):
    pair = parse_pair_spec(args.pair)
    index = SobolevIndex(args.s, args.p)
    if isinstance(pair.f, Sphere2Map):
        val = sphere2.h1_distance(pair.f, pair.g)
        rows = [{"method": "h1_quadrature", "s": args.s, "p": args.p,
                 "value_sq": val, "value": float(np.sqrt(val))}]
    else:
        rows = _norm_rows(pair.f, pair.g, index, args.method)
        for r in rows:
            r["claim"] = pair.claim
    sys.stdout.write(_write_table(rows, args.output, args.sep))
    return 0


def cmd_experiment(args):
    names = (list(experiments.REGISTRY) if args.name == "all"
             else [args.name])
    overrides = {}
    for item in args.param or []:
        key, _, raw = item.partition("=")
        if "," not in raw:
            try:
                raw = int(raw)
            except ValueError:
                try:
                    raw = float(raw)
                except ValueError:
                    pass
        overrides[key.replace("-", "_")] = raw
    all_ok = True
    for name in names:
        try:
            result = experiments.run_experiment(
                name, **(overrides if args.name != "all" else {}))
        except KeyError as exc:
            sys.stderr.write(f"error: {exc.args[0]}\n")
            return 2
        text = _write_table(
            result.rows,
            args.output if len(names) == 1 else
            (f"{args.output}.{name}.csv" if args.output else None),
            args.sep)
        sys.stdout.write(text)
        verdict = "PASS" if result.passed else "FAIL"
        sys.stdout.write(f"{name}: {verdict} ({result.summary})\n")
        if not result.passed:
            all_ok = False
            for row in result.rows:
                if not row.get("pass", True):
                    sys.stdout.write("failing row: " + ",".join(
                        _fmt(v) for v in row.values()) + "\n")
    return 0 if all_ok else 1


_SWEEPS = {
    "product-shift": "product-shift-scaling",
    "multibump": "multibump-scaling",
    "oscillator": "oscillator-lb",
    "capacity": "capacity-decay",
    "bump": "eps-bump-critical",
    "deflation": "dist-w11-hausdorff",
}


def cmd_sweep(args):
    if args.name not in _SWEEPS:
        sys.stderr.write(f"error: unknown sweep '{args.name}'; known: "
                         f"{', '.join(sorted(_SWEEPS))}\n")
        return 2
    overrides = {}
    if args.d is not None:
        overrides["d"] = args.d
    if args.n is not None:
        overrides["n"] = args.n
    if args.eps is not None:
        overrides["eps"] = args.eps
    if args.s is not None:
        overrides["s"] = args.s
    if args.p is not None:
        overrides["p"] = args.p
    try:
        result = experiments.run_experiment(_SWEEPS[args.name], **overrides)
    except KeyError as exc:
        sys.stderr.write(f"error: {exc.args[0]}\n")
        return 2
    sys.stdout.write(_write_table(result.rows, args.output, args.sep))
    return 0


def cmd_optimize(args):
    f = parse_map_spec(args.source)
    index = SobolevIndex(args.s, args.p)
    kwargs = dict(k=args.k, budget=args.budget, restarts=args.restarts,
                  seed=args.seed)
    if args.one_sided:
        report = optimize.estimate_point_to_class(
            f, args.to_class, index, **kwargs)
    else:
        report = optimize.estimate_inf_distance(
            f, args.to_class, index, **kwargs)
    rows = [{"iteration": i, "value": v}
            for i, v in enumerate(report.trace)]
    if args.output:
        _write_table(rows, args.output, args.sep)
    sys.stdout.write(_write_table([{
        "value": report.value, "target": report.target, "gap": report.gap,
        "restarts": report.restarts_used,
        "budget_exhausted": report.budget_exhausted}], None, args.sep))
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="spheremaps",
        description="Distances between homotopy classes of circle- and "
                    "sphere-valued maps: degrees, semi-norms, explicit "
                    "construction galleries, and golden-value experiments.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--output", help="write the CSV table to this path")
        p.add_argument("--format", choices=("csv", "tsv"), default="csv")

    p = sub.add_parser("degree", help="three degree estimates for a map")
    p.add_argument("--map", required=True,
                   help="gallery spec name:key=value,... or a .csv file")
    common(p)
    p.set_defaults(func=cmd_degree)

    p = sub.add_parser("seminorm", help="semi-norm of a single map")
    p.add_argument("--map", required=True)
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--method",
                   help="w1p | gagliardo | fourier | sup (default: all "
                        "applicable)")
    common(p)
    p.set_defaults(func=cmd_seminorm)

    p = sub.add_parser("pair", help="distance between a gallery pair")
    p.add_argument("--pair", required=True,
                   help="pair spec name:key=value,...")
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--method")
    common(p)
    p.set_defaults(func=cmd_pair)

    p = sub.add_parser("experiment",
                       help="run a named golden-value experiment (or 'all')")
    p.add_argument("name")
    p.add_argument("--param", action="append", metavar="KEY=VALUE",
                   help="override an experiment parameter")
    common(p)
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("sweep", help="parameter sweep emitting CSV rows")
    p.add_argument("name", help=" | ".join(sorted(_SWEEPS)))
    p.add_argument("--d")
    p.add_argument("--n")
    p.add_argument("--eps")
    p.add_argument("--s", type=float)
    p.add_argument("--p", type=float)
    common(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("optimize",
                       help="estimate a class distance by simplex descent")
    p.add_argument("--from", dest="source", required=True,
                   help="map spec fixing the starting class")
    p.add_argument("--to-class", type=int, required=True)
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--k", type=int, default=32)
    p.add_argument("--budget", type=int, default=2000)
    p.add_argument("--restarts", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--one-sided", action="store_true",
                   help="hold the source map fixed")
    common(p)
    p.set_defaults(func=cmd_optimize)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    args.sep = "\t" if args.format == "tsv" else ","
    try:
        return args.func(args)
    except (ValueError, KeyError, FileNotFoundError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
