"""Command-line entry point: ``unruh-otto {fig1,fig2,cycle,sweep,oracle-check}``.

Tabular output is CSV (first line a ``#`` metadata comment, then a header)
or JSON.  Rows are always emitted in input order regardless of how many
worker threads evaluated them; ``UNRUH_OTTO_THREADS`` caps that number.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .cycle import CycleParams, cal_P, run_cycle, solve_initial_population
from .detector import DetectorSpec
from .errors import NonConvergence, UnruhOttoError
from .response import (
    QuadratureConfig,
    ResponseArgs,
    delta_p_closed,
    delta_p_limit_n_inf,
    delta_p_quadrature,
)
from .specfun import SeriesConfig

CONFIG_FIELDS = ("n", "omega1", "omega2", "g", "v", "alpha_H", "alpha_C")
ORACLE_GRID_A = (0.3, 0.6, 1.0)
ORACLE_GRID_V = (0.5, 0.9)
ORACLE_GRID_PN = ((0.0, 1), (0.5, 2), (0.75, 4))


class ConfigError(UnruhOttoError):
    pass


def fmt(x):
    """Shortest round-trip repr of ``x`` rounded to 12 significant digits."""
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if math.isnan(x):
        return "nan"
    out = repr(float(f"{x:.12g}"))
    return out[:-2] if out.endswith(".0") else out


def parse_n(token):
    if str(token).strip().lower() == "inf":
        return math.inf
    try:
        n = int(token)
    except ValueError:
        raise argparse.ArgumentTypeError(f"degeneracy must be a positive integer or 'inf': {token!r}")
    if n < 1:
        raise argparse.ArgumentTypeError(f"degeneracy must be >= 1: {token!r}")
    return n


def parse_pn(token):
    try:
        p, n = token.split(":")
        return float(p), parse_n(n)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected P:N, got {token!r}")


def n_value(n):
    return "inf" if n == math.inf else int(n)


def _threads():
    try:
        cap = int(os.environ.get("UNRUH_OTTO_THREADS", ""))
    except ValueError:
        cap = os.cpu_count() or 1
    return max(1, cap)


def parallel_map(fn, items):
    items = list(items)
    with ThreadPoolExecutor(max_workers=min(_threads(), max(1, len(items)))) as pool:
        return list(pool.map(fn, items))


def _series(args):
    return SeriesConfig(rel_tol=args.tol) if args.tol else SeriesConfig()


def _open_out(path):
    return open(path, "w", newline="") if path else sys.stdout


def emit_table(command, meta, columns, rows, out=None, fmt_kind="csv"):
    meta = {"version": __version__, "command": command, **meta}
    stream = _open_out(out)
    try:
        if fmt_kind == "json":
            doc = {"meta": meta, "columns": list(columns),
                   "rows": [[_json_cell(c) for c in r] for r in rows]}
            stream.write(json.dumps(doc, indent=1, sort_keys=True) + "\n")
        else:
            stream.write(f"# unruh-otto {__version__} {command} {json.dumps(meta, sort_keys=True)}\n")
            stream.write(",".join(columns) + "\n")
            for r in rows:
                stream.write(",".join(fmt(c) if not isinstance(c, str) else c for c in r) + "\n")
    finally:
        if stream is not sys.stdout:
            stream.close()


def _json_cell(c):
    if isinstance(c, float) and not math.isfinite(c):
        return fmt(c)
    if isinstance(c, float):
        return float(fmt(c))
    return c


def _linspace(start, stop, count):
    if count < 2:
        raise ConfigError("range count must be >= 2")
    return np.linspace(start, stop, count).tolist()


def cmd_fig1(args):
    y_args = dict(v=args.v)
    cfg = _series(args)
    a_values = _linspace(args.a_min, args.a_max, args.a_count)
    if a_values[0] <= 0:
        raise ConfigError("a range must be strictly positive")
    n_list = args.n or [1, 2, 3, 10, math.inf]
    points = [(a, n) for a in a_values for n in n_list]

    def one(pt):
        a, n = pt
        ra = ResponseArgs(args.p, n, a, 1.0, **y_args)
        val = delta_p_limit_n_inf(ra, cfg) if n == math.inf else delta_p_closed(ra, cfg)
        return [a, n_value(n), val]

    rows = parallel_map(one, points)
    meta = {"p": args.p, "v": args.v, "n": [n_value(n) for n in n_list],
            "a_min": args.a_min, "a_max": args.a_max, "a_count": args.a_count, "tol": cfg.rel_tol}
    emit_table("fig1", meta, ("a_H", "n", "delta_p_over_g2"), rows, args.out, args.format)
    return 0


def cmd_fig2(args):
    cfg = _series(args)
    p_values = _linspace(args.p_min, args.p_max, args.p_count)
    if not (0 <= min(p_values) and max(p_values) <= 1):
        raise ConfigError("p range must lie in [0, 1]")
    n_list = args.n or [1, 2, 3, 10, math.inf]
    points = [(p, n) for p in p_values for n in n_list]

    def one(pt):
        p, n = pt
        # omega = 0: zero-gap limit, where J(0, y) serves both signs
        ra = ResponseArgs(p, n, 0.0, 1.0, args.v)
        return [p, n_value(n), delta_p_closed(ra, cfg)]

    rows = parallel_map(one, points)
    meta = {"v": args.v, "n": [n_value(n) for n in n_list], "p_min": args.p_min,
            "p_max": args.p_max, "p_count": args.p_count, "tol": cfg.rel_tol}
    emit_table("fig2", meta, ("p", "n", "delta_p_over_g2"), rows, args.out, args.format)
    return 0


def load_cycle_config(path):
    """Read a flat JSON cycle config; returns ``(CycleParams, p or None)``."""
    with open(path) as fh:
        text = fh.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: top level must be a JSON object")
    unknown = sorted(set(doc) - set(CONFIG_FIELDS) - {"p"})
    if unknown:
        raise ConfigError(f"{path}: unknown field(s) {', '.join(unknown)}")
    missing = [f for f in CONFIG_FIELDS if f not in doc]
    if missing:
        raise ConfigError(f"{path}: missing field(s) {', '.join(missing)}")
    for key, val in doc.items():
        if isinstance(val, bool) or not isinstance(val, (int, float)):
            raise ConfigError(f"{path}: field '{key}' must be a number, got {val!r}")
    try:
        spec = DetectorSpec(doc["n"], doc["omega1"], doc["omega2"], doc["g"])
        params = CycleParams(spec, doc["v"], doc["alpha_H"], doc["alpha_C"])
    except UnruhOttoError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    return params, doc.get("p")


def cmd_cycle(args):
    params, p = load_cycle_config(args.config)
    cfg = _series(args)
    solved = p is None
    if solved:
        p = solve_initial_population(params, cfg)
    report = run_cycle(params, p, cfg)
    doc = {"version": __version__, "config": os.path.basename(args.config),
           "p_solved": solved, "report": report.to_dict()}
    if solved:
        doc["cal_P"] = cal_P(params.a_H, params.a_C, params.v, cfg)
    stream = _open_out(args.out)
    try:
        stream.write(json.dumps(doc, indent=1, sort_keys=True) + "\n")
    finally:
        if stream is not sys.stdout:
            stream.close()
    flags = report.flags
    if not flags["perturbative_ok"]:
        return 2
    if not flags["closed_cycle_ok"]:
        return 3
    if not flags["positive_work"]:
        return 4
    return 0


SWEEP_VARS = ("a_H", "p", "n", "v")


def cmd_sweep(args):
    cfg = _series(args)
    if args.values:
        values = [parse_n(v) if args.var == "n" else float(v) for v in args.values]
    elif args.start is not None and args.stop is not None:
        if args.var == "n":
            raise ConfigError("sweeping n needs an explicit --values list")
        values = _linspace(args.start, args.stop, args.count)
    else:
        raise ConfigError("give either --values or --start/--stop/--count")
    base = {"a_H": args.a_H, "p": args.p, "n": (args.n or [1])[0], "v": args.v}

    def one(val):
        pt = {**base, args.var: val}
        ra = ResponseArgs(pt["p"], pt["n"], pt["a_H"], 1.0, pt["v"])
        return [pt["a_H"], pt["p"], n_value(pt["n"]), pt["v"], delta_p_closed(ra, cfg)]

    rows = parallel_map(one, values)
    meta = {"var": args.var, "fixed": {k: n_value(v) if k == "n" else v
                                        for k, v in base.items() if k != args.var},
            "tol": cfg.rel_tol}
    emit_table("sweep", meta, ("a_H", "p", "n", "v", "delta_p_over_g2"), rows, args.out, args.format)
    return 0


def cmd_oracle_check(args):
    cfg = _series(args)
    qcfg = QuadratureConfig(image_terms=args.image_terms, domain_factor=args.domain_factor,
                            grid=args.grid, rel_tol=args.qtol)
    a_list = args.a or list(ORACLE_GRID_A)
    v_list = args.v or list(ORACLE_GRID_V)
    pn_list = args.pn or list(ORACLE_GRID_PN)
    points = [(a, v, p, n) for a in a_list for v in v_list for p, n in pn_list]

    def one(pt):
        a, v, p, n = pt
        ra = ResponseArgs(p, n, a, 1.0, v)
        closed = delta_p_closed(ra, cfg)
        try:
            quad, err = delta_p_quadrature(ra, qcfg)
        except NonConvergence as exc:
            quad = exc.estimate if exc.estimate is not None else math.nan
            err = exc.error if exc.error is not None else math.nan
        diff = abs(closed - quad)
        ok = bool(diff <= err + 1e-2 * abs(closed))
        label = f"a={fmt(a)};v={fmt(v)};p={fmt(p)};n={n_value(n)}"
        return [label, closed, quad, diff, err, ok]

    rows = parallel_map(one, points)
    meta = {"grid": qcfg.grid, "image_terms": qcfg.image_terms,
            "domain_factor": qcfg.domain_factor, "epsilon_schedule": list(qcfg.epsilon_schedule),
            "qtol": qcfg.rel_tol, "tol": cfg.rel_tol}
    emit_table("oracle-check", meta,
               ("point", "closed", "quadrature", "abs_diff", "error_estimate", "pass"),
               rows, args.out, args.format)
    return 0 if all(r[-1] for r in rows) else 1


def build_parser():
    parser = argparse.ArgumentParser(prog="unruh-otto", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, table=True):
        sp.add_argument("--out", help="output file (default: stdout)")
        if table:
            sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--tol", type=float, default=None, help="series relative tolerance")

    f1 = sub.add_parser("fig1", help="delta_p_H/g^2 against a_H for several n")
    common(f1)
    f1.add_argument("--p", type=float, default=0.5)
    f1.add_argument("--v", type=float, default=0.99)
    f1.add_argument("--n", type=parse_n, action="append", help="degeneracy (repeatable, 'inf' allowed)")
    f1.add_argument("--a-min", type=float, default=1e-4)
    f1.add_argument("--a-max", type=float, default=0.05)
    f1.add_argument("--a-count", type=int, default=200)
    f1.set_defaults(func=cmd_fig1)

    f2 = sub.add_parser("fig2", help="delta_p_H/g^2 against p in the zero-gap limit")
    common(f2)
    f2.add_argument("--v", type=float, default=0.99)
    f2.add_argument("--n", type=parse_n, action="append")
    f2.add_argument("--p-min", type=float, default=0.0)
    f2.add_argument("--p-max", type=float, default=1.0)
    f2.add_argument("--p-count", type=int, default=101)
    f2.set_defaults(func=cmd_fig2)

    cy = sub.add_parser("cycle", help="full cycle report from a JSON config")
    common(cy, table=False)
    cy.add_argument("--config", required=True)
    cy.set_defaults(func=cmd_cycle)

    sw = sub.add_parser("sweep", help="one-parameter sweep of delta_p_H/g^2")
    common(sw)
    sw.add_argument("--var", choices=SWEEP_VARS, required=True)
    sw.add_argument("--values", nargs="+")
    sw.add_argument("--start", type=float)
    sw.add_argument("--stop", type=float)
    sw.add_argument("--count", type=int, default=11)
    sw.add_argument("--a-H", dest="a_H", type=float, default=0.01)
    sw.add_argument("--p", type=float, default=0.5)
    sw.add_argument("--n", type=parse_n, action="append")
    sw.add_argument("--v", type=float, default=0.99)
    sw.set_defaults(func=cmd_sweep)

    oc = sub.add_parser("oracle-check", help="closed form against brute-force quadrature")
    common(oc)
    oc.add_argument("--a", type=float, action="append")
    oc.add_argument("--v", type=float, action="append")
    oc.add_argument("--pn", type=parse_pn, action="append", help="population:degeneracy pair")
    oc.add_argument("--grid", type=int, default=QuadratureConfig.grid)
    oc.add_argument("--image-terms", type=int, default=QuadratureConfig.image_terms)
    oc.add_argument("--domain-factor", type=float, default=QuadratureConfig.domain_factor)
    oc.add_argument("--qtol", type=float, default=QuadratureConfig.rel_tol,
                    help="relative error target of the quadrature")
    oc.set_defaults(func=cmd_oracle_check)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, UnruhOttoError, OSError) as exc:
        print(f"unruh-otto {args.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
