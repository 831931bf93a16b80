"""Command-line front end.

Subcommands
-----------
test      Run the two-sample test on two curve CSV files and emit a JSON
          report plus diagnostic CSVs.
simulate  Run a Monte Carlo size/power experiment from a plan file and
          emit a rejection-rate table plus a JSON summary.

Exit codes encode run health, not the statistical decision:
0 = the run completed (whatever the decision), 2 = input error,
3 = numeric failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from ._exceptions import InputDataError, NumericFailure
from .model import FunctionalSample
from .pipeline import analyze
from .report import build_report, write_diagnostics
from .simulate import (ExperimentPlan, MaProcessSpec, run_experiment,
                       table_sweep_plans)

__all__ = ["main", "ingest_csv", "parse_plan_config"]

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERIC = 3


def ingest_csv(path) -> FunctionalSample:
    """Read a curve matrix: rows are time points, columns grid points.

    A first row whose values are strictly increasing and lie in [0, 1]
    is interpreted as a header of grid points; otherwise the grid
    defaults to equidistant points on [0, 1] including the endpoints.
    Requires at least 4 curves on at least 2 grid points and finite
    entries throughout.
    """
    path = Path(path)
    if not path.exists():
        raise InputDataError(f"no such file: {path}")
    rows = []
    with open(path, newline="") as fh:
        for line_no, record in enumerate(csv.reader(fh), start=1):
            if not record or all(cell.strip() == "" for cell in record):
                continue
            try:
                rows.append([float(cell) for cell in record])
            except ValueError as exc:
                raise InputDataError(f"{path}:{line_no}: non-numeric cell ({exc})")
    if not rows:
        raise InputDataError(f"{path}: empty file")
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise InputDataError(f"{path}: ragged rows (widths {sorted(widths)})")

    first = np.asarray(rows[0])
    has_header = (first.size > 1 and np.all(np.diff(first) > 0)
                  and first[0] >= 0.0 and first[-1] <= 1.0)
    grid = first if has_header else None
    data = np.asarray(rows[1:] if has_header else rows, dtype=float)

    if data.ndim != 2 or data.shape[0] < 4 or data.shape[1] < 2:
        raise InputDataError(
            f"{path}: need at least 4 curves on at least 2 grid points, "
            f"got shape {data.shape}"
        )
    if not np.all(np.isfinite(data)):
        raise InputDataError(f"{path}: NaN or Inf entries")
    return FunctionalSample.from_values(data, grid=grid)


def _float_list(text: str) -> list:
    return [float(tok) for tok in text.replace(",", " ").split()]


def _run_test(args) -> int:
    x = ingest_csv(args.x)
    y = ingest_csv(args.y)
    if x.values.shape != y.values.shape:
        raise InputDataError(
            f"group shapes differ: {x.values.shape} vs {y.values.shape}")
    bandwidth = "cv" if args.cv else args.bandwidth
    if bandwidth is None:
        raise InputDataError("specify --bandwidth B or --cv")
    result = analyze(
        x, y, bandwidth=bandwidth, kernel=args.kernel,
        cv_grid=_float_list(args.cv_grid) if args.cv_grid else None,
        n_bootstrap=args.bootstrap, seed=args.seed,
        alphas=_float_list(args.alpha), statistic=args.statistic)
    report = build_report(result, seed=args.seed)
    report.write(args.out)
    if args.diagnostics:
        write_diagnostics(result, args.diagnostics)
    print(f"t_stat={report.t_stat:.6g} p_value={report.p_value:.6g} "
          f"bandwidth={report.bandwidth:.6g}")
    for alpha in sorted(report.decisions):
        verdict = "reject H0" if report.decisions[alpha] else "retain H0"
        print(f"  alpha={alpha}: {verdict} "
              f"(critical value {report.critical_values[alpha]:.6g})")
    print(f"report written to {args.out}")
    return EXIT_OK


_PLAN_DEFAULTS = {
    "t": 100, "k": 21, "a1": 0.8, "a2": [0.0], "bandwidth": "0.2",
    "kernel": "epanechnikov-pi", "b": 1000, "r": 500,
    "alphas": [0.01, 0.05, 0.10], "seed": 0, "cv_grid": None,
    "statistic": "t_star",
}


def parse_plan_config(path) -> dict:
    """Parse a key = value plan file (one pair per line, '#' comments).

    Keys (case-insensitive): T, k, a1, a2 (list allowed), bandwidth
    (number or "cv"), kernel, B, R, alphas, seed, cv_grid, statistic.
    Lists are comma-separated. Values beyond the X = MA(a1, a2) vs
    Y = MA(a1) paired design are out of scope for plan files; use the
    library API for arbitrary designs.
    """
    path = Path(path)
    if not path.exists():
        raise InputDataError(f"no such plan file: {path}")
    raw = {}
    for line_no, line in enumerate(path.read_text().splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise InputDataError(f"{path}:{line_no}: expected 'key = value'")
        key, value = (part.strip() for part in stripped.split("=", 1))
        raw[key.lower()] = value
    unknown = set(raw) - set(_PLAN_DEFAULTS)
    if unknown:
        raise InputDataError(f"{path}: unknown plan keys {sorted(unknown)}")

    plan = dict(_PLAN_DEFAULTS)
    try:
        for key in ("t", "k", "b", "r", "seed"):
            if key in raw:
                plan[key] = int(raw[key])
        for key in ("a2", "alphas", "cv_grid"):
            if key in raw:
                plan[key] = _float_list(raw[key])
        if "a1" in raw:
            plan["a1"] = float(raw["a1"])
        if "bandwidth" in raw:
            plan["bandwidth"] = raw["bandwidth"]
        if "kernel" in raw:
            plan["kernel"] = raw["kernel"]
        if "statistic" in raw:
            plan["statistic"] = raw["statistic"]
    except ValueError as exc:
        raise InputDataError(f"{path}: bad value ({exc})")
    return plan


def _run_simulate(args) -> int:
    plan_cfg = parse_plan_config(args.plan)
    bandwidth = plan_cfg["bandwidth"]
    if bandwidth != "cv":
        bandwidth = float(bandwidth)
    spec = MaProcessSpec(coefficients=(plan_cfg["a1"],),
                         T=plan_cfg["t"], k=plan_cfg["k"])
    base = ExperimentPlan(
        spec_x=spec, spec_y=spec, bandwidth=bandwidth, kernel=plan_cfg["kernel"],
        B=plan_cfg["b"], R=plan_cfg["r"], alphas=tuple(plan_cfg["alphas"]),
        master_seed=plan_cfg["seed"],
        cv_grid=tuple(plan_cfg["cv_grid"]) if plan_cfg["cv_grid"] else None,
        statistic=plan_cfg["statistic"])
    a2_values = plan_cfg["a2"]

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    results = []
    for a2, plan in zip(a2_values, table_sweep_plans(plan_cfg["a1"], a2_values, base)):
        plan = replace(plan, master_seed=plan.master_seed)
        result = run_experiment(plan)
        results.append(result)
        rates = " ".join(f"alpha={a}: {result.rejection_rates[a]:.3f}"
                         for a in plan.alphas)
        print(f"a2={a2}: {rates} (failures: {result.n_failures})")

    alphas = base.alphas
    with open(out_dir / "rejection_rates.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["a2"] + [f"alpha_{a}" for a in alphas])
        for a2, result in zip(a2_values, results):
            writer.writerow([a2] + [result.rejection_rates[a] for a in alphas])

    summary = {
        "plan": {k: plan_cfg[k] for k in sorted(plan_cfg) if k != "a2"},
        "a2": a2_values,
        "results": [
            {
                "a2": a2,
                "rejection_rates": {repr(a): r.rejection_rates[a] for a in alphas},
                "standard_errors": {repr(a): r.standard_errors[a] for a in alphas},
                "n_failures": r.n_failures,
                "t_stats": [float(v) for v in r.t_stats],
                "p_values": [float(v) for v in r.p_values],
            }
            for a2, r in zip(a2_values, results)
        ],
    }
    (out_dir / "summary.json").write_text(
        json.dumps(summary, sort_keys=True, separators=(",", ":")) + "\n")
    print(f"results written to {out_dir}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="speceq",
        description="Two-sample equality test for spectral density operators "
                    "of functional time series.")
    sub = parser.add_subparsers(dest="command", required=True)

    t = sub.add_parser("test", help="run the test on two curve CSV files")
    t.add_argument("--x", required=True, help="CSV of group-X curves (rows = time)")
    t.add_argument("--y", required=True, help="CSV of group-Y curves")
    t.add_argument("--bandwidth", type=float, default=None,
                   help="smoothing bandwidth in (0, 1)")
    t.add_argument("--cv", action="store_true",
                   help="select the bandwidth by cross-validation")
    t.add_argument("--cv-grid", default=None,
                   help="comma-separated candidate bandwidths for --cv")
    t.add_argument("--kernel", default="epanechnikov-pi",
                   choices=["epanechnikov-pi", "uniform-pi"])
    t.add_argument("--bootstrap", type=int, default=1000, metavar="B",
                   help="number of bootstrap replicates (default 1000)")
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--alpha", default="0.01,0.05,0.10",
                   help="comma-separated test levels")
    t.add_argument("--statistic", default="t_star", choices=["t_star", "t_plus"])
    t.add_argument("--out", required=True, help="path of the JSON report")
    t.add_argument("--diagnostics", default=None,
                   help="directory for diagnostic CSVs")
    t.set_defaults(func=_run_test)

    s = sub.add_parser("simulate", help="run a Monte Carlo experiment plan")
    s.add_argument("--plan", required=True, help="key = value plan file")
    s.add_argument("--out", required=True, help="output directory")
    s.set_defaults(func=_run_simulate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputDataError, OSError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (NumericFailure, FloatingPointError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
