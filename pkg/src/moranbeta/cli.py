"""Command-line front end: reports, parameter sweeps, rate fits, MC checks.

Exit codes: 0 success, 1 certificate violation (a sandwich or exactness
check failed), 2 usage or parameter error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import beta as beta_dist
from .beta import BetaParams
from .distance import gap_h, kolmogorov, wasserstein
from .model import (
    ModelParams,
    sample_stationary,
    simulate_chain,
    stationary_ratio_product,
)
from .moments import mean, moment_recursion, variance
from .stein import (
    bound_certificate,
    lower_bound,
    stein_report,
    upper_bound_assembled,
)

SCHEMA_VERSION = "1"

SWEEP_COLUMNS = [
    "n",
    "a",
    "b",
    "mean",
    "variance",
    "beta_variance",
    "gap_h",
    "lower",
    "upper",
    "sandwich_ok",
    "e_abs_s_exact",
    "e_abs_s_bound",
    "wasserstein",
    "kolmogorov",
    "cond1_max_residual",
    "cond2_max_residual",
]

EXACT_COLUMNS = [
    "a_pq",
    "b_pq",
    "mean_pq",
    "variance_pq",
    "gap_h_pq",
    "lower_pq",
    "e_abs_s_exact_pq",
]

RATE_SLOPE_WINDOW = (-1.05, -0.95)


@dataclass(frozen=True)
class SweepConfig:
    """Grid of parameter points for sweep/rate runs."""

    a_values: tuple[Fraction, ...]
    b_values: tuple[Fraction, ...]
    n_values: tuple[int, ...]
    r_max: int = 8
    seed: int = 0
    output_format: str = "csv"

    def __post_init__(self) -> None:
        if not (self.a_values and self.b_values and self.n_values):
            raise ValueError("a, b, and n value lists must be non-empty")
        if self.output_format not in ("csv", "json"):
            raise ValueError(f"unknown output format {self.output_format!r}")
        if self.r_max < 1:
            raise ValueError("r_max must be positive")
        for a in self.a_values:
            for b in self.b_values:
                for n in self.n_values:
                    if a + b >= 2 * n:
                        raise ValueError(
                            f"grid point (a={a}, b={b}, n={n}) violates a + b < 2n"
                        )

    def points(self) -> list[tuple[Fraction, Fraction, int]]:
        """Grid points in deterministic lexicographic (a, b, n) order."""
        return sorted(
            (a, b, n)
            for a in set(self.a_values)
            for b in set(self.b_values)
            for n in set(self.n_values)
        )


def parse_rational(text: str) -> Fraction:
    """Accept 'p/q' or decimal notation."""
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def parse_rational_list(text: str) -> tuple[Fraction, ...]:
    return tuple(parse_rational(part) for part in text.split(",") if part)


def parse_int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(",") if part)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not an integer list: {text!r}") from exc


def fmt(x: float) -> str:
    """Decimal rendering with 17 significant digits (CSV contract)."""
    return format(float(x), ".17g")


def pq(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _write_output(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _report_payload(params: ModelParams, r_max: int, exact: bool) -> dict:
    pi = stationary_ratio_product(params)
    rep = stein_report(params, pi)
    cert = bound_certificate(params)
    table = moment_recursion(params, r_max)
    beta = BetaParams(params.a, params.b)
    w1 = wasserstein(pi, beta)
    kd = kolmogorov(pi, beta)
    payload: dict = {
        "schema_version": SCHEMA_VERSION,
        "command": "report",
        "params": {
            "n": params.n,
            "a": float(params.a),
            "b": float(params.b),
            "u": float(params.u),
            "v": float(params.v),
            "lambda": float(params.lam),
        },
        "stein": {
            "cond1_max_residual": float(rep.cond1_max_abs),
            "cond2_max_residual": float(rep.cond2_max_abs),
            "conditions_exact": rep.conditions_exact,
            "s_values": [float(s) for s in rep.s_values],
            "e_abs_s_exact": float(rep.e_abs_s_exact),
            "e_abs_s_bound": float(rep.e_abs_s_bound),
            "e_cubed_over_lambda_exact": float(rep.e_cubed_over_lambda_exact),
            "e_cubed_over_lambda_bound": float(rep.e_cubed_over_lambda_bound),
        },
        "certificate": {
            "lower": cert.lower,
            "gap_h": cert.gap,
            "upper": cert.upper,
            "upper_assembled": upper_bound_assembled(params, pi),
            "sandwich_ok": cert.sandwich_ok,
        },
        "moments": {str(r): float(table[r]) for r in sorted(table.values)},
        "variance": float(variance(params)),
        "beta_variance": float(beta_dist.variance(beta)),
        "distance": {
            "gap_h": float(gap_h(params)),
            "wasserstein": w1,
            "kolmogorov": kd,
        },
    }
    if exact:
        payload["exact"] = {
            "a": pq(params.a),
            "b": pq(params.b),
            "mean": pq(mean(params)),
            "variance": pq(variance(params)),
            "gap_h": pq(gap_h(params)),
            "lower": pq(lower_bound(params)),
            "e_abs_s_exact": pq(rep.e_abs_s_exact),
            "moments": {str(r): pq(table[r]) for r in sorted(table.values)},
        }
    return payload


def cmd_report(args: argparse.Namespace) -> int:
    params = ModelParams(args.n, args.a, args.b)
    payload = _report_payload(params, args.r_max, args.exact)
    _write_output(json.dumps(payload, indent=2) + "\n", args.out)
    ok = (
        payload["certificate"]["sandwich_ok"]
        and payload["stein"]["conditions_exact"]
    )
    return 0 if ok else 1


def _sweep_row(task: tuple[int, Fraction, Fraction]) -> dict:
    n, a, b = task
    try:
        return _sweep_row_inner(n, a, b)
    except Exception as exc:
        raise ValueError(f"row (a={a}, b={b}, n={n}) failed: {exc}") from exc


def _sweep_row_inner(n: int, a: Fraction, b: Fraction) -> dict:
    params = ModelParams(n, a, b)
    pi = stationary_ratio_product(params)
    rep = stein_report(params, pi)
    cert = bound_certificate(params)
    beta = BetaParams(a, b)
    return {
        "n": n,
        "a": a,
        "b": b,
        "mean": mean(params),
        "variance": variance(params),
        "beta_variance": beta_dist.variance(beta),
        "gap_h": gap_h(params),
        "lower": lower_bound(params),
        "upper": cert.upper,
        "sandwich_ok": cert.sandwich_ok,
        "e_abs_s_exact": rep.e_abs_s_exact,
        "e_abs_s_bound": rep.e_abs_s_bound,
        "wasserstein": wasserstein(pi, beta),
        "kolmogorov": kolmogorov(pi, beta),
        "cond1_max_residual": rep.cond1_max_abs,
        "cond2_max_residual": rep.cond2_max_abs,
    }


def _compute_rows(
    points: list[tuple[Fraction, Fraction, int]], jobs: int
) -> list[dict]:
    tasks = [(n, a, b) for (a, b, n) in points]
    if jobs <= 1 or len(tasks) <= 1:
        return [_sweep_row(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_sweep_row, tasks, chunksize=1))


def _render_sweep_csv(rows: list[dict], exact: bool) -> str:
    columns = SWEEP_COLUMNS + (EXACT_COLUMNS if exact else [])
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        rendered = {
            "n": str(row["n"]),
            "a": fmt(row["a"]),
            "b": fmt(row["b"]),
            "mean": fmt(row["mean"]),
            "variance": fmt(row["variance"]),
            "beta_variance": fmt(row["beta_variance"]),
            "gap_h": fmt(row["gap_h"]),
            "lower": fmt(row["lower"]),
            "upper": fmt(row["upper"]),
            "sandwich_ok": "true" if row["sandwich_ok"] else "false",
            "e_abs_s_exact": fmt(row["e_abs_s_exact"]),
            "e_abs_s_bound": fmt(row["e_abs_s_bound"]),
            "wasserstein": fmt(row["wasserstein"]),
            "kolmogorov": fmt(row["kolmogorov"]),
            "cond1_max_residual": fmt(row["cond1_max_residual"]),
            "cond2_max_residual": fmt(row["cond2_max_residual"]),
            "a_pq": pq(row["a"]),
            "b_pq": pq(row["b"]),
            "mean_pq": pq(row["mean"]),
            "variance_pq": pq(row["variance"]),
            "gap_h_pq": pq(row["gap_h"]),
            "lower_pq": pq(row["lower"]),
            "e_abs_s_exact_pq": pq(row["e_abs_s_exact"]),
        }
        writer.writerow([rendered[c] for c in columns])
    return buf.getvalue()


def _render_sweep_json(rows: list[dict], exact: bool) -> str:
    out_rows = []
    for row in rows:
        item = {
            "n": row["n"],
            "a": float(row["a"]),
            "b": float(row["b"]),
            "mean": float(row["mean"]),
            "variance": float(row["variance"]),
            "beta_variance": float(row["beta_variance"]),
            "gap_h": float(row["gap_h"]),
            "lower": float(row["lower"]),
            "upper": float(row["upper"]),
            "sandwich_ok": bool(row["sandwich_ok"]),
            "e_abs_s_exact": float(row["e_abs_s_exact"]),
            "e_abs_s_bound": float(row["e_abs_s_bound"]),
            "wasserstein": float(row["wasserstein"]),
            "kolmogorov": float(row["kolmogorov"]),
            "cond1_max_residual": float(row["cond1_max_residual"]),
            "cond2_max_residual": float(row["cond2_max_residual"]),
        }
        if exact:
            item["exact"] = {
                "a": pq(row["a"]),
                "b": pq(row["b"]),
                "mean": pq(row["mean"]),
                "variance": pq(row["variance"]),
                "gap_h": pq(row["gap_h"]),
                "lower": pq(row["lower"]),
                "e_abs_s_exact": pq(row["e_abs_s_exact"]),
            }
        out_rows.append(item)
    return json.dumps(
        {"schema_version": SCHEMA_VERSION, "command": "sweep", "rows": out_rows},
        indent=2,
    ) + "\n"


def cmd_sweep(args: argparse.Namespace) -> int:
    config = SweepConfig(
        a_values=args.a,
        b_values=args.b,
        n_values=args.n,
        r_max=args.r_max,
        seed=args.seed,
        output_format=args.format,
    )
    try:
        rows = _compute_rows(config.points(), args.jobs)
    except ValueError as exc:
        raise ValueError(f"sweep aborted: {exc}") from exc
    if config.output_format == "csv":
        text = _render_sweep_csv(rows, args.exact)
    else:
        text = _render_sweep_json(rows, args.exact)
    _write_output(text, args.out)
    violations = [
        r
        for r in rows
        if not r["sandwich_ok"]
        or r["cond1_max_residual"] != 0
        or r["cond2_max_residual"] != 0
    ]
    return 1 if violations else 0


def _fit_slope(ns: list[int], values: list[float]) -> float:
    logs_n = np.log(np.asarray(ns, dtype=float))
    logs_v = np.log(np.asarray(values, dtype=float))
    slope, _ = np.polyfit(logs_n, logs_v, 1)
    return float(slope)


def cmd_rate(args: argparse.Namespace) -> int:
    ns = sorted(set(args.n))
    if len(ns) < 4:
        raise ValueError("rate fitting needs at least 4 distinct n values")
    if max(ns) < 8 * min(ns):
        raise ValueError("rate fitting needs n values spanning a factor of 8")
    fits = []
    all_ok = True
    for a in sorted(set(args.a)):
        for b in sorted(set(args.b)):
            gaps, w1s, kols = [], [], []
            for n in ns:
                params = ModelParams(n, a, b)
                gaps.append(float(gap_h(params)))
                pi = stationary_ratio_product(params)
                beta = BetaParams(a, b)
                w1s.append(wasserstein(pi, beta))
                kols.append(kolmogorov(pi, beta))
            slope_gap = _fit_slope(ns, gaps)
            ok = RATE_SLOPE_WINDOW[0] <= slope_gap <= RATE_SLOPE_WINDOW[1]
            all_ok = all_ok and ok
            fits.append(
                {
                    "a": float(a),
                    "b": float(b),
                    "slope_gap_h": slope_gap,
                    "slope_wasserstein": _fit_slope(ns, w1s),
                    "slope_kolmogorov": _fit_slope(ns, kols),
                    "gap_h_slope_ok": ok,
                }
            )
    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": "rate",
        "n_values": ns,
        "gap_h_slope_window": list(RATE_SLOPE_WINDOW),
        "fits": fits,
        "ok": all_ok,
    }
    _write_output(json.dumps(payload, indent=2) + "\n", args.out)
    return 0 if all_ok else 1


def _freq_section(
    counts: np.ndarray, total: int, exact: np.ndarray, se: np.ndarray
) -> dict:
    freqs = counts / total
    dev = np.abs(freqs - exact)
    with np.errstate(divide="ignore", invalid="ignore"):
        units = np.where(se > 0, dev / se, np.where(dev > 0, np.inf, 0.0))
    flags = [int(i) for i in np.nonzero(units > 5.0)[0]]
    return {
        "count": int(total),
        "frequencies": [float(f) for f in freqs],
        "tv_to_exact": float(0.5 * dev.sum()),
        "max_se_units": float(units.max()),
        "flagged_states": flags,
    }


def cmd_validate(args: argparse.Namespace) -> int:
    params = ModelParams(args.n, args.a, args.b)
    pi = stationary_ratio_product(params)
    exact = pi.probs
    size = 2 * params.n + 1
    payload: dict = {
        "schema_version": SCHEMA_VERSION,
        "command": "validate",
        "params": {"n": params.n, "a": float(params.a), "b": float(params.b)},
        "seed": args.seed,
        "exact_probs": [float(p) for p in exact],
    }
    any_flags = False
    if args.samples > 0:
        draws = sample_stationary(pi, seed=args.seed, count=args.samples)
        counts = np.bincount(draws, minlength=size).astype(float)
        se = np.sqrt(exact * (1.0 - exact) / args.samples)
        section = _freq_section(counts, args.samples, exact, se)
        payload["iid"] = section
        any_flags = any_flags or bool(section["flagged_states"])
    if args.steps > 0:
        path = simulate_chain(
            params, start=params.n, steps=args.burn_in + args.steps, seed=args.seed + 1
        )
        kept = path[args.burn_in + 1 :]
        counts = np.bincount(kept, minlength=size).astype(float)
        # batch-means standard errors: occupation fractions are correlated
        n_batches = min(1000, max(10, args.steps // 100))
        usable = (len(kept) // n_batches) * n_batches
        batches = kept[:usable].reshape(n_batches, -1)
        batch_freqs = np.stack(
            [np.bincount(row, minlength=size) / batches.shape[1] for row in batches]
        )
        se = batch_freqs.std(axis=0, ddof=1) / math.sqrt(n_batches)
        section = _freq_section(counts, len(kept), exact, se)
        section["burn_in"] = args.burn_in
        section["batches"] = int(n_batches)
        payload["chain"] = section
        any_flags = any_flags or bool(section["flagged_states"])
    _write_output(json.dumps(payload, indent=2) + "\n", args.out)
    return 1 if any_flags else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="moranbeta",
        description=(
            "Exact verification and Beta-approximation error certificates "
            "for the two-allele Moran chain."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    rep = sub.add_parser("report", help="single-point certificate report (JSON)")
    rep.add_argument("--n", type=int, required=True, help="population scale n")
    rep.add_argument("--a", type=parse_rational, required=True, help="a = 2nv, 'p/q' or decimal")
    rep.add_argument("--b", type=parse_rational, required=True, help="b = 2nu, 'p/q' or decimal")
    rep.add_argument("--r-max", type=int, default=8, help="highest moment order")
    rep.add_argument("--exact", action="store_true", help="include exact p/q fields")
    rep.add_argument("--out", default=None, help="write to FILE instead of stdout")
    rep.set_defaults(func=cmd_report)

    swp = sub.add_parser("sweep", help="grid certification table")
    swp.add_argument("--n", type=parse_int_list, required=True, help="comma-separated n values")
    swp.add_argument("--a", type=parse_rational_list, required=True, help="comma-separated a values")
    swp.add_argument("--b", type=parse_rational_list, required=True, help="comma-separated b values")
    swp.add_argument("--r-max", type=int, default=8)
    swp.add_argument("--seed", type=int, default=0)
    swp.add_argument("--jobs", type=int, default=os.cpu_count() or 1,
                     help="parallel workers (rows are independent)")
    swp.add_argument("--format", choices=("csv", "json"), default="csv")
    swp.add_argument("--exact", action="store_true", help="append exact p/q columns")
    swp.add_argument("--out", default=None)
    swp.set_defaults(func=cmd_sweep)

    rate = sub.add_parser("rate", help="log-log decay slopes of the distances")
    rate.add_argument("--n", type=parse_int_list, required=True,
                      help="comma-separated n values (>= 4, spanning 8x)")
    rate.add_argument("--a", type=parse_rational_list, required=True)
    rate.add_argument("--b", type=parse_rational_list, required=True)
    rate.add_argument("--out", default=None)
    rate.set_defaults(func=cmd_rate)

    val = sub.add_parser("validate", help="Monte Carlo cross-check of pi")
    val.add_argument("--n", type=int, required=True)
    val.add_argument("--a", type=parse_rational, required=True)
    val.add_argument("--b", type=parse_rational, required=True)
    val.add_argument("--samples", type=int, default=1_000_000,
                     help="i.i.d. draws from exact pi (0 skips)")
    val.add_argument("--steps", type=int, default=1_000_000,
                     help="chain steps after burn-in (0 skips)")
    val.add_argument("--burn-in", type=int, default=10_000)
    val.add_argument("--seed", type=int, default=0)
    val.add_argument("--out", default=None)
    val.set_defaults(func=cmd_validate)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except IndexError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
