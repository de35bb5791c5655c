"""Command-line front end: sweeps, bound verification, single-instance traces.

Output is byte-deterministic for a fixed seed: ratios print with 6 decimals,
costs and sigmas with 4, CSV rows end with a single newline, and worker count
never changes a byte.  Exit codes: 0 ok, 1 I/O failure, 2 usage error,
3 bound violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Dict, List, Optional

import numpy as np

from . import bounds
from .experiments import (
    DEFAULT_SEED,
    LAMBDA_RAND_DEFAULT,
    ExperimentConfig,
    SCHED_SWEEP,
    SKI_SWEEP,
    TrialReport,
    run_scheduling_sweep,
    run_ski_sweep,
    run_tradeoff_curve,
)
from .scheduling import JobSet, prediction_error, prr, round_robin, sjf_opt, spjf
from .ski_rental import (
    PolicyKind,
    SkiInstance,
    SkiPolicy,
    deterministic_buy_day,
    naive_buy_day,
    randomized_distribution,
    randomized_expected_cost,
    sample_buy_day,
    simulate_buy_day,
    ski_opt,
)
from .verification import run_all_checks

EXIT_OK = 0
EXIT_IO = 1
EXIT_USAGE = 2
EXIT_VIOLATION = 3

SWEEP_HEADER = "experiment,algorithm,lambda,sigma,trials,mean_ratio,mean_eta,max_ratio"
CURVE_HEADER = "lambda,det_robustness,det_consistency,rand_robustness,rand_consistency"
FAMILY_HEADER = "family,points,violations,worst_excess,tolerance,status"


class UsageError(ValueError):
    """Bad flags or config; argparse converts it to an exit-2 as well."""


def _fmt_ratio(v: float) -> str:
    return f"{v:.6f}"


def _fmt_cost(v: float) -> str:
    return f"{v:.4f}"


def _parse_sigma_grid(text: str) -> List[float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"sigma grid must be start:stop:step, got {text!r}")
    try:
        start, stop, step = (float(p) for p in parts)
    except ValueError:
        raise UsageError(f"sigma grid must be numeric start:stop:step, got {text!r}")
    if step <= 0 or stop < start:
        raise UsageError("sigma grid needs step > 0 and stop >= start")
    grid = []
    i = 0
    while True:
        v = start + i * step
        if v > stop + 1e-9 * max(1.0, step):
            break
        grid.append(v)
        i += 1
    return grid


def _read_config_file(path: str) -> Dict[str, str]:
    values = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, _, value = line.partition("=")
            values[key.strip()] = value.strip()
    return values


def _merge_config(args: argparse.Namespace, schema: Dict[str, tuple]) -> Dict:
    """Resolve option values with precedence: built-in default < file < flag."""
    file_values = {}
    if getattr(args, "config", None):
        file_values = _read_config_file(args.config)
        unknown = set(file_values) - set(schema)
        if unknown:
            raise UsageError(f"unknown config key(s): {', '.join(sorted(unknown))}")
    resolved = {}
    for key, (convert, default) in schema.items():
        flag_value = getattr(args, key, None)
        if flag_value is not None:
            resolved[key] = flag_value
        elif key in file_values:
            try:
                resolved[key] = convert(file_values[key])
            except UsageError:
                raise
            except ValueError:
                raise UsageError(f"config key {key}: cannot parse {file_values[key]!r}")
        else:
            resolved[key] = default
    return resolved


def _parse_bool(text: str) -> bool:
    lowered = text.lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise UsageError(f"expected a boolean, got {text!r}")


def _parse_format(text: str) -> str:
    if text not in ("csv", "json"):
        raise UsageError(f"format must be csv or json, got {text!r}")
    return text


def _write_output(text: str, out: Optional[str]) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _sweep_rows(reports: List[TrialReport]) -> List[Dict]:
    rows = []
    for r in reports:
        rows.append(
            {
                "experiment": r.experiment,
                "algorithm": r.algorithm,
                "lambda": None if r.lam is None else round(r.lam, 6),
                "sigma": round(r.sigma, 4),
                "trials": r.count,
                "mean_ratio": round(r.mean_ratio, 6),
                "mean_eta": round(r.mean_eta, 4),
                "max_ratio": round(r.max_ratio, 6),
            }
        )
    return rows


def _render_sweep(reports: List[TrialReport], fmt: str) -> str:
    rows = _sweep_rows(reports)
    if fmt == "json":
        return json.dumps(rows, indent=2) + "\n"
    lines = [SWEEP_HEADER]
    for r in reports:
        lam = "" if r.lam is None else _fmt_ratio(r.lam)
        lines.append(
            f"{r.experiment},{r.algorithm},{lam},{_fmt_cost(r.sigma)},{r.count},"
            f"{_fmt_ratio(r.mean_ratio)},{_fmt_cost(r.mean_eta)},{_fmt_ratio(r.max_ratio)}"
        )
    return "\n".join(lines) + "\n"


def cmd_ski_sweep(args: argparse.Namespace) -> int:
    schema = {
        "b": (int, 100),
        "trials": (int, 10000),
        "sigma_grid": (_parse_sigma_grid, None),
        "lambda_det": (float, 0.5),
        "lambda_rand": (float, LAMBDA_RAND_DEFAULT),
        "seed": (int, DEFAULT_SEED),
        "jobs": (int, 1),
        "format": (_parse_format, "csv"),
        "out": (str, "-"),
        "sampled": (_parse_bool, False),
    }
    opts = _merge_config(args, schema)
    config = ExperimentConfig(
        experiment=SKI_SWEEP,
        b=opts["b"],
        trials=opts["trials"],
        lambda_det=opts["lambda_det"],
        lambda_rand=opts["lambda_rand"],
        sigma_grid=tuple(opts["sigma_grid"]) if opts["sigma_grid"] else (),
        master_seed=opts["seed"],
        exact_expectation=not opts["sampled"],
        workers=opts["jobs"],
    )
    reports = run_ski_sweep(config)
    _write_output(_render_sweep(reports, opts["format"]), opts["out"])
    return EXIT_OK


def cmd_sched_sweep(args: argparse.Namespace) -> int:
    schema = {
        "n": (int, 50),
        "alpha": (float, 1.1),
        "trials": (int, 1000),
        "sigma_grid": (_parse_sigma_grid, None),
        "lambda_sched": (float, 0.5),
        "seed": (int, DEFAULT_SEED),
        "jobs": (int, 1),
        "format": (_parse_format, "csv"),
        "out": (str, "-"),
        "fixed_jobs": (_parse_bool, False),
    }
    opts = _merge_config(args, schema)
    config = ExperimentConfig(
        experiment=SCHED_SWEEP,
        n=opts["n"],
        alpha=opts["alpha"],
        trials=opts["trials"],
        lambda_sched=opts["lambda_sched"],
        sigma_grid=tuple(opts["sigma_grid"]) if opts["sigma_grid"] else (),
        master_seed=opts["seed"],
        regenerate_jobs=not opts["fixed_jobs"],
        workers=opts["jobs"],
    )
    reports = run_scheduling_sweep(config)
    _write_output(_render_sweep(reports, opts["format"]), opts["out"])
    return EXIT_OK


def cmd_verify_bounds(args: argparse.Namespace) -> int:
    results = run_all_checks(args.grid_density, args.seed)
    lines = []
    width = max(len(r.family) for r in results)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        lines.append(
            f"{r.family:<{width}}  points={r.points:<9} violations={r.violations:<6} "
            f"worst_excess={r.worst_excess:+.6e}  tol={r.tolerance:.1e}  {status}"
        )
    total_violations = sum(r.violations for r in results)
    overall = "PASS" if total_violations == 0 else "FAIL"
    lines.append(
        f"OVERALL: {overall} ({len(results)} families, {total_violations} violations)"
    )
    sys.stdout.write("\n".join(lines) + "\n")

    if args.out:
        rows = [FAMILY_HEADER]
        for r in results:
            rows.append(
                f"{r.family},{r.points},{r.violations},{r.worst_excess:.6e},"
                f"{r.tolerance:.1e},{'PASS' if r.passed else 'FAIL'}"
            )
        _write_output("\n".join(rows) + "\n", args.out)
    if args.curve_out:
        lambdas = [round(0.02 * i, 10) for i in range(1, 51)]
        points = run_tradeoff_curve(args.b, [l for l in lambdas if l > 1.0 / args.b])
        rows = [CURVE_HEADER]
        for p in points:
            rows.append(
                f"{_fmt_ratio(p.lam)},{_fmt_ratio(p.det_robustness)},"
                f"{_fmt_ratio(p.det_consistency)},{_fmt_ratio(p.rand_robustness)},"
                f"{_fmt_ratio(p.rand_consistency)}"
            )
        _write_output("\n".join(rows) + "\n", args.curve_out)
    return EXIT_OK if total_violations == 0 else EXIT_VIOLATION


_TRACE_SKI_ALGOS = {
    "naive": PolicyKind.NAIVE,
    "break-even": PolicyKind.BREAK_EVEN,
    "karlin": PolicyKind.KARLIN,
    "deterministic": PolicyKind.DETERMINISTIC,
    "det": PolicyKind.DETERMINISTIC,
    "randomized": PolicyKind.RANDOMIZED,
    "rand": PolicyKind.RANDOMIZED,
}


def cmd_trace_ski(args: argparse.Namespace) -> int:
    kind = _TRACE_SKI_ALGOS[args.algo]
    needs_lambda = kind in (PolicyKind.DETERMINISTIC, PolicyKind.RANDOMIZED)
    if needs_lambda and args.lam is None:
        raise UsageError(f"algorithm {args.algo!r} requires --lambda")
    instance = SkiInstance(args.b, args.x, args.y)
    policy = SkiPolicy(kind, args.lam if needs_lambda else None)
    opt = ski_opt(instance)
    eta = instance.error

    info: Dict[str, object] = {
        "algorithm": args.algo,
        "b": args.b,
        "x": args.x,
        "y": args.y,
        "branch": "y >= b" if instance.y >= instance.b else "y < b",
        "opt": opt,
        "eta": round(eta, 4),
    }
    if kind is PolicyKind.NAIVE:
        day = naive_buy_day(instance)
        cost = float(simulate_buy_day(instance, day))
        info["buy_day"] = day if day is not None else "never"
        info["guarantee"] = round(opt + eta, 4)
    elif kind in (PolicyKind.BREAK_EVEN, PolicyKind.DETERMINISTIC):
        lam = policy.effective_lambda()
        day = deterministic_buy_day(instance, lam)
        cost = float(simulate_buy_day(instance, day))
        info["lambda"] = round(lam, 6)
        info["buy_day"] = day
        bound = (
            bounds.det_robustness(lam)
            if lam == 1.0
            else bounds.det_ski_bound(args.b, lam, eta, opt)
        )
        info["bound"] = round(bound, 6)
    else:
        lam = policy.effective_lambda()
        dist = randomized_distribution(instance, lam)
        cost = randomized_expected_cost(instance, lam)
        rng = np.random.default_rng(np.random.SeedSequence(args.seed))
        info["lambda"] = round(lam, 6)
        info["support_size"] = dist.support_size
        info["sampled_buy_day"] = sample_buy_day(dist, rng)
        info["bound"] = round(bounds.rand_ski_bound(args.b, lam, eta, opt), 6)
    info["cost"] = round(cost, 4)
    info["ratio"] = round(cost / opt, 6)

    if args.format == "json":
        sys.stdout.write(json.dumps(info, indent=2) + "\n")
    else:
        order = [
            "algorithm", "lambda", "b", "x", "y", "branch", "buy_day", "support_size",
            "sampled_buy_day", "cost", "opt", "ratio", "eta", "bound", "guarantee",
        ]
        lines = [f"{k}: {info[k]}" for k in order if k in info]
        sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK


def _parse_job_spec(text: str) -> JobSet:
    pairs = []
    for chunk in text.split(","):
        parts = chunk.split(":")
        if len(parts) != 2:
            raise UsageError(f"jobs must be 'x:y,x:y,...', got chunk {chunk!r}")
        try:
            x, y = float(parts[0]), float(parts[1])
        except ValueError:
            raise UsageError(f"jobs must contain numbers, got chunk {chunk!r}")
        pairs.append((x, y))
    if not pairs:
        raise UsageError("at least one job is required")
    try:
        return JobSet.from_lengths([p[0] for p in pairs], [p[1] for p in pairs])
    except ValueError as exc:
        raise UsageError(str(exc))


def cmd_trace_sched(args: argparse.Namespace) -> int:
    jobs = _parse_job_spec(args.jobs)
    if args.algo == "prr":
        if args.lam is None:
            raise UsageError("algorithm 'prr' requires --lambda")
        result = prr(jobs, args.lam)
    elif args.algo == "rr":
        result = round_robin(jobs)
    elif args.algo == "spjf":
        result = spjf(jobs)
    else:
        result = sjf_opt(jobs)
    opt = sjf_opt(jobs).objective
    eta = prediction_error(jobs)

    if args.format == "json":
        info = {
            "algorithm": args.algo,
            "lambda": None if args.algo != "prr" else round(args.lam, 6),
            "completions": {
                str(j.id): round(result.completions[j.id], 4) for j in jobs.jobs
            },
            "objective": round(result.objective, 4),
            "opt": round(opt, 4),
            "ratio": round(result.objective / opt, 6),
            "eta": round(eta, 4),
        }
        sys.stdout.write(json.dumps(info, indent=2) + "\n")
        return EXIT_OK

    lines = [f"algorithm: {args.algo}"]
    if args.algo == "prr":
        lines.append(f"lambda: {_fmt_ratio(args.lam)}")
    lines.append("events:")
    for t, ids in result.events:
        done = " ".join(f"job {i}" for i in ids)
        lines.append(f"  t={_fmt_cost(t)}  complete {done}")
    completions = ", ".join(_fmt_cost(result.completions[j.id]) for j in jobs.jobs)
    lines.append(f"completions: {completions}")
    lines.append(f"objective: {_fmt_cost(result.objective)}")
    lines.append(f"opt: {_fmt_cost(opt)}")
    lines.append(f"ratio: {_fmt_ratio(result.objective / opt)}")
    lines.append(f"eta: {_fmt_cost(eta)}")
    sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="onlinepred",
        description="Benchmarks for rent-or-buy and scheduling rules that use predictions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    ski = sub.add_parser("ski-sweep", help="mean competitive ratio vs noise, rent-or-buy")
    ski.add_argument("--b", type=int, default=None, help="buy cost (default 100)")
    ski.add_argument("--trials", type=int, default=None, help="trials per grid point (default 10000)")
    ski.add_argument("--sigma-grid", dest="sigma_grid", type=_parse_sigma_grid, default=None,
                     help="noise grid start:stop:step (default 0:4b:b/10)")
    ski.add_argument("--lambda-det", dest="lambda_det", type=float, default=None,
                     help="lambda of the deterministic rule (default 0.5)")
    ski.add_argument("--lambda-rand", dest="lambda_rand", type=float, default=None,
                     help="lambda of the randomized rule (default ln(3/2))")
    ski.add_argument("--sampled", dest="sampled", action="store_const", const=True, default=None,
                     help="score randomized rules by one sampled buy day instead of exact expectation")
    ski.set_defaults(func=cmd_ski_sweep)

    sched = sub.add_parser("sched-sweep", help="mean competitive ratio vs noise, scheduling")
    sched.add_argument("--n", type=int, default=None, help="jobs per set (default 50)")
    sched.add_argument("--alpha", type=float, default=None, help="Pareto exponent (default 1.1)")
    sched.add_argument("--trials", type=int, default=None, help="trials per grid point (default 1000)")
    sched.add_argument("--sigma-grid", dest="sigma_grid", type=_parse_sigma_grid, default=None,
                       help="noise grid start:stop:step (default 0:220:22)")
    sched.add_argument("--lambda", dest="lambda_sched", type=float, default=None,
                       help="preferential round-robin lambda (default 0.5)")
    sched.add_argument("--fixed-jobs", dest="fixed_jobs", action="store_const", const=True,
                       default=None, help="draw one job set and only resample noise per trial")
    sched.set_defaults(func=cmd_sched_sweep)

    for p in (ski, sched):
        p.add_argument("--seed", type=int, default=None,
                       help=f"master seed (default {DEFAULT_SEED})")
        p.add_argument("--jobs", type=int, default=None, help="worker processes (default 1)")
        p.add_argument("--format", choices=("csv", "json"), default=None,
                       help="output format (default csv)")
        p.add_argument("--out", default=None, help="output path, '-' for stdout (default)")
        p.add_argument("--config", default=None,
                       help="key=value config file; flags override file values")

    verify = sub.add_parser("verify-bounds", help="grid-check every proven guarantee")
    verify.add_argument("--grid-density", choices=("tiny", "default", "dense"),
                        default="default", help="grid size preset (default 'default')")
    verify.add_argument("--seed", type=int, default=DEFAULT_SEED,
                        help=f"seed for the random job-set grids (default {DEFAULT_SEED})")
    verify.add_argument("--b", type=int, default=100,
                        help="buy cost for the trade-off curve (default 100)")
    verify.add_argument("--out", default=None, help="write the family report as CSV")
    verify.add_argument("--curve-out", dest="curve_out", default=None,
                        help="write the robustness/consistency curve as CSV")
    verify.set_defaults(func=cmd_verify_bounds)

    trace = sub.add_parser("trace", help="inspect a single instance")
    trace_sub = trace.add_subparsers(dest="trace_kind", required=True)

    tski = trace_sub.add_parser("ski", help="trace one rent-or-buy instance")
    tski.add_argument("--b", type=int, required=True)
    tski.add_argument("--x", type=int, required=True)
    tski.add_argument("--y", type=float, required=True)
    tski.add_argument("--algo", choices=sorted(_TRACE_SKI_ALGOS), required=True)
    tski.add_argument("--lambda", dest="lam", type=float, default=None)
    tski.add_argument("--seed", type=int, default=DEFAULT_SEED)
    tski.add_argument("--format", choices=("text", "json"), default="text")
    tski.set_defaults(func=cmd_trace_ski)

    tsched = trace_sub.add_parser("sched", help="trace one job set")
    tsched.add_argument("--jobs", required=True, help="job list 'x:y,x:y,...'")
    tsched.add_argument("--algo", choices=("rr", "spjf", "prr", "sjf"), required=True)
    tsched.add_argument("--lambda", dest="lam", type=float, default=None)
    tsched.add_argument("--format", choices=("text", "json"), default="text")
    tsched.set_defaults(func=cmd_trace_sched)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
