"""Command-line interface: ``evaluate``, ``optimize``, ``sensitivity``, ``simulate``."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from .config import DEFAULT_SWEEP, RunConfig, SensitivitySpec, load_config
from .economics import (
    LITERAL,
    NO_IN_CONTROL_COST,
    CostModelVariant,
    cost_breakdown,
)
from .oracles import SimulationPlan, simulate_run_length
from .problem import ArlConstraints, evaluate
from .report import (
    front_csv,
    front_json,
    metadata,
    percentile_summary,
    plot_csv,
    run_optimize,
    run_sensitivity,
    sensitivity_csv,
    summary_csv,
)
from .run_length import BOUNDARY_CORRECTION, ChartDesign, arl_profile, two_sided_arl

__all__ = ["build_parser", "main"]


def _apply_overrides(cfg: RunConfig, args) -> RunConfig:
    if args.seed is not None:
        cfg = replace(cfg, moea=replace(cfg.moea, rng_seed=args.seed))
    if args.variant is not None:
        cfg = replace(cfg, variant=CostModelVariant.from_name(args.variant))
    if args.constraints is not None:
        cfg = replace(cfg, constraints=ArlConstraints(cfg.constraints.arl_lower_bound,
                                                      cfg.constraints.arl_upper_bound,
                                                      args.constraints))
    fmt = args.format or cfg.output.format
    out = args.out if args.out is not None else cfg.output.path
    return replace(cfg, output=replace(cfg.output, format=fmt, path=out))


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _sibling(path: str, suffix: str) -> str:
    p = Path(path)
    return str(p.with_name(f"{p.stem}.{suffix}{p.suffix or '.csv'}"))


def cmd_evaluate(cfg: RunConfig, args) -> int:
    try:
        design = ChartDesign.for_shift(args.n, args.h, args.H, cfg.process.delta)
        if not cfg.space.contains(design):
            raise ValueError("outside the design space")
    except ValueError as exc:
        print(f"error: design (n={args.n}, h={args.h}, H={args.H}) rejected: {exc}; space is "
              f"n in {list(cfg.space.n_range)}, h in {list(cfg.space.h_range)}, "
              f"H in {list(cfg.space.H_range)}", file=sys.stderr)
        return 2
    rl = arl_profile(cfg.process.delta, design.decision_interval)
    ev = evaluate(design, cfg.process, cfg.costs, cfg.constraints, cfg.variant, cfg.space)
    report = {
        "n": design.n, "h": design.h, "H": design.decision_interval,
        "K": design.reference_value, "b": design.decision_interval + BOUNDARY_CORRECTION,
        "ARL_0": rl.arl0, "ARL_delta": rl.arl_delta,
        "constraint_policy": cfg.constraints.policy.value,
        "violation": ev.violation, "feasible": ev.feasible,
        "active_variant": cfg.variant.name,
    }
    for variant in (LITERAL, NO_IN_CONTROL_COST):
        terms = cost_breakdown(design, cfg.process, cfg.costs, rl, variant)
        report.setdefault("tau", terms.tau)
        report.setdefault("S", terms.s)
        prefix = variant.name.replace("-", "_")
        report[f"{prefix}.in_control_cost"] = terms.in_control_cost
        report[f"{prefix}.out_of_control_cost"] = terms.out_of_control_cost
        report[f"{prefix}.false_alarm_cost"] = terms.false_alarm_cost
        report[f"{prefix}.repair_cost"] = terms.repair_cost
        report[f"{prefix}.sampling_cost"] = terms.sampling_cost
        report[f"{prefix}.cycle_length"] = terms.cycle_length
        report[f"{prefix}.C_E"] = terms.total

    if cfg.output.format == "json":
        text = json.dumps({"metadata": metadata(cfg), "evaluation": report}, indent=2) + "\n"
    else:
        width = max(len(k) for k in report)
        text = "".join(f"{k:<{width}}  {v}\n" for k, v in report.items())
    _emit(text, cfg.output.path)
    return 0


def cmd_optimize(cfg: RunConfig, args) -> int:
    front = run_optimize(cfg)
    if len(front) == 0:
        print("error: optimizer returned an empty front", file=sys.stderr)
        return 1
    meta = metadata(cfg)
    out = cfg.output.path
    if cfg.output.format == "json":
        _emit(front_json(front, cfg), out)
    else:
        _emit(front_csv(front, meta), out)
        if out is not None:
            Path(_sibling(out, "summary")).write_text(summary_csv(front, meta))
            Path(_sibling(out, "plot")).write_text(plot_csv(front, meta))
    if out is not None:
        status = "feasible" if front.feasible else "INFEASIBLE (least-violating set)"
        print(f"{len(front)} non-dominated designs, {status}; variant={cfg.variant.name}, "
              f"constraints={cfg.constraints.policy.value}, seed={cfg.moea.rng_seed}")
        print(f"{'pct':>4} {'C_E':>8} {'ARL_delta':>10} {'n':>3} {'h':>6} {'H':>6}")
        for p, row in percentile_summary(front):
            d = row.design
            print(f"{p:>4} {row.objectives[0]:>8.2f} {row.objectives[1]:>10.2f} {d.n:>3} "
                  f"{d.h:>6.2f} {d.decision_interval:>6.2f}")
    return 0 if front.feasible else 1


def cmd_sensitivity(cfg: RunConfig, args) -> int:
    try:
        specs = [SensitivitySpec.parse(s) for s in args.factor] if args.factor else list(DEFAULT_SWEEP)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    rows = run_sensitivity(cfg, specs)
    meta = metadata(cfg)
    if cfg.output.format == "json":
        doc = {"metadata": meta, "rows": [
            {"factor": r.factor, "level": r.level, "value": r.value, "endpoint": r.endpoint,
             "error": r.error,
             **({} if r.row is None else {
                 "C_E": r.row.objectives[0], "ARL_delta": r.row.objectives[1],
                 "n": r.row.design.n, "h": r.row.design.h,
                 "H": r.row.design.decision_interval})}
            for r in rows]}
        _emit(json.dumps(doc, indent=2) + "\n", cfg.output.path)
    else:
        _emit(sensitivity_csv(rows, meta), cfg.output.path)
    failed = [r for r in rows if r.error]
    for r in failed:
        print(f"error: {r.factor}={r.value}: {r.error}", file=sys.stderr)
    return 1 if failed else 0


def cmd_simulate(cfg: RunConfig, args) -> int:
    shift = cfg.process.delta if args.shift is None else args.shift
    K = cfg.process.delta / 2.0 if args.K is None else args.K
    seed = cfg.moea.rng_seed if args.seed is None else args.seed
    try:
        plan = SimulationPlan(args.replications, seed, shift, K, args.H)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    est = simulate_run_length(plan)
    approx = two_sided_arl(shift, K, args.H)
    report = {
        "shift": shift, "K": K, "H": args.H, "n": args.n, "replications": est.replications,
        "seed": seed, "mc_mean": est.mean, "mc_half_width_95": est.half_width,
        "siegmund": approx, "relative_error": (est.mean - approx) / approx,
    }
    if cfg.output.format == "json":
        text = json.dumps({"metadata": metadata(cfg), "simulation": report}, indent=2) + "\n"
    else:
        width = max(len(k) for k in report)
        text = "".join(f"{k:<{width}}  {v}\n" for k, v in report.items())
    _emit(text, cfg.output.path)
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default="example_sec5",
                        help="config file path or bundled name (default: example_sec5)")
    common.add_argument("--seed", type=int, default=None, help="override the RNG seed")
    common.add_argument("--out", default=None, help="output path (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"), default=None)
    common.add_argument("--variant", choices=("literal", "no-in-control-cost"), default=None)
    common.add_argument("--constraints", choices=("enforce", "penalty", "off"), default=None)

    parser = argparse.ArgumentParser(
        prog="cusumopt", description="Economic-statistical CUSUM chart design with NSGA-II.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("evaluate", parents=[common], help="itemize one design point")
    p.add_argument("n", type=int)
    p.add_argument("h", type=float)
    p.add_argument("H", type=float)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("optimize", parents=[common], help="compute the Pareto front")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("sensitivity", parents=[common],
                       help="one-factor-at-a-time re-optimization")
    p.add_argument("--factor", action="append", metavar="NAME:LOW:HIGH",
                   help="repeatable; default is the built-in sweep over all factors")
    p.set_defaults(func=cmd_sensitivity)

    p = sub.add_parser("simulate", parents=[common], help="Monte-Carlo ARL vs Siegmund")
    p.add_argument("--H", type=float, required=True, help="decision interval")
    p.add_argument("--K", type=float, default=None, help="reference value (default delta/2)")
    p.add_argument("--shift", type=float, default=None, help="mean shift (default delta)")
    p.add_argument("--n", type=int, default=None, help="sample size (recorded only)")
    p.add_argument("--replications", type=int, default=200_000)
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _apply_overrides(load_config(args.config), args)
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: cannot load config {args.config!r}: {exc}", file=sys.stderr)
        return 2
    return args.func(cfg, args)


if __name__ == "__main__":
    sys.exit(main())
