"""Command-line front end.

Subcommands: run, compare, score, cost, enumerate, oracle, report. Flags
override values from --config (a JSON file mirroring RunConfig field names);
package defaults apply last. Exit codes: 0 success, 1 evaluator/run failure,
2 configuration error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import replace
from pathlib import Path

from . import costs, metrics
from .errors import ConfigError, InvalidArchId, InvalidGenotype, MfnasError, RunFailure
from .evaluators import DEFAULT_SURROGATE, SurrogateEvaluator, SurrogateSpec, TableEvaluator
from .harness import (RunConfig, best_so_far_curve, compare_strategies, oracle_best,
                      read_trial_log, run_experiment, select_top_quintile,
                      summary_to_dict, write_trial_log)
from .space import (PAPER_SPACE, encode, enumerate_space, genotype_from_string,
                    genotype_to_string)
from .strategies import STRATEGIES


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mfnas",
                                     description="Accuracy/size trade-off architecture search")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_run_flags(p):
        p.add_argument("--config", type=Path, help="JSON config file (flags override)")
        p.add_argument("--strategy", choices=sorted(STRATEGIES))
        p.add_argument("--trials", type=int)
        p.add_argument("--seed", type=int)
        p.add_argument("--alpha", type=float)
        p.add_argument("--evaluator", choices=["surrogate", "table", "external"])
        p.add_argument("--table", type=Path, help="accuracy table CSV (table evaluator)")
        p.add_argument("--eval-cmd", help="external evaluator command line")
        p.add_argument("--max-params", type=int, help="cost constraint threshold")

    run = sub.add_parser("run", help="run one seeded search")
    add_run_flags(run)
    run.add_argument("--out", type=Path, default=Path("out"), help="output directory")
    run.add_argument("--timings", action="store_true",
                     help="keep measured wall times in the JSONL log (breaks byte-stability)")

    comp = sub.add_parser("compare", help="run several strategies over several seeds")
    add_run_flags(comp)
    comp.add_argument("--strategies", help="comma-separated list (default: all four)")
    comp.add_argument("--seeds", help="comma-separated seed list")
    comp.add_argument("--jobs", type=int, default=1)
    comp.add_argument("--out", type=Path, help="write the comparison table as JSON")

    score = sub.add_parser("score", help="compute S', M_alpha (and optionally NetScore)")
    score.add_argument("--accuracy", type=float, required=True)
    group = score.add_mutually_exclusive_group(required=True)
    group.add_argument("--genotype", help="9-digit base-3 string")
    group.add_argument("--params", type=int)
    score.add_argument("--alpha", type=float, default=1.0)
    score.add_argument("--p-min", type=int, help="override the space minimum")
    score.add_argument("--netscore", action="store_true")

    cost = sub.add_parser("cost", help="parameter and MAC counts for a genotype")
    cost.add_argument("genotype", help="9-digit base-3 string")

    enum = sub.add_parser("enumerate", help="space size, optionally streaming all costs")
    enum.add_argument("--stream", action="store_true", help="print arch_id,params rows")

    oracle = sub.add_parser("oracle", help="brute-force optimum for a cheap evaluator")
    oracle.add_argument("--alpha", type=float, default=1.0)
    oracle.add_argument("--evaluator", choices=["surrogate", "table"], default="surrogate")
    oracle.add_argument("--table", type=Path)

    report = sub.add_parser("report", help="derive CSV/SVG reports from a JSONL trial log")
    report.add_argument("log", type=Path)
    report.add_argument("--out", type=Path, default=Path("report"))
    report.add_argument("--svg", action="store_true", help="also write best_so_far.svg")

    return parser


def _default_seed() -> int:
    env = os.environ.get("MFNAS_SEED")
    return int(env) if env else 0


def config_from_args(args) -> RunConfig:
    values: dict = {}
    if args.config:
        try:
            values.update(json.loads(Path(args.config).read_text()))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
    overrides = {"strategy": args.strategy, "trials": args.trials, "seed": args.seed,
                 "alpha": args.alpha, "evaluator": args.evaluator,
                 "table_path": str(args.table) if args.table else None,
                 "eval_command": getattr(args, "eval_cmd", None),
                 "max_params": args.max_params}
    values.update({k: v for k, v in overrides.items() if v is not None})
    values.setdefault("seed", _default_seed())
    surrogate = values.pop("surrogate", None)
    if surrogate is not None:
        surrogate = SurrogateSpec(target=tuple(surrogate.get("target", DEFAULT_SURROGATE.target)),
                                  base=surrogate.get("base", DEFAULT_SURROGATE.base),
                                  step=surrogate.get("step", DEFAULT_SURROGATE.step),
                                  noise_amplitude=surrogate.get("noise_amplitude", 0.0),
                                  noise_seed=surrogate.get("noise_seed", 0))
        values["surrogate"] = surrogate
    try:
        return RunConfig(**values)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


def cmd_run(args) -> int:
    cfg = config_from_args(args)
    try:
        summary = run_experiment(cfg)
    except RunFailure as exc:
        print(f"evaluator failure at trial {exc.trial}: {exc.cause}", file=sys.stderr)
        args.out.mkdir(parents=True, exist_ok=True)
        write_trial_log(args.out / "trials.jsonl", exc.partial_log, cfg.space)
        return 1
    args.out.mkdir(parents=True, exist_ok=True)
    write_trial_log(args.out / "trials.jsonl", summary.trial_log, cfg.space,
                    include_timings=args.timings)
    (args.out / "summary.json").write_text(json.dumps(summary_to_dict(summary), indent=2) + "\n")
    best = summary.best
    print(f"best: trial={best.trial} genotype={genotype_to_string(best.genotype, cfg.space)} "
          f"m={best.m_value:.6f} accuracy={best.accuracy} params={best.params}")
    return 0


def cmd_compare(args) -> int:
    base = config_from_args(args)
    names = (args.strategies.split(",") if args.strategies else sorted(STRATEGIES))
    seeds = [int(s) for s in args.seeds.split(",")] if args.seeds else [base.seed]
    cfgs = [replace(base, strategy=name.strip()) for name in names]
    rows = compare_strategies(cfgs, seeds, jobs=args.jobs)
    header = f"{'strategy':<12} {'median M':>10} {'best M':>10} {'accuracy':>10} {'params':>10}"
    print(header)
    for row in rows:
        if "best_m" in row:
            print(f"{row['strategy']:<12} {row['median_best_m']:>10.4f} {row['best_m']:>10.4f} "
                  f"{row['accuracy']:>10.4f} {row['params']:>10}")
        else:
            print(f"{row['strategy']:<12} all seeds failed: {row['errors']}")
    if args.out:
        args.out.parent.mkdir(parents=True, exist_ok=True)
        args.out.write_text(json.dumps(rows, indent=2) + "\n")
    return 0


def cmd_score(args) -> int:
    if args.genotype is not None:
        genotype = genotype_from_string(args.genotype)
        params = costs.count_params(genotype)
        macs = costs.count_macs(genotype)
    else:
        params = args.params
        macs = None
    space_min = args.p_min if args.p_min is not None else costs.p_min(PAPER_SPACE)
    s = metrics.s_prime(params, space_min)
    m = metrics.m_alpha(args.accuracy, s, args.alpha)
    print(f"s_prime = {s!r}")
    print(f"m_alpha = {m!r}  (alpha = {args.alpha!r})")
    if args.netscore:
        if macs is None:
            raise ConfigError("--netscore needs --genotype (MAC count required)")
        print(f"netscore = {metrics.netscore(args.accuracy, params, macs)!r}")
    return 0


def cmd_cost(args) -> int:
    genotype = genotype_from_string(args.genotype)
    cost = costs.model_cost(genotype)
    print(f"params = {cost.params}")
    print(f"macs = {cost.macs}")
    return 0


def cmd_enumerate(args) -> int:
    print(PAPER_SPACE.num_configurations)
    if args.stream:
        for genotype in enumerate_space(PAPER_SPACE):
            print(f"{encode(genotype)},{costs.count_params(genotype)}")
    return 0


def cmd_oracle(args) -> int:
    if args.evaluator == "table":
        if not args.table:
            raise ConfigError("table oracle requires --table")
        evaluator = TableEvaluator.from_csv(args.table)
        accuracy_of = lambda g: evaluator.evaluate(g).accuracy
    else:
        accuracy_of = lambda g, _s=SurrogateEvaluator(): _s.evaluate(g).accuracy
    genotype, m = oracle_best(PAPER_SPACE, accuracy_of, args.alpha)
    print(f"genotype = {genotype_to_string(genotype)}")
    print(f"arch_id = {encode(genotype)}")
    print(f"m_alpha = {m!r}")
    return 0


def cmd_report(args) -> int:
    try:
        log = read_trial_log(args.log)
    except MfnasError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    args.out.mkdir(parents=True, exist_ok=True)
    with open(args.out / "best_so_far.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["trial", "best_m"])
        for trial, best in best_so_far_curve(log):
            writer.writerow([trial, repr(best)])
    with open(args.out / "trials.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["trial", "accuracy", "params", "m_value"])
        for r in log:
            writer.writerow([r.trial, "" if r.accuracy is None else repr(r.accuracy),
                             r.params, repr(r.m_value)])
    with open(args.out / "top20.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["trial", "genotype", "accuracy", "params", "m_value"])
        for r in select_top_quintile(log):
            writer.writerow([r.trial, genotype_to_string(r.genotype),
                             "" if r.accuracy is None else repr(r.accuracy),
                             r.params, repr(r.m_value)])
    if args.svg:
        _write_svg(args.out / "best_so_far.svg", best_so_far_curve(log))
    return 0


def _write_svg(path, curve, width=640, height=360, margin=40) -> None:
    """Minimal polyline chart of the best-so-far curve."""
    xs = [t for t, _ in curve]
    ys = [m for _, m in curve]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    xspan = (x1 - x0) or 1
    yspan = (y1 - y0) or 1
    points = " ".join(
        f"{margin + (x - x0) / xspan * (width - 2 * margin):.1f},"
        f"{height - margin - (y - y0) / yspan * (height - 2 * margin):.1f}"
        for x, y in curve)
    svg = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">'
           f'<rect width="100%" height="100%" fill="white"/>'
           f'<polyline points="{points}" fill="none" stroke="black" stroke-width="1.5"/>'
           f'<text x="{width // 2}" y="{height - 8}" text-anchor="middle" '
           f'font-size="12">trial</text>'
           f'<text x="12" y="{height // 2}" font-size="12" transform="rotate(-90 12 '
           f'{height // 2})" text-anchor="middle">best M</text></svg>\n')
    Path(path).write_text(svg)


_COMMANDS = {"run": cmd_run, "compare": cmd_compare, "score": cmd_score, "cost": cmd_cost,
             "enumerate": cmd_enumerate, "oracle": cmd_oracle, "report": cmd_report}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ConfigError, InvalidGenotype, InvalidArchId) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except MfnasError as exc:
        print(str(exc), file=sys.stderr)
        return 1


def entrypoint() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entrypoint()
