"""Experiment driver: strategy/evaluator loops, logs, and analyses.

A run executes trials sequentially (suggest -> constraint check -> evaluate
-> score -> observe) and produces a JSONL trial log plus a JSON summary.
Canonical logs zero out wall_time so identical configurations yield
byte-identical files; measured timings live in the summary.
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Optional, Sequence

from . import costs, metrics
from .errors import (ConfigError, EmptyRun, InsufficientData, MfnasError,
                     RefusedExpensiveOracle, RunFailure)
from .evaluators import (DEFAULT_SURROGATE, ExternalSession, SurrogateEvaluator,
                         SurrogateSpec, TableEvaluator)
from .space import (PAPER_SPACE, Genotype, SpaceSpec, encode, enumerate_space,
                    genotype_to_string)
from .strategies import STRATEGIES, make_strategy


@dataclass(frozen=True)
class RunConfig:
    strategy: str = "random"
    trials: int = 50
    alpha: float = 1.0
    seed: int = 0
    evaluator: str = "surrogate"            # surrogate | table | external
    surrogate: SurrogateSpec = DEFAULT_SURROGATE
    table_path: Optional[str] = None
    eval_command: Optional[str] = None
    eval_timeout: float = 60.0
    space: SpaceSpec = PAPER_SPACE
    max_params: Optional[int] = None
    strategy_params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.alpha < 0:
            raise ConfigError("alpha must be non-negative")
        if self.strategy not in STRATEGIES:
            raise ConfigError(f"unknown strategy {self.strategy!r}")
        if self.evaluator not in ("surrogate", "table", "external"):
            raise ConfigError(f"unknown evaluator {self.evaluator!r}")
        if self.evaluator == "table" and not self.table_path:
            raise ConfigError("table evaluator requires table_path")
        if self.evaluator == "external" and not self.eval_command:
            raise ConfigError("external evaluator requires eval_command")


@dataclass(frozen=True)
class TrialRecord:
    trial: int                      # 1-based
    genotype: Genotype
    arch_id: int
    params: int
    macs: int
    accuracy: Optional[float]       # None when the cost constraint rejected the trial
    s_prime: float
    m_value: float
    best_so_far: float
    wall_time: float


@dataclass
class RunSummary:
    config: RunConfig
    p_min: int
    best: TrialRecord
    top_quintile: list[TrialRecord]
    trial_log: list[TrialRecord]
    total_wall_time: float


def make_evaluator(cfg: RunConfig):
    if cfg.evaluator == "surrogate":
        return SurrogateEvaluator(cfg.surrogate)
    if cfg.evaluator == "table":
        return TableEvaluator.from_csv(cfg.table_path, cfg.space)
    return ExternalSession(cfg.eval_command, cfg.space, timeout=cfg.eval_timeout)


def run_experiment(cfg: RunConfig) -> RunSummary:
    """Run one seeded search; identical cfg implies byte-identical trial logs."""
    strategy = make_strategy(cfg.strategy, cfg.seed, cfg.space, **cfg.strategy_params)
    evaluator = make_evaluator(cfg)
    space_min = costs.p_min(cfg.space)
    log: list[TrialRecord] = []
    best_m = -math.inf
    t_start = time.monotonic()
    try:
        for trial in range(1, cfg.trials + 1):
            genotype = strategy.suggest()
            cost = costs.model_cost(genotype, cfg.space)
            s = metrics.s_prime(cost.params, space_min)
            if cfg.max_params is not None and cost.params > cfg.max_params:
                accuracy: Optional[float] = None
                m_value = 0.0
                wall = 0.0
            else:
                try:
                    evaluation = evaluator.evaluate(genotype)
                except MfnasError as exc:
                    raise RunFailure(trial, log, exc) from exc
                accuracy = evaluation.accuracy
                wall = evaluation.wall_time
                m_value = metrics.m_alpha(accuracy, s, cfg.alpha)
            best_m = max(best_m, m_value)
            log.append(TrialRecord(trial=trial, genotype=genotype,
                                   arch_id=encode(genotype, cfg.space),
                                   params=cost.params, macs=cost.macs,
                                   accuracy=accuracy, s_prime=s, m_value=m_value,
                                   best_so_far=best_m, wall_time=wall))
            strategy.observe(genotype, m_value)
    finally:
        evaluator.close()
    best = min(log, key=lambda r: (-r.m_value, r.trial))
    return RunSummary(config=cfg, p_min=space_min, best=best,
                      top_quintile=select_top_quintile(log),
                      trial_log=log, total_wall_time=time.monotonic() - t_start)


def select_top_quintile(log: Sequence[TrialRecord]) -> list[TrialRecord]:
    """Best ceil(0.2*n) records by m_value; ties keep the earlier trial."""
    if not log:
        raise EmptyRun("empty trial log")
    k = math.ceil(0.2 * len(log))
    return sorted(log, key=lambda r: (-r.m_value, r.trial))[:k]


def best_so_far_curve(log: Sequence[TrialRecord]) -> list[tuple[int, float]]:
    """Running maximum of m_value, one point per trial."""
    if not log:
        raise EmptyRun("empty trial log")
    curve = []
    best = -math.inf
    for record in log:
        best = max(best, record.m_value)
        curve.append((record.trial, best))
    return curve


def top_quintile_analysis(log: Sequence[TrialRecord]) -> dict:
    """Top-20% records plus accuracy/size spread statistics."""
    if len(log) < 5:
        raise InsufficientData(f"need >= 5 trials, got {len(log)}")
    selected = select_top_quintile(log)
    accuracies = [r.accuracy for r in selected if r.accuracy is not None]
    params = [r.params for r in selected]

    def stats(values):
        if not values:
            return {"mean": None, "min": None, "max": None}
        return {"mean": sum(values) / len(values), "min": min(values), "max": max(values)}

    return {"records": selected, "accuracy": stats(accuracies), "params": stats(params)}


def compare_strategies(cfgs: Sequence[RunConfig], seeds: Sequence[int],
                       jobs: int = 1) -> list[dict]:
    """One row per configuration: best run over the given seeds plus the
    per-seed best-m distribution and its median. Failures are recorded
    per cell without aborting the other cells."""
    if not cfgs:
        raise ConfigError("need at least one configuration")
    seeds = list(seeds) or [0]

    def run_cell(cfg: RunConfig, seed: int):
        return run_experiment(replace(cfg, seed=seed))

    rows = []
    with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
        for cfg in cfgs:
            futures = [pool.submit(run_cell, cfg, seed) for seed in seeds]
            per_seed: dict[int, float] = {}
            errors: dict[int, str] = {}
            best_summary: Optional[RunSummary] = None
            for seed, future in zip(seeds, futures):
                try:
                    summary = future.result()
                except Exception as exc:
                    errors[seed] = str(exc)
                    continue
                per_seed[seed] = summary.best.m_value
                if best_summary is None or summary.best.m_value > best_summary.best.m_value:
                    best_summary = summary
            row = {"strategy": cfg.strategy, "per_seed": per_seed, "errors": errors}
            if per_seed:
                values = sorted(per_seed.values())
                mid = len(values) // 2
                row["median_best_m"] = (values[mid] if len(values) % 2
                                        else 0.5 * (values[mid - 1] + values[mid]))
                row["best_m"] = best_summary.best.m_value
                row["accuracy"] = best_summary.best.accuracy
                row["params"] = best_summary.best.params
            rows.append(row)
    return rows


def oracle_best(space: SpaceSpec, evaluate: Callable[[Genotype], float],
                alpha: float = 1.0) -> tuple[Genotype, float]:
    """Exact argmax of the weighted metric by full enumeration.

    `evaluate` must be a cheap accuracy function; sessions to external
    processes are refused (19,683 requests is not a desk-scale oracle).
    """
    if isinstance(evaluate, ExternalSession) or getattr(evaluate, "source", None) == "external":
        raise RefusedExpensiveOracle("oracle refuses external evaluators")
    space_min = costs.p_min(space)
    best: Optional[tuple[Genotype, float]] = None
    for genotype in enumerate_space(space):
        s = metrics.s_prime(costs.count_params(genotype, space), space_min)
        m = metrics.m_alpha(evaluate(genotype), s, alpha)
        if best is None or m > best[1]:
            best = (genotype, m)
    return best


# --- serialization -----------------------------------------------------------

_LOG_KEYS = ("trial", "arch_id", "genotype", "params", "macs", "accuracy",
             "s_prime", "m_value", "best_so_far", "wall_time")


def record_to_dict(record: TrialRecord, space: SpaceSpec = PAPER_SPACE,
                   include_timings: bool = False) -> dict:
    return {"trial": record.trial,
            "arch_id": record.arch_id,
            "genotype": genotype_to_string(record.genotype, space),
            "params": record.params,
            "macs": record.macs,
            "accuracy": record.accuracy,
            "s_prime": record.s_prime,
            "m_value": record.m_value,
            "best_so_far": record.best_so_far,
            "wall_time": record.wall_time if include_timings else 0.0}


def write_trial_log(path, log: Iterable[TrialRecord], space: SpaceSpec = PAPER_SPACE,
                    include_timings: bool = False) -> None:
    with open(path, "w") as fh:
        for record in log:
            fh.write(json.dumps(record_to_dict(record, space, include_timings)) + "\n")


def read_trial_log(path) -> list[TrialRecord]:
    log = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                d = json.loads(line)
                log.append(TrialRecord(
                    trial=d["trial"], genotype=tuple(int(c) for c in d["genotype"]),
                    arch_id=d["arch_id"], params=d["params"], macs=d["macs"],
                    accuracy=d["accuracy"], s_prime=d["s_prime"], m_value=d["m_value"],
                    best_so_far=d["best_so_far"], wall_time=d["wall_time"]))
            except (json.JSONDecodeError, KeyError, ValueError) as exc:
                raise MfnasError(f"malformed log line {lineno}: {exc}") from exc
    return log


def summary_to_dict(summary: RunSummary) -> dict:
    cfg = summary.config
    return {
        "config": {
            "strategy": cfg.strategy, "trials": cfg.trials, "alpha": cfg.alpha,
            "seed": cfg.seed, "evaluator": cfg.evaluator,
            "table_path": cfg.table_path, "eval_command": cfg.eval_command,
            "max_params": cfg.max_params, "strategy_params": cfg.strategy_params,
        },
        "p_min": summary.p_min,
        "best": record_to_dict(summary.best, cfg.space, include_timings=True),
        "top_quintile": [record_to_dict(r, cfg.space, include_timings=True)
                         for r in summary.top_quintile],
        "total_wall_time": summary.total_wall_time,
    }
