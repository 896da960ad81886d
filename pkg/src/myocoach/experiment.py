"""Multi-trial experiment orchestration, aggregation, and run logs.

A run writes one JSON-lines trace per trial (one record per step) and a CSV
summary per experiment. Fault-flagged trials are excluded from aggregate
statistics and counted separately; divergence is reported, not averaged in.
"""
import csv
import dataclasses
import json
import logging
import statistics
from dataclasses import dataclass, replace
from pathlib import Path

from .config import ExperimentConfig
from .rewards import RewardMode
from .trial import StepRecord, TrialResult, run_trial

logger = logging.getLogger(__name__)

ALL_MODES = (RewardMode.FIXED, RewardMode.RELATIVE, RewardMode.HUMAN,
             RewardMode.FIXED_PLUS_HUMAN)

SUMMARY_COLUMNS = ("condition", "n", "mae_all_mean", "mae_all_std",
                   "mae_10k_mean", "mae_10k_std", "mae_5k_mean", "mae_5k_std")


@dataclass(frozen=True)
class ExperimentSummary:
    condition: str
    n: int
    n_faulted: int
    mae_all_mean: float
    mae_all_std: float
    mae_10k_mean: float
    mae_10k_std: float
    mae_5k_mean: float
    mae_5k_std: float


def _mean_std(values):
    if len(values) < 2:
        return values[0], 0.0
    return statistics.fmean(values), statistics.stdev(values)


def aggregate(results) -> ExperimentSummary:
    """Mean and sample standard deviation of the MAE windows across trials."""
    results = list(results)
    if not results:
        raise ValueError("no trial results to aggregate")
    clean = [r for r in results if not r.fault]
    n_faulted = len(results) - len(clean)
    if not clean:
        raise ValueError(f"all {len(results)} trials faulted, nothing to aggregate")
    if n_faulted:
        logger.warning("excluding %d faulted trial(s) from aggregation", n_faulted)
    stats = []
    for attr in ("mae_all", "mae_last10k", "mae_last5k"):
        stats.extend(_mean_std([getattr(r, attr) for r in clean]))
    mode = clean[0].mode
    condition = mode.value if mode is not None else "unknown"
    return ExperimentSummary(condition, len(clean), n_faulted, *stats)


def trace_path(output_dir, mode: RewardMode, seed: int) -> Path:
    name = mode.value.replace("+", "_plus_")
    return Path(output_dir) / f"{name}_seed{seed}.jsonl"


def write_trial_jsonl(path, result: TrialResult):
    """One JSON object per step; field order and float text are deterministic."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        for rec in result.steps:
            row = dataclasses.asdict(rec)
            row["feedback"] = list(rec.feedback)
            fh.write(json.dumps(row) + "\n")


def load_trial_jsonl(path):
    records = []
    with open(path) as fh:
        for line in fh:
            row = json.loads(line)
            row["feedback"] = tuple(row["feedback"])
            records.append(StepRecord(**row))
    return records


def run_experiment(cfg: ExperimentConfig, write_traces: bool = True,
                   on_trial=None):
    """Run cfg.seeds trials of one condition, logging each trace."""
    results = []
    for seed in cfg.seeds:
        result = run_trial(cfg, seed)
        if write_traces:
            write_trial_jsonl(trace_path(cfg.output_dir, cfg.mode, seed), result)
        if result.fault:
            logger.warning("seed %d faulted: %s", seed, result.fault_message)
        results.append(result)
        if on_trial is not None:
            on_trial(result)
    return results


def compare_conditions(cfg: ExperimentConfig, modes=ALL_MODES,
                       write_traces: bool = True, on_trial=None):
    """Run every reward condition over the same seeds; returns mode -> summary."""
    summaries = {}
    for mode in modes:
        condition_cfg = replace(cfg, mode=mode)
        results = run_experiment(condition_cfg, write_traces=write_traces,
                                 on_trial=on_trial)
        summaries[mode] = aggregate(results)
    return summaries


def write_summary_csv(path, summaries):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SUMMARY_COLUMNS)
        for summary in summaries:
            writer.writerow([summary.condition, summary.n,
                             summary.mae_all_mean, summary.mae_all_std,
                             summary.mae_10k_mean, summary.mae_10k_std,
                             summary.mae_5k_mean, summary.mae_5k_std])
