# tasks/experiments.py
"""
Multi-seed experiment jobs.

Each seed is an independent worker (own PCG64 streams, own environments);
workers share one warmed, read-only cost table. Aggregation runs after all
workers finish and iterates seeds in the order given, so outputs do not
depend on thread scheduling.

Per-seed files: metrics_seed{s}.csv, checkpoint_seed{s}.npz,
learning_curve_seed{s}.svg. Per run: aggregate.csv.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import product
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy.stats import mannwhitneyu

from ..api.models import AgentConfig, ComparisonReport, MissionConfig
from ..core.config import Config
from ..core.errors import PlannerError, TrainingError
from ..models import DebrisCatalog
from ..services.costs import CostProvider, CostTable, make_cost_provider
from ..services.environment import MissionEnvironment
from ..services.learner import (
    DQNTrainer,
    GreedyEvaluation,
    TrainingReport,
    save_checkpoint,
    write_metrics_csv,
)
from ..services.learner.trainer import EnvFactory
from ..services.renderer import CurveRenderer
from ..utils.logger import get_logger

AGGREGATE_COLUMNS = ["window_start", "window_end", "mean_reward", "std_reward", "n_seeds"]
SWEEP_COLUMNS = ["learning_rate", "gamma", "mean_reward", "std_reward", "n_seeds"]

log = get_logger(__name__)


@dataclass(frozen=True)
class SeedResult:
    seed: int
    report: TrainingReport
    evaluation: GreedyEvaluation


# ---------------------------------------------------------------------
# Building blocks
# ---------------------------------------------------------------------
def shared_table(
    mission: MissionConfig, catalog: DebrisCatalog, cost_provider: Optional[CostProvider] = None
) -> CostTable:
    table = CostTable(
        catalog, cost_provider or make_cost_provider(), mission.start_policy, mission.parking_elements
    )
    return table.warm()


def env_factory(mission: MissionConfig, catalog: DebrisCatalog, table: CostTable) -> EnvFactory:
    def build(rng: np.random.Generator) -> MissionEnvironment:
        return MissionEnvironment(mission, catalog, rng=rng, table=table)

    return build


def train_and_evaluate(
    seed: int, mission: MissionConfig, agent: AgentConfig, catalog: DebrisCatalog, table: CostTable
) -> SeedResult:
    """Train one seed, then roll out greedily on the evaluation stream."""
    config = agent.model_copy(update={"seed": seed})
    trainer = DQNTrainer(env_factory(mission, catalog, table), config)
    report = trainer.run()
    evaluation = trainer.evaluate(report.params)
    log.info(
        "seed_finished",
        seed=seed,
        final_reward=report.rewards[-1],
        greedy_mean=round(evaluation.mean_reward, 6),
        target_syncs=report.target_syncs,
    )
    return SeedResult(seed, report, evaluation)


def _map_seeds(fn, seeds: Sequence[int]) -> List[Tuple[int, Optional[SeedResult], Optional[Exception]]]:
    """Run `fn(seed)` per seed on a capped pool; failures are collected, not raised."""

    def guarded(seed: int):
        try:
            return seed, fn(seed), None
        except PlannerError as e:
            log.error("seed_failed", seed=seed, error=str(e))
            return seed, None, e

    workers = Config.worker_count(len(seeds))
    if workers == 1:
        return [guarded(seed) for seed in seeds]
    with ThreadPoolExecutor(max_workers=workers, thread_name_prefix="seed") as pool:
        return list(pool.map(guarded, seeds))


def _raise_failures(outcomes) -> List[SeedResult]:
    failed = [(seed, err) for seed, _, err in outcomes if err is not None]
    if failed:
        detail = "; ".join(f"seed {seed}: {err}" for seed, err in failed)
        raise TrainingError(f"{len(failed)} seed(s) failed: {detail}")
    return [result for _, result, _ in outcomes]


def aggregate(reports: Sequence[TrainingReport], window: int = Config.SMOOTHING_WINDOW) -> pd.DataFrame:
    """Mean ± std across seeds of each seed's mean reward per episode window."""
    if not reports:
        return pd.DataFrame(columns=AGGREGATE_COLUMNS)
    episodes = min(r.episodes for r in reports)
    rows = []
    for start in range(0, episodes, window):
        end = min(start + window, episodes)
        means = np.array([np.mean(r.rewards[start:end]) for r in reports], dtype=np.float64)
        rows.append(
            {
                "window_start": start,
                "window_end": end - 1,
                "mean_reward": float(means.mean()),
                "std_reward": float(means.std()),
                "n_seeds": len(reports),
            }
        )
    return pd.DataFrame(rows, columns=AGGREGATE_COLUMNS)


def _write_frame(frame: pd.DataFrame, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, lineterminator="\n")
    return path


# ---------------------------------------------------------------------
# Jobs
# ---------------------------------------------------------------------
def run_training(
    mission: MissionConfig,
    agent: AgentConfig,
    catalog: DebrisCatalog,
    seeds: Sequence[int],
    output_dir: Path,
    *,
    cost_provider: Optional[CostProvider] = None,
    render: bool = True,
) -> List[SeedResult]:
    """
    Train every seed and write its files as soon as it finishes; the
    aggregate is written last. If any seed fails, the finished seeds' files
    stay on disk and a TrainingError is raised.
    """
    output_dir = Path(output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    table = shared_table(mission, catalog, cost_provider)
    renderer = CurveRenderer() if render else None

    def job(seed: int) -> SeedResult:
        result = train_and_evaluate(seed, mission, agent, catalog, table)
        write_metrics_csv(result.report, output_dir / f"metrics_seed{seed}.csv")
        save_checkpoint(
            output_dir / f"checkpoint_seed{seed}.npz",
            result.report.params,
            {
                "seed": seed,
                "n_debris": mission.n_debris,
                "feature_size": result.report.params.input_dim,
                "hidden_sizes": list(agent.hidden_sizes),
                "risk_visible": mission.risk_visible,
                "episodes": result.report.episodes,
            },
        )
        if renderer is not None:
            renderer.render(
                result.report.rewards,
                output_dir / f"learning_curve_seed{seed}.svg",
                title=f"Seed {seed}",
            )
        return result

    results = _raise_failures(_map_seeds(job, seeds))
    _write_frame(aggregate([r.report for r in results]), output_dir / "aggregate.csv")
    log.info("training_done", seeds=list(seeds), output_dir=str(output_dir))
    return results


def compare_scenarios(
    mission: MissionConfig,
    agent: AgentConfig,
    catalog: DebrisCatalog,
    seeds: Sequence[int],
    output_dir: Path,
    *,
    cost_provider: Optional[CostProvider] = None,
    render: bool = True,
) -> ComparisonReport:
    """Risk-visible agent against the risk-masked baseline over the same seeds."""
    output_dir = Path(output_dir)
    scenarios: Dict[str, List[SeedResult]] = {}
    for name, visible in (("visible", True), ("masked", False)):
        scenarios[name] = run_training(
            mission.model_copy(update={"risk_visible": visible}),
            agent,
            catalog,
            seeds,
            output_dir / name,
            cost_provider=cost_provider,
            render=render,
        )

    visible = [r.evaluation.mean_reward for r in scenarios["visible"]]
    masked = [r.evaluation.mean_reward for r in scenarios["masked"]]
    test = mannwhitneyu(visible, masked, alternative="greater")
    p_value = float(test.pvalue)
    if math.isnan(p_value):  # every value tied
        p_value = 1.0

    report = ComparisonReport(
        seeds=list(seeds),
        visible_rewards=visible,
        masked_rewards=masked,
        visible_mean=float(np.mean(visible)),
        masked_mean=float(np.mean(masked)),
        u_statistic=float(test.statistic),
        p_value=p_value,
        visible_better=float(np.mean(visible)) > float(np.mean(masked)),
    )
    (output_dir / "comparison.json").write_text(report.model_dump_json(indent=2) + "\n", encoding="utf-8")

    if render:
        curves = {
            name: np.mean([r.report.rewards for r in results], axis=0)
            for name, results in scenarios.items()
        }
        CurveRenderer().render_overlay(
            {"risk visible": curves["visible"], "risk masked": curves["masked"]},
            output_dir / "comparison.svg",
            title="Risk-visible vs risk-masked",
        )
    log.info("comparison_done", p_value=p_value, visible_mean=report.visible_mean, masked_mean=report.masked_mean)
    return report


def sweep(
    mission: MissionConfig,
    agent: AgentConfig,
    catalog: DebrisCatalog,
    seeds: Sequence[int],
    learning_rates: Sequence[float],
    gammas: Sequence[float],
    output_dir: Path,
    *,
    cost_provider: Optional[CostProvider] = None,
) -> pd.DataFrame:
    """Grid over learning rate × gamma; one row per cell in grid order."""
    table = shared_table(mission, catalog, cost_provider)
    rows = []
    for lr, gamma in product(learning_rates, gammas):
        cell = agent.model_copy(update={"learning_rate": lr, "gamma": gamma})
        results = _raise_failures(
            _map_seeds(lambda s: train_and_evaluate(s, mission, cell, catalog, table), seeds)
        )
        rewards = np.array([r.evaluation.mean_reward for r in results], dtype=np.float64)
        rows.append(
            {
                "learning_rate": lr,
                "gamma": gamma,
                "mean_reward": float(rewards.mean()),
                "std_reward": float(rewards.std()),
                "n_seeds": len(results),
            }
        )
        log.info("sweep_cell", learning_rate=lr, gamma=gamma, mean_reward=rows[-1]["mean_reward"])

    frame = pd.DataFrame(rows, columns=SWEEP_COLUMNS)
    _write_frame(frame, Path(output_dir) / "sweep.csv")
    return frame


def write_json(payload: dict, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True, default=str) + "\n", encoding="utf-8")
    return path
