# core/pipeline.py
"""
Pipeline orchestration for the oracle validation protocol.
Coordinates the flow from catalog to verdict: minimum-ΔV enumeration, budget
setting, full-depth search, agent training and greedy evaluation.
"""

import logging
from pathlib import Path
from typing import Any, Dict, Optional, Sequence

from ..api.models import AgentConfig, MissionConfig, Verdict
from ..models import DebrisCatalog
from ..services.costs import CostProvider, CostTable, make_cost_provider
from ..services.oracle import full_depth_best_reward, optimal_min_dv
from ..tasks.experiments import run_training
from .config import Config
from .errors import ConfigError

logger = logging.getLogger(__name__)

VERDICT_FILE = "verdict.json"


class ValidationPipeline:
    """Orchestrates the validation protocol."""

    def __init__(
        self,
        mission: MissionConfig,
        agent: AgentConfig,
        catalog: DebrisCatalog,
        seeds: Sequence[int],
        output_dir: Path,
        *,
        k: Optional[int] = None,
        budget_scale: float = 1.0,
        cost_provider: Optional[CostProvider] = None,
        render: bool = True,
    ):
        """Initialize the pipeline."""
        n = len(catalog)
        k = k if k is not None else min(5, n)
        if not 0 < k <= n:
            raise ConfigError(f"Sequence length k={k} must lie in [1, {n}]")
        if not budget_scale > 0:
            raise ConfigError(f"Budget scale must be positive, got {budget_scale}")

        self.mission = mission
        self.agent = agent
        self.catalog = catalog
        self.seeds = list(seeds)
        self.output_dir = Path(output_dir)
        self.k = k
        self.budget_scale = budget_scale
        self.provider = cost_provider or make_cost_provider()
        self.render = render
        self.stages = [
            ("Enumerating minimum-ΔV sequences", self._enumerate),
            ("Setting ΔV budget", self._set_budget),
            ("Running full-depth search", self._full_depth),
            ("Training agent", self._train),
            ("Evaluating greedy policy", self._evaluate),
        ]

    def process(self) -> Verdict:
        """
        Run every stage and write the verdict.

        Returns:
            The verdict; it is also written to <output_dir>/verdict.json

        Raises:
            OracleLimitError: If the catalog is too large to enumerate
            TrainingError: If any seed fails to train
        """
        logger.info(f"Starting validation for {len(self.catalog)} debris, k={self.k}")

        context: Dict[str, Any] = {
            "table": None,
            "optimum": None,
            "mission": None,
            "oracle_best": None,
            "results": None,
            "discrepancy": None,
        }

        for stage_name, stage_func in self.stages:
            if context["discrepancy"] is not None:
                logger.warning(f"Skipping stage '{stage_name}': {context['discrepancy']}")
                continue
            logger.info(f"Stage: {stage_name}")
            try:
                stage_func(context)
            except Exception as e:
                logger.error(f"Validation failed at stage '{stage_name}': {str(e)}")
                raise

        verdict = self._build_verdict(context)
        self.output_dir.mkdir(parents=True, exist_ok=True)
        (self.output_dir / VERDICT_FILE).write_text(verdict.model_dump_json(indent=2) + "\n", encoding="utf-8")
        return verdict

    def _enumerate(self, context: Dict[str, Any]) -> None:
        """Stage 1: Minimum total ΔV over all length-k sequences."""
        # risk off: every removal pays base_risk
        mission = self.mission.model_copy(update={"risk_threshold": 0.0})
        context["mission"] = mission
        context["table"] = CostTable(
            self.catalog, self.provider, mission.start_policy, mission.parking_elements
        )
        context["optimum"] = optimal_min_dv(
            self.catalog, self.k, self.provider, mission.start_policy, mission.parking_elements,
            table=context["table"],
        )
        optimum = context["optimum"]
        logger.info(
            f"ΔV_optimal={optimum.dv_optimal:.6f} km/s for {list(optimum.sequence)} "
            f"(unique={optimum.unique})"
        )

    def _set_budget(self, context: Dict[str, Any]) -> None:
        """Stage 2: ΔV_max = ΔV_optimal, scaled for the infeasibility check."""
        dv_max = context["optimum"].dv_optimal * (1.0 + Config.BUDGET_SLACK) * self.budget_scale
        if dv_max <= 0:
            raise ConfigError("Optimal ΔV is zero; the protocol needs a positive ΔV budget")
        context["mission"] = context["mission"].model_copy(update={"delta_v_max": dv_max})
        logger.info(f"ΔV_max set to {dv_max:.9f} km/s")

    def _full_depth(self, context: Dict[str, Any]) -> None:
        """Stage 3: Longest feasible sequence under the protocol budgets."""
        mission = context["mission"]
        result = full_depth_best_reward(
            self.catalog,
            (mission.delta_v_max, mission.delta_t_max),
            self.provider,
            True,
            mission.start_policy,
            mission.parking_elements,
            table=context["table"],
        )
        context["oracle_best"] = result.best_reward * mission.base_risk
        if result.best_reward < self.k:
            context["discrepancy"] = (
                f"budget below the optimum: oracle best length {int(result.best_reward)} < k={self.k}"
            )

    def _train(self, context: Dict[str, Any]) -> None:
        """Stage 4: Train the agent on every seed."""
        context["results"] = run_training(
            context["mission"],
            self.agent,
            self.catalog,
            self.seeds,
            self.output_dir,
            cost_provider=self.provider,
            render=self.render,
        )

    def _evaluate(self, context: Dict[str, Any]) -> None:
        """Stage 5: Compare greedy rewards with the oracle optimum."""
        for result in context["results"]:
            logger.info(
                f"Seed {result.seed}: greedy reward {result.evaluation.mean_reward} "
                f"via {list(result.evaluation.first_sequence)}"
            )

    def _build_verdict(self, context: Dict[str, Any]) -> Verdict:
        """Build the final verdict."""
        optimum = context["optimum"]
        results = context["results"] or []
        seed_rewards = {str(r.seed): r.evaluation.mean_reward for r in results}
        agent_best = max(seed_rewards.values()) if seed_rewards else None
        oracle_best = context["oracle_best"]
        match = (
            context["discrepancy"] is None
            and agent_best is not None
            and abs(agent_best - oracle_best) <= Config.TIE_TOLERANCE
        )
        return Verdict(
            dv_optimal=optimum.dv_optimal,
            optimal_sequence=list(optimum.sequence),
            unique=optimum.unique,
            agent_best_reward=agent_best,
            match=match,
            oracle_best_reward=oracle_best,
            seed_rewards=seed_rewards,
            discrepancy=context["discrepancy"],
        )
