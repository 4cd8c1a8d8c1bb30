# api/commands.py
"""
Command handlers for the planner CLI.
Each handler takes parsed arguments, returns an exit code and prints only
its primary result; diagnostics go through logging.
"""

import json
import logging
import sys
from argparse import Namespace
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

from pydantic import ValidationError

from ..core.config import Config
from ..core.errors import (
    CatalogError,
    ConfigError,
    DimensionError,
    DomainError,
    OracleLimitError,
    PlannerError,
)
from ..core.pipeline import ValidationPipeline
from ..models import DebrisCatalog
from ..services.catalog import generate_cloud, load_catalog, save_csv
from ..services.environment import MissionEnvironment, feature_size
from ..services.learner import evaluate_greedy, load_checkpoint, seed_streams
from ..services.orbits import transfer_cost
from ..tasks.experiments import compare_scenarios, run_training, sweep, write_json
from .models import CatalogSource, ElementsSpec, EvalReport, GeneratorSpec, RunConfig

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3

USAGE_ERRORS = (ConfigError, OracleLimitError, DomainError, CatalogError, ValidationError)


# ---------------------------------------------------------------------------
# Error mapping
# ---------------------------------------------------------------------------

def run_command(handler: Callable[[Namespace], int], args: Namespace) -> int:
    """Invoke a handler and map failures onto exit codes."""
    try:
        return handler(args)
    except USAGE_ERRORS as exc:
        logger.error("Configuration error: %s", exc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except PlannerError as exc:
        logger.error("Run failed: %s", exc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except Exception as exc:
        logger.exception("Unexpected failure: %s", exc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


# ---------------------------------------------------------------------------
# Run configuration
# ---------------------------------------------------------------------------

def _read_config_file(path: Optional[str]) -> Dict[str, Any]:
    if not path:
        return {}
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError(f"Config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"Config file {path} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"Config file {path} must hold a JSON object")
    return data


def _apply_overrides(data: Dict[str, Any], args: Namespace) -> Dict[str, Any]:
    """CLI flags win over file values."""
    mission = dict(data.get("mission") or {})
    agent = dict(data.get("agent") or {})
    catalog = dict(data.get("catalog") or {})

    flag_targets = {
        "delta_v_max": mission,
        "delta_t_max": mission,
        "r_prio": mission,
        "risk_threshold": mission,
        "risk_visible": mission,
        "start_policy": mission,
        "episodes": agent,
        "learning_rate": agent,
        "gamma": agent,
        "batch_size": agent,
        "eval_episodes": agent,
    }
    for name, target in flag_targets.items():
        value = getattr(args, name, None)
        if value is not None:
            target[name] = value

    if getattr(args, "catalog_csv", None):
        catalog = {"csv_path": args.catalog_csv}
    elif getattr(args, "catalog_tle", None):
        catalog = {"tle_path": args.catalog_tle}
    elif getattr(args, "generate_n", None) is not None:
        catalog = {"generator": {"n": args.generate_n, "seed": getattr(args, "generate_seed", 0) or 0}}

    data = dict(data, mission=mission, agent=agent, catalog=catalog)
    if getattr(args, "seeds", None):
        data["seeds"] = args.seeds
    elif getattr(args, "seed", None) is not None:
        data["seeds"] = [args.seed]
    if getattr(args, "output_dir", None):
        data["output_dir"] = args.output_dir
    return data


def build_run_config(args: Namespace) -> tuple[RunConfig, DebrisCatalog]:
    """
    Merge the JSON config file with flag overrides, load the catalog and
    validate. A missing mission.n_debris defaults to the catalog size.
    """
    data = _apply_overrides(_read_config_file(getattr(args, "config", None)), args)
    if not data["catalog"]:
        raise ConfigError("No catalog source: give --catalog-csv, --catalog-tle, --generate-n or a config file")

    catalog = load_catalog(CatalogSource.model_validate(data["catalog"]))
    data["mission"].setdefault("n_debris", len(catalog))
    config = RunConfig.model_validate(data)
    if config.mission.n_debris != len(catalog):
        raise ConfigError(
            f"mission.n_debris={config.mission.n_debris} but the catalog holds {len(catalog)} debris"
        )
    return config, catalog


def _echo_config(config: RunConfig, output_dir: Path) -> None:
    output_dir.mkdir(parents=True, exist_ok=True)
    (output_dir / "effective_config.json").write_text(
        config.model_dump_json(indent=2) + "\n", encoding="utf-8"
    )


def _parse_elements(raw: str, flag: str) -> ElementsSpec:
    parts = [p.strip() for p in raw.split(",")]
    if len(parts) != 4:
        raise ConfigError(f"{flag} expects 'a_km,i_deg,omega_deg,nu_deg', got {raw!r}")
    try:
        a, i, omega, nu = (float(p) for p in parts)
    except ValueError:
        raise ConfigError(f"{flag} holds a non-numeric value: {raw!r}") from None
    return ElementsSpec(a_km=a, i_deg=i, omega_deg=omega, nu_deg=nu)


def _float_list(raw: str, flag: str) -> List[float]:
    try:
        values = [float(p) for p in raw.split(",") if p.strip()]
    except ValueError:
        raise ConfigError(f"{flag} expects comma-separated numbers, got {raw!r}") from None
    if not values:
        raise ConfigError(f"{flag} is empty")
    return values


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_generate(args: Namespace) -> int:
    """Write a synthetic cloud to CSV."""
    spec_fields = {
        "a_min_km": args.a_min,
        "a_max_km": args.a_max,
        "inc_mean_deg": args.inc_mean,
        "inc_std_deg": args.inc_std,
    }
    spec = GeneratorSpec(n=args.n, seed=args.seed, **{k: v for k, v in spec_fields.items() if v is not None})
    catalog = generate_cloud(spec.n, spec.seed, spec)
    path = save_csv(catalog, Path(args.out))
    print(path)
    return EXIT_OK


def cmd_train(args: Namespace) -> int:
    """Train every seed; metrics, checkpoints, curves and the aggregate land in output_dir."""
    config, catalog = build_run_config(args)
    _echo_config(config, config.output_dir)
    results = run_training(
        config.mission, config.agent, catalog, config.seeds, config.output_dir,
        render=not getattr(args, "no_plots", False),
    )
    for result in results:
        print(f"seed {result.seed}: greedy reward {result.evaluation.mean_reward:.6f}")
    return EXIT_OK


def cmd_eval(args: Namespace) -> int:
    """Greedy rollouts of a saved checkpoint."""
    config, catalog = build_run_config(args)
    checkpoint = Path(args.checkpoint)
    if not checkpoint.is_file():
        raise ConfigError(f"Checkpoint not found: {checkpoint}")
    params, metadata = load_checkpoint(checkpoint)
    expected = feature_size(len(catalog))
    if params.input_dim != expected or params.n_actions != len(catalog):
        raise DimensionError(
            f"Checkpoint expects {params.input_dim} features / {params.n_actions} actions, "
            f"catalog gives {expected} / {len(catalog)}"
        )

    seed = config.seeds[0]
    env = MissionEnvironment(config.mission, catalog, rng=seed_streams(seed)[3])
    evaluation = evaluate_greedy(params, env, config.agent.eval_episodes, not args.no_mask)
    report = EvalReport(
        episodes=len(evaluation.rewards),
        mean_reward=evaluation.mean_reward,
        std_reward=evaluation.std_reward,
        rewards=list(evaluation.rewards),
        first_sequence=list(evaluation.first_sequence),
    )
    config.output_dir.mkdir(parents=True, exist_ok=True)
    (config.output_dir / "eval.json").write_text(report.model_dump_json(indent=2) + "\n", encoding="utf-8")
    logger.info("Evaluated checkpoint trained on seed %s", metadata.get("seed"))
    print(f"mean reward {report.mean_reward:.6f} ± {report.std_reward:.6f} over {report.episodes} episodes")
    return EXIT_OK


def cmd_validate(args: Namespace) -> int:
    """The oracle validation protocol; exit 2 when the budgets make the optimum unreachable."""
    config, catalog = build_run_config(args)
    if len(catalog) > Config.ORACLE_MAX_N:
        raise OracleLimitError(
            f"Validation needs exhaustive search; {len(catalog)} debris exceeds {Config.ORACLE_MAX_N}"
        )
    _echo_config(config, config.output_dir)
    verdict = ValidationPipeline(
        config.mission,
        config.agent,
        catalog,
        config.seeds,
        config.output_dir,
        k=args.k,
        budget_scale=args.budget_scale,
        render=not getattr(args, "no_plots", False),
    ).process()

    print(config.output_dir / "verdict.json")
    if verdict.discrepancy is not None:
        print(f"discrepancy: {verdict.discrepancy}", file=sys.stderr)
        return EXIT_CONFIG
    print(f"match={str(verdict.match).lower()} dv_optimal={verdict.dv_optimal:.6f}")
    return EXIT_OK


def cmd_transfer(args: Namespace) -> int:
    """Price a single transfer."""
    origin = _parse_elements(args.origin, "--from").to_elements()
    target = _parse_elements(args.target, "--to").to_elements()
    cost = transfer_cost(origin, target)
    print(f"delta_v: {cost.delta_v:.6f} km/s")
    print(f"delta_t: {cost.delta_t:.3f} s")
    return EXIT_OK


def cmd_compare(args: Namespace) -> int:
    """Risk-visible versus risk-masked scenario comparison."""
    config, catalog = build_run_config(args)
    _echo_config(config, config.output_dir)
    report = compare_scenarios(
        config.mission, config.agent, catalog, config.seeds, config.output_dir,
        render=not getattr(args, "no_plots", False),
    )
    print(
        f"visible {report.visible_mean:.6f} vs masked {report.masked_mean:.6f}, "
        f"one-sided p={report.p_value:.4g}"
    )
    return EXIT_OK


def cmd_sweep(args: Namespace) -> int:
    """Learning-rate × gamma grid."""
    config, catalog = build_run_config(args)
    learning_rates = _float_list(args.learning_rates, "--learning-rates")
    gammas = _float_list(args.gammas, "--gammas")
    _echo_config(config, config.output_dir)
    frame = sweep(config.mission, config.agent, catalog, config.seeds, learning_rates, gammas, config.output_dir)
    best = frame.loc[frame["mean_reward"].idxmax()]
    write_json(
        {"learning_rate": float(best["learning_rate"]), "gamma": float(best["gamma"]),
         "mean_reward": float(best["mean_reward"])},
        config.output_dir / "sweep_best.json",
    )
    print(f"best learning_rate={best['learning_rate']} gamma={best['gamma']} reward={best['mean_reward']:.6f}")
    return EXIT_OK


COMMANDS: Dict[str, Callable[[Namespace], int]] = {
    "generate": cmd_generate,
    "train": cmd_train,
    "eval": cmd_eval,
    "validate": cmd_validate,
    "transfer": cmd_transfer,
    "compare": cmd_compare,
    "sweep": cmd_sweep,
}
