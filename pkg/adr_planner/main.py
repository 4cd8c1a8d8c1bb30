# main.py
"""
ADR planner - command-line entry point.

    python -m adr_planner generate --n 320 --seed 7 --out cloud.csv
    python -m adr_planner train --config run.json --seeds 0 1 2
    python -m adr_planner validate --generate-n 8 --k 4 --episodes 20000
    python -m adr_planner transfer --from 6678,0,0,0 --to 42164,0,0,0
"""

import argparse
import sys
from typing import List, Optional

from .api.commands import COMMANDS, run_command
from .core.config import get_config
from .models import StartPolicy
from .utils.logger import setup_logging


def _bool(raw: str) -> bool:
    value = raw.strip().lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"expected true/false, got {raw!r}")


def _run_options() -> argparse.ArgumentParser:
    """Flags shared by every command that trains or evaluates."""
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--config", help="JSON run configuration")
    parent.add_argument("--output-dir", help="Directory for metrics, checkpoints and reports")
    parent.add_argument("--seed", type=int, help="Single seed (shorthand for --seeds S)")
    parent.add_argument("--seeds", type=int, nargs="+", help="Seed list")

    source = parent.add_mutually_exclusive_group()
    source.add_argument("--catalog-csv", help="Catalog CSV (id,a_km,i_deg,omega_deg,nu_deg)")
    source.add_argument("--catalog-tle", help="Three-line TLE file")
    source.add_argument("--generate-n", type=int, help="Synthetic cloud of this size")
    parent.add_argument("--generate-seed", type=int, default=0, help="Seed of the synthetic cloud")

    mission = parent.add_argument_group("mission")
    mission.add_argument("--delta-v-max", type=float, help="ΔV budget [km/s]")
    mission.add_argument("--delta-t-max", type=float, help="ΔT budget [s]")
    mission.add_argument("--r-prio", type=int, help="Reward for the high-risk debris")
    mission.add_argument("--risk-threshold", type=float, help="Probability of a high-risk debris per step")
    mission.add_argument("--risk-visible", type=_bool, help="Expose collision risk to the agent (true/false)")
    mission.add_argument("--start-policy", choices=[p.value for p in StartPolicy])

    agent = parent.add_argument_group("agent")
    agent.add_argument("--episodes", type=int, help="Training episodes")
    agent.add_argument("--learning-rate", type=float)
    agent.add_argument("--gamma", type=float)
    agent.add_argument("--batch-size", type=int)
    agent.add_argument("--eval-episodes", type=int)
    parent.add_argument("--no-plots", action="store_true", help="Skip SVG learning curves")
    return parent


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="adr_planner", description="Risk-aware ADR mission planner")
    parser.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING, ...")
    sub = parser.add_subparsers(dest="command", required=True)
    run_options = _run_options()

    gen = sub.add_parser("generate", help="Write a synthetic debris cloud to CSV")
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", required=True)
    gen.add_argument("--a-min", type=float)
    gen.add_argument("--a-max", type=float)
    gen.add_argument("--inc-mean", type=float)
    gen.add_argument("--inc-std", type=float)

    sub.add_parser("train", parents=[run_options], help="Train one agent per seed")

    ev = sub.add_parser("eval", parents=[run_options], help="Greedy evaluation of a checkpoint")
    ev.add_argument("--checkpoint", required=True)
    ev.add_argument("--no-mask", action="store_true", help="Allow the greedy policy to pick removed debris")

    val = sub.add_parser("validate", parents=[run_options], help="Exhaustive-search validation protocol")
    val.add_argument("--k", type=int, help="Sequence length (default min(5, N))")
    val.add_argument("--budget-scale", type=float, default=1.0, help="Multiplier on ΔV_max")

    tr = sub.add_parser("transfer", help="Price one transfer")
    tr.add_argument("--from", dest="origin", required=True, help="a_km,i_deg,omega_deg,nu_deg")
    tr.add_argument("--to", dest="target", required=True, help="a_km,i_deg,omega_deg,nu_deg")

    sub.add_parser("compare", parents=[run_options], help="Risk-visible vs risk-masked comparison")

    sw = sub.add_parser("sweep", parents=[run_options], help="Learning-rate x gamma grid")
    sw.add_argument("--learning-rates", required=True, help="Comma-separated values")
    sw.add_argument("--gammas", required=True, help="Comma-separated values")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse usage errors
        return int(exc.code or 0)

    get_config()
    setup_logging(args.log_level)
    return run_command(COMMANDS[args.command], args)


if __name__ == "__main__":
    sys.exit(main())
