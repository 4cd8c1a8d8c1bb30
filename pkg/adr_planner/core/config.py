# core/config.py
"""
Configuration management for the ADR planner.
Centralizes environment variables, physical constants and numeric defaults.
"""

import os
import warnings
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv

# Load environment variables
load_dotenv()


def _env_flag(name: str, default: bool) -> bool:
    value = os.getenv(name)
    if value is None:
        return default
    return value.strip().lower() in ("1", "true", "yes", "on")


class Config:
    """Application configuration singleton."""

    # Paths
    LOG_DIR: Path = Path(os.getenv("ADR_PLANNER_LOG_DIR", Path.home() / ".adr_planner" / "logs"))

    # Logging
    LOG_LEVEL: str = os.getenv("LOG_LEVEL", "INFO").upper()
    LOG_TO_FILE: bool = _env_flag("ADR_PLANNER_LOG_TO_FILE", True)
    LOG_FORMAT: str = "%(asctime)s | %(levelname)-8s | %(name)s | %(message)s"
    LOG_DATEFMT: str = "%Y-%m-%d %H:%M:%S"

    # Earth model
    MU_EARTH: float = 398600.4418  # km^3/s^2
    R_EARTH: float = 6378.137  # km
    PHASING_TOLERANCE: float = 1e-9  # rad/s

    # Synthetic cloud (Iridium-like)
    A_MIN_KM: float = 7050.0
    A_MAX_KM: float = 7250.0
    INC_MEAN_DEG: float = 86.4
    INC_STD_DEG: float = 0.5

    # Oracle
    ORACLE_MAX_N: int = 12
    TIE_TOLERANCE: float = 1e-9  # km/s
    BUDGET_SLACK: float = 1e-9  # relative

    # Outputs
    SMOOTHING_WINDOW: int = 100
    CHECKPOINT_VERSION: int = 1
    THREADS_ENV: str = "ADR_PLANNER_THREADS"

    @classmethod
    def validate(cls) -> None:
        """Validate configuration consistency."""
        if cls.MU_EARTH <= 0:
            raise ValueError(f"Invalid MU_EARTH: {cls.MU_EARTH}. Must be positive.")

        if cls.A_MIN_KM >= cls.A_MAX_KM:
            raise ValueError(
                f"Invalid generator range: A_MIN_KM={cls.A_MIN_KM} >= A_MAX_KM={cls.A_MAX_KM}"
            )

        if cls.A_MIN_KM <= cls.R_EARTH:
            raise ValueError("Generator range must stay above the Earth radius")

        raw = os.getenv(cls.THREADS_ENV)
        if raw is not None:
            try:
                if int(raw) < 1:
                    raise ValueError
            except ValueError:
                raise ValueError(
                    f"{cls.THREADS_ENV} must be a positive integer, got {raw!r}"
                ) from None

    @classmethod
    def worker_count(cls, requested: Optional[int] = None) -> int:
        """Number of seed workers, capped by ADR_PLANNER_THREADS."""
        cap = os.getenv(cls.THREADS_ENV)
        limit = int(cap) if cap and cap.isdigit() and int(cap) > 0 else (os.cpu_count() or 1)
        if requested is None:
            return limit
        return max(1, min(requested, limit))

    @classmethod
    def is_production(cls) -> bool:
        """Check if running in production mode."""
        return os.getenv("ENV", "development").lower() == "production"


def get_config() -> type[Config]:
    """Get validated configuration singleton."""
    try:
        Config.validate()
    except ValueError as e:
        # Only raise in production, warn in development
        if Config.is_production():
            raise
        warnings.warn(f"Configuration warning: {e}")
    return Config
