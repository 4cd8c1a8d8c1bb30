# api/models.py
"""
Pydantic models for run configuration and result documents.
Defines the contract between the command line, config files and the services.
"""

from __future__ import annotations

from pathlib import Path
from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..core.config import Config
from ..models import OrbitalElements, StartPolicy


# ============================================================================
# Mission / agent settings
# ============================================================================

class ElementsSpec(BaseModel):
    """Orbital elements as written in config files (km and degrees)."""
    model_config = ConfigDict(frozen=True)

    a_km: float = Field(..., gt=Config.R_EARTH)
    i_deg: float = 0.0
    omega_deg: float = 0.0
    nu_deg: float = 0.0

    def to_elements(self) -> OrbitalElements:
        return OrbitalElements.from_degrees(self.a_km, self.i_deg, self.omega_deg, self.nu_deg)


class MissionConfig(BaseModel):
    """Budgets, reward levels and scenario switches of one mission."""
    model_config = ConfigDict(frozen=True)

    n_debris: int = Field(..., ge=1)
    delta_v_max: float = Field(..., gt=0, description="km/s")
    delta_t_max: float = Field(..., gt=0, description="s")
    r_prio: int = Field(10, ge=1, le=10)
    risk_threshold: float = Field(0.5, ge=0.0, le=1.0)
    base_risk: int = Field(1, ge=1)
    start_policy: StartPolicy = StartPolicy.FREE_FIRST_PICK
    parking_orbit: Optional[ElementsSpec] = None
    risk_visible: bool = True

    @model_validator(mode="after")
    def check_start_policy(self) -> "MissionConfig":
        if self.start_policy is StartPolicy.PARKING_ORBIT and self.parking_orbit is None:
            raise ValueError("start_policy 'parking_orbit' requires parking_orbit elements")
        if self.base_risk > self.r_prio:
            raise ValueError("base_risk cannot exceed r_prio")
        return self

    @property
    def parking_elements(self) -> Optional[OrbitalElements]:
        if self.start_policy is StartPolicy.PARKING_ORBIT and self.parking_orbit is not None:
            return self.parking_orbit.to_elements()
        return None


class AgentConfig(BaseModel):
    """DQN hyperparameters. Every default is a common-practice choice."""
    model_config = ConfigDict(frozen=True)

    gamma: float = Field(0.95, ge=0.0, le=1.0)
    learning_rate: float = Field(1e-3, gt=0)
    epsilon_start: float = Field(1.0, ge=0.0, le=1.0)
    epsilon_end: float = Field(0.05, ge=0.0, le=1.0)
    epsilon_decay_fraction: float = Field(0.8, gt=0.0, le=1.0)
    batch_size: int = Field(64, ge=1)
    buffer_capacity: int = Field(50_000, ge=1)
    target_sync_period: int = Field(500, ge=1)
    hidden_sizes: List[int] = Field(default_factory=lambda: [64, 64], min_length=2, max_length=2)
    warmup: int = Field(1000, ge=0)
    optimizer: Literal["adam", "sgd"] = "adam"
    episodes: int = Field(2000, ge=1)
    eval_episodes: int = Field(20, ge=1)
    eval_mask_invalid: bool = True
    seed: int = 0

    @field_validator("hidden_sizes")
    @classmethod
    def validate_hidden(cls, v: List[int]) -> List[int]:
        if any(width < 1 for width in v):
            raise ValueError("Hidden layer widths must be positive")
        return v

    @property
    def effective_warmup(self) -> int:
        return max(self.batch_size, self.warmup)


# ============================================================================
# Catalog source
# ============================================================================

class GeneratorSpec(BaseModel):
    """Synthetic Iridium-like debris cloud."""
    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=1)
    seed: int = 0
    a_min_km: float = Config.A_MIN_KM
    a_max_km: float = Config.A_MAX_KM
    inc_mean_deg: float = Config.INC_MEAN_DEG
    inc_std_deg: float = Field(Config.INC_STD_DEG, ge=0.0)

    @model_validator(mode="after")
    def check_ranges(self) -> "GeneratorSpec":
        if not self.a_min_km < self.a_max_km:
            raise ValueError(f"Degenerate semi-major axis range [{self.a_min_km}, {self.a_max_km}]")
        if self.a_min_km <= Config.R_EARTH:
            raise ValueError("Semi-major axis range must stay above the Earth radius")
        return self


class CatalogSource(BaseModel):
    """Exactly one of csv_path, tle_path or generator."""
    model_config = ConfigDict(frozen=True)

    csv_path: Optional[Path] = None
    tle_path: Optional[Path] = None
    generator: Optional[GeneratorSpec] = None

    @model_validator(mode="after")
    def exactly_one(self) -> "CatalogSource":
        given = [s for s in (self.csv_path, self.tle_path, self.generator) if s is not None]
        if len(given) != 1:
            raise ValueError("Exactly one catalog source (csv_path, tle_path, generator) is required")
        return self


# ============================================================================
# Run configuration
# ============================================================================

class RunConfig(BaseModel):
    """Everything one CLI invocation needs; mirrors the JSON config file."""

    mission: MissionConfig
    agent: AgentConfig = Field(default_factory=AgentConfig)
    catalog: CatalogSource
    output_dir: Path = Path("runs")
    seeds: List[int] = Field(default_factory=lambda: [0], min_length=1)

    @model_validator(mode="after")
    def check_unique_seeds(self) -> "RunConfig":
        if len(set(self.seeds)) != len(self.seeds):
            raise ValueError("Seed list contains duplicates")
        return self


# ============================================================================
# Result documents
# ============================================================================

class Verdict(BaseModel):
    """Outcome of the exhaustive-search validation protocol."""

    dv_optimal: float
    optimal_sequence: List[int]
    unique: bool
    agent_best_reward: Optional[float] = None
    match: bool = False
    oracle_best_reward: Optional[float] = None
    seed_rewards: Dict[str, float] = Field(default_factory=dict)
    discrepancy: Optional[str] = None


class ComparisonReport(BaseModel):
    """Risk-visible versus risk-masked scenario comparison."""

    seeds: List[int]
    visible_rewards: List[float]
    masked_rewards: List[float]
    visible_mean: float
    masked_mean: float
    u_statistic: float
    p_value: float
    visible_better: bool


class EvalReport(BaseModel):
    """Greedy evaluation of one checkpoint."""

    episodes: int
    mean_reward: float
    std_reward: float
    rewards: List[float]
    first_sequence: List[int]
