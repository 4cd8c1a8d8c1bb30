# models.py
"""
Domain types shared by the orbit model, the mission environment, the
learner and the exhaustive-search oracle.

All types are frozen: catalogs, states and costs are immutable values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Optional, Tuple

import numpy as np

from .core.config import Config
from .core.errors import CatalogError, DomainError
from .utils.angles import fold_inclination, rad, wrap_two_pi

START: int = -1  # current_location before the first removal


class StartPolicy(str, Enum):
    FREE_FIRST_PICK = "free_first_pick"
    PARKING_ORBIT = "parking_orbit"


class TerminationCause(str, Enum):
    NONE = "none"
    DV_EXCEEDED = "dv_exceeded"
    DT_EXCEEDED = "dt_exceeded"
    INVALID_REVISIT = "invalid_revisit"


# ============================================================================
# Orbits
# ============================================================================

@dataclass(frozen=True, slots=True)
class OrbitalElements:
    """Circular-orbit state of one body: a [km], i / omega / nu [rad]."""

    a: float
    i: float
    omega: float
    nu: float

    def __post_init__(self) -> None:
        values = (self.a, self.i, self.omega, self.nu)
        if not all(math.isfinite(v) for v in values):
            raise DomainError(f"Orbital elements must be finite, got {values}")
        if self.a <= Config.R_EARTH:
            raise DomainError(
                f"Semi-major axis {self.a} km is not above the Earth radius {Config.R_EARTH} km"
            )
        object.__setattr__(self, "i", fold_inclination(self.i))
        object.__setattr__(self, "omega", wrap_two_pi(self.omega))
        object.__setattr__(self, "nu", wrap_two_pi(self.nu))

    @classmethod
    def from_degrees(cls, a: float, i_deg: float, omega_deg: float, nu_deg: float) -> "OrbitalElements":
        return cls(a=a, i=rad(i_deg), omega=rad(omega_deg), nu=rad(nu_deg))

    @property
    def phase(self) -> float:
        """In-plane phase u = omega + nu, the only meaningful angle on a circle."""
        return wrap_two_pi(self.omega + self.nu)


@dataclass(frozen=True, slots=True)
class GravConstants:
    mu: float = Config.MU_EARTH
    r_earth: float = Config.R_EARTH

    def __post_init__(self) -> None:
        if not self.mu > 0:
            raise DomainError(f"Gravitational parameter must be positive, got {self.mu}")


@dataclass(frozen=True, slots=True)
class TransferCost:
    delta_v: float  # km/s
    delta_t: float  # s

    def __post_init__(self) -> None:
        if self.delta_v < 0 or self.delta_t < 0:
            raise DomainError(f"Transfer cost cannot be negative: {self.delta_v}, {self.delta_t}")


ZERO_COST = TransferCost(0.0, 0.0)


# ============================================================================
# Catalog
# ============================================================================

@dataclass(frozen=True, slots=True)
class DebrisEntry:
    debris_id: str
    elements: OrbitalElements
    initial_risk: int = 1


@dataclass(frozen=True)
class DebrisCatalog:
    """Ordered debris list; position in the list is the action index."""

    entries: Tuple[DebrisEntry, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", tuple(self.entries))
        seen: set[str] = set()
        for entry in self.entries:
            if entry.debris_id in seen:
                raise CatalogError(f"Duplicate debris id {entry.debris_id!r}", kind="duplicate_id")
            seen.add(entry.debris_id)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[DebrisEntry]:
        return iter(self.entries)

    def __getitem__(self, index: int) -> DebrisEntry:
        return self.entries[index]

    @property
    def ids(self) -> Tuple[str, ...]:
        return tuple(e.debris_id for e in self.entries)

    @property
    def elements(self) -> Tuple[OrbitalElements, ...]:
        return tuple(e.elements for e in self.entries)


# ============================================================================
# Mission MDP
# ============================================================================

@dataclass(frozen=True, slots=True)
class MissionState:
    n_debris_left: int
    dv_left: float
    dt_left: float
    current_location: int
    removal_flags: Tuple[int, ...]
    collision_risk: Tuple[int, ...]

    @property
    def n_debris(self) -> int:
        return len(self.removal_flags)


@dataclass(frozen=True, slots=True)
class StepOutcome:
    next_state: MissionState
    reward: float
    terminal: bool
    termination_cause: TerminationCause = TerminationCause.NONE
    cost: Optional[TransferCost] = None


# ============================================================================
# Learner / oracle records
# ============================================================================

@dataclass(frozen=True, slots=True)
class Experience:
    state: np.ndarray
    action: int
    reward: float
    next_state: np.ndarray
    done: bool


@dataclass(frozen=True, slots=True)
class SequenceEvaluation:
    sequence: Tuple[int, ...]
    total_dv: float
    total_dt: float
    total_reward: float = field(default=0.0)
