"""
Shared fixtures for the planner test-suite.

Puts the repository root on sys.path and keeps log files out of the user's
home directory.
"""

import os
import sys
from pathlib import Path

import numpy as np
import pytest

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT))
os.environ.setdefault("ADR_PLANNER_LOG_TO_FILE", "0")

from adr_planner.api.models import MissionConfig  # noqa: E402
from adr_planner.models import (  # noqa: E402
    DebrisCatalog,
    DebrisEntry,
    OrbitalElements,
    TransferCost,
)


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long acceptance runs (deselect with -m 'not slow')")


# ---------------------------------------------------------------------------
# Catalog helpers
# ---------------------------------------------------------------------------

def make_catalog(radii, incs_deg=None, phases_deg=None) -> DebrisCatalog:
    """Catalog with one debris per radius; ids D0, D1, ..."""
    n = len(radii)
    incs_deg = incs_deg or [0.0] * n
    phases_deg = phases_deg or [0.0] * n
    return DebrisCatalog(
        tuple(
            DebrisEntry(f"D{i}", OrbitalElements.from_degrees(a, inc, 0.0, nu))
            for i, (a, inc, nu) in enumerate(zip(radii, incs_deg, phases_deg))
        )
    )


def unit_cost(origin: OrbitalElements, target: OrbitalElements) -> TransferCost:
    """Every leg costs ΔV = 1 km/s and ΔT = 1 s."""
    return TransferCost(1.0, 1.0)


def altitude_cost(origin: OrbitalElements, target: OrbitalElements) -> TransferCost:
    """ΔV proportional to the radius difference (1 km/s per 100 km)."""
    return TransferCost(abs(target.a - origin.a) / 100.0, 1.0)


@pytest.fixture
def rng():
    return np.random.Generator(np.random.PCG64(1234))


@pytest.fixture
def small_catalog():
    return make_catalog([7000.0, 7100.0, 7200.0])


@pytest.fixture
def unit_mission():
    def build(n: int, dv: float = 2.5, dt: float = 1e6, **extra) -> MissionConfig:
        return MissionConfig(n_debris=n, delta_v_max=dv, delta_t_max=dt, **extra)

    return build
