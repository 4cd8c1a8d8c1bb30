# services/orbits.py
"""
High-thrust transfer cost model between two circular orbits.

A transfer is priced as three sequential legs:
  1. impulsive plane change of |Δi|, flown on the higher of the two circular
     orbits (before departure when descending, after arrival when climbing),
  2. two-burn Hohmann transfer between the circular radii,
  3. fuel-free phasing coast that closes the in-plane phase gap.

Everything here is a pure function of immutable inputs.
"""

from __future__ import annotations

import math
from typing import NamedTuple

from ..core.config import Config
from ..core.errors import DomainError
from ..models import GravConstants, OrbitalElements, TransferCost
from ..utils.angles import TWO_PI, wrap_two_pi


class HohmannLegs(NamedTuple):
    dv_depart: float
    dv_arrive: float
    time: float

    @property
    def total_dv(self) -> float:
        return self.dv_depart + self.dv_arrive


# ---------------------------------------------------------------------
# Elementary relations
# ---------------------------------------------------------------------
def circular_speed(a: float, mu: float = Config.MU_EARTH) -> float:
    if not a > 0:
        raise DomainError(f"Radius must be positive, got {a}")
    return math.sqrt(mu / a)


def mean_motion(a: float, mu: float = Config.MU_EARTH) -> float:
    """Angular rate [rad/s] of a circular orbit."""
    if not a > 0:
        raise DomainError(f"Radius must be positive, got {a}")
    return math.sqrt(mu / a**3)


def orbital_period(a: float, mu: float = Config.MU_EARTH) -> float:
    return TWO_PI / mean_motion(a, mu)


# ---------------------------------------------------------------------
# Maneuver legs
# ---------------------------------------------------------------------
def plane_change_dv(v: float, delta_i: float) -> float:
    if v < 0:
        raise DomainError(f"Speed must be non-negative, got {v}")
    if not 0.0 <= delta_i <= math.pi:
        raise DomainError(f"Inclination change {delta_i} rad outside [0, pi]")
    return 2.0 * v * math.sin(delta_i / 2.0)


def hohmann(a1: float, a2: float, mu: float = Config.MU_EARTH) -> HohmannLegs:
    if a1 <= Config.R_EARTH or a2 <= Config.R_EARTH:
        raise DomainError(f"Hohmann radii must exceed the Earth radius, got {a1}, {a2}")
    a_sum = a1 + a2
    dv_depart = math.sqrt(mu / a1) * abs(math.sqrt(2.0 * a2 / a_sum) - 1.0)
    dv_arrive = math.sqrt(mu / a2) * abs(1.0 - math.sqrt(2.0 * a1 / a_sum))
    time = math.pi * math.sqrt((a_sum / 2.0) ** 3 / mu)
    return HohmannLegs(dv_depart, dv_arrive, time)


def phasing_time(
    a_from: float,
    a_to: float,
    phase_gap: float,
    mu: float = Config.MU_EARTH,
    tolerance: float = Config.PHASING_TOLERANCE,
) -> float:
    """
    Coast time until the chaser catches up the target's in-plane phase.

    `phase_gap` is (u_target - u_chaser) mod 2π. A faster chaser closes it
    forwards; a slower one waits for the target to lap it, which leaves the
    complementary gap to close. Equal rates never close the gap, so one full
    period of the departure orbit is charged instead.
    """
    if not 0.0 <= phase_gap < TWO_PI:
        raise DomainError(f"Phase gap {phase_gap} rad outside [0, 2pi)")
    n_from = mean_motion(a_from, mu)
    n_to = mean_motion(a_to, mu)
    rate = n_from - n_to
    if abs(rate) <= tolerance:
        return TWO_PI / n_from
    gap = phase_gap if rate > 0 else wrap_two_pi(TWO_PI - phase_gap)
    return gap / abs(rate)


# ---------------------------------------------------------------------
# Full transfer
# ---------------------------------------------------------------------
def transfer_cost(
    origin: OrbitalElements,
    target: OrbitalElements,
    consts: GravConstants = GravConstants(),
) -> TransferCost:
    """
    Price one debris-to-debris transfer; deterministic and ΔV-symmetric.

    The plane change is flown at circular_speed(max(origin.a, target.a)),
    the slower of the two circular orbits, not at the departure radius. That
    keeps ΔV unchanged when origin and target are swapped; for equal radii it
    is the departure speed.
    """
    mu = consts.mu
    delta_i = abs(target.i - origin.i)
    dv_plane = plane_change_dv(circular_speed(max(origin.a, target.a), mu), delta_i)

    if origin.a == target.a:
        # same radius: no Hohmann burns and no coast
        dv_inplane, t_coast = 0.0, 0.0
    else:
        legs = hohmann(origin.a, target.a, mu)
        dv_inplane, t_coast = legs.total_dv, legs.time

    gap = wrap_two_pi(target.phase - origin.phase)
    t_phase = phasing_time(origin.a, target.a, gap, mu)
    return TransferCost(delta_v=dv_plane + dv_inplane, delta_t=t_phase + t_coast)
