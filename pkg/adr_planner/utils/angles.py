"""
Angle helpers with no external deps.

Radians everywhere inside the package; degrees only at I/O boundaries.
"""

from __future__ import annotations

import math
from typing import Final

TWO_PI: Final[float] = 2.0 * math.pi


# ---------------------------------------------------------------------
# Normalisation
# ---------------------------------------------------------------------
def wrap_two_pi(angle: float) -> float:
    """Map any angle into [0, 2π)."""
    wrapped = math.fmod(angle, TWO_PI)
    if wrapped < 0.0:
        wrapped += TWO_PI
    # fmod of a tiny negative can round up to exactly 2π
    return 0.0 if wrapped >= TWO_PI else wrapped


def fold_inclination(angle: float) -> float:
    """Map any angle into [0, π]; 360° folds onto 0°, 270° onto 90°."""
    wrapped = wrap_two_pi(angle)
    return TWO_PI - wrapped if wrapped > math.pi else wrapped


# ---------------------------------------------------------------------
# Unit conversion
# ---------------------------------------------------------------------
def deg(rad: float) -> float:
    return math.degrees(rad)


def rad(degrees: float) -> float:
    return math.radians(degrees)
