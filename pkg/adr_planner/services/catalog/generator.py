# services/catalog/generator.py
"""Synthetic Iridium-like debris cloud, deterministic per seed."""

from __future__ import annotations

import math
from typing import Optional

import numpy as np

from ...api.models import GeneratorSpec
from ...core.errors import ConfigError
from ...models import DebrisCatalog, DebrisEntry, OrbitalElements
from ...utils.angles import TWO_PI
from ...utils.logger import get_logger

log = get_logger(__name__)


def generate_cloud(n: int, seed: int = 0, spec: Optional[GeneratorSpec] = None) -> DebrisCatalog:
    """
    Draw n debris from one PCG64 stream: a uniform in the range, i normal
    around the mean, omega and nu uniform in [0, 2π). Each quantity is drawn
    as a full vector in that order.
    """
    if n < 1:
        raise ConfigError(f"Cloud size must be at least 1, got {n}")
    spec = spec or GeneratorSpec(n=n, seed=seed)

    rng = np.random.Generator(np.random.PCG64(seed))
    a = rng.uniform(spec.a_min_km, spec.a_max_km, n)
    inc = rng.normal(math.radians(spec.inc_mean_deg), math.radians(spec.inc_std_deg), n)
    omega = rng.uniform(0.0, TWO_PI, n)
    nu = rng.uniform(0.0, TWO_PI, n)

    width = max(4, len(str(n)))
    entries = tuple(
        DebrisEntry(
            f"DEB-{idx:0{width}d}",
            OrbitalElements(float(a[idx]), float(inc[idx]), float(omega[idx]), float(nu[idx])),
        )
        for idx in range(n)
    )
    log.debug("cloud_generated", n=n, seed=seed)
    return DebrisCatalog(entries)
