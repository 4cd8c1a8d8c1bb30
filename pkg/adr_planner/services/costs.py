# services/costs.py
"""
Cost-provider plumbing shared by the environment and the oracle.

A cost provider is any function from an ordered element pair to a
TransferCost; tests inject stubs. `CostTable` memoizes a provider over a
catalog's index pairs so repeated episodes and enumerations price each leg
once, with exactly the provider's arithmetic.
"""

from __future__ import annotations

import logging
from functools import partial
from typing import Callable, Dict, Optional, Tuple

from ..models import (
    START,
    ZERO_COST,
    DebrisCatalog,
    GravConstants,
    OrbitalElements,
    StartPolicy,
    TransferCost,
)
from .orbits import transfer_cost

CostProvider = Callable[[OrbitalElements, OrbitalElements], TransferCost]

logger = logging.getLogger(__name__)


def make_cost_provider(consts: GravConstants = GravConstants()) -> CostProvider:
    """The three-maneuver simulator bound to a gravity model."""
    return partial(_priced, consts=consts)


def _priced(origin: OrbitalElements, target: OrbitalElements, *, consts: GravConstants) -> TransferCost:
    return transfer_cost(origin, target, consts)


class CostTable:
    """Lazy (from, to) → TransferCost cache over one catalog."""

    def __init__(
        self,
        catalog: DebrisCatalog,
        provider: CostProvider,
        start_policy: StartPolicy = StartPolicy.FREE_FIRST_PICK,
        parking_orbit: Optional[OrbitalElements] = None,
    ) -> None:
        if start_policy is StartPolicy.PARKING_ORBIT and parking_orbit is None:
            raise ValueError("Parking-orbit start requires parking orbit elements")
        self.catalog = catalog
        self.provider = provider
        self.start_policy = start_policy
        self.parking_orbit = parking_orbit
        self._cache: Dict[Tuple[int, int], TransferCost] = {}

    def __len__(self) -> int:
        return len(self.catalog)

    def cost(self, origin: int, target: int) -> TransferCost:
        """Cost of moving from `origin` (an index or START) to `target`."""
        key = (origin, target)
        cached = self._cache.get(key)
        if cached is not None:
            return cached

        if origin == START:
            if self.start_policy is StartPolicy.FREE_FIRST_PICK:
                priced = ZERO_COST
            else:
                priced = self.provider(self.parking_orbit, self.catalog[target].elements)
        else:
            priced = self.provider(self.catalog[origin].elements, self.catalog[target].elements)

        self._cache[key] = priced
        return priced

    def warm(self) -> "CostTable":
        """Price every leg up front; used before fanning work out to threads."""
        n = len(self.catalog)
        for target in range(n):
            self.cost(START, target)
            for origin in range(n):
                if origin != target:
                    self.cost(origin, target)
        logger.debug("Cost table warmed for %d debris", n)
        return self
