# services/environment.py
"""
Removal-step mission MDP.

One transition is one attempted debris capture: the chosen debris is priced
with the transfer simulator, budgets are charged, its flag is set and the
collision-risk list is redrawn. Infeasible actions (budget exceedance or a
revisit) end the episode with reward 0; every feasible removal pays the risk
level the debris carried in the state the action was taken from.

The module exposes pure operations (`reset`, `rand_risk`, `step`,
`encode_state`) and `MissionEnvironment`, a stateful façade that owns one
PCG64 generator and a cost table.
"""

from __future__ import annotations

import logging
from typing import Optional, Sequence, Tuple

import numpy as np

from ..api.models import MissionConfig
from ..core.errors import CatalogError, InvalidActionError, PlannerError
from ..models import (
    START,
    DebrisCatalog,
    MissionState,
    StepOutcome,
    TerminationCause,
    TransferCost,
)
from .costs import CostProvider, CostTable, make_cost_provider

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------
# Pure operations
# ---------------------------------------------------------------------
def rand_risk(
    flags: Sequence[int], config: MissionConfig, rng: np.random.Generator
) -> Tuple[Tuple[int, ...], Optional[int]]:
    """
    Reset every risk to base_risk, then with probability risk_threshold
    raise one uniformly chosen available debris to r_prio.

    Always consumes exactly two uniform draws: branch first, index second.
    """
    risks = [config.base_risk] * len(flags)
    available = [i for i, flag in enumerate(flags) if flag == 0]
    branch_draw = rng.random()
    index_draw = rng.random()

    if not available or not branch_draw < config.risk_threshold:
        return tuple(risks), None

    chosen = available[min(int(index_draw * len(available)), len(available) - 1)]
    risks[chosen] = config.r_prio
    return tuple(risks), chosen


def reset(config: MissionConfig, catalog: DebrisCatalog, rng: np.random.Generator) -> MissionState:
    if len(catalog) != config.n_debris:
        raise CatalogError(
            f"Catalog holds {len(catalog)} debris but the mission expects {config.n_debris}",
            kind="size_mismatch",
        )
    flags = (0,) * config.n_debris
    risks, _ = rand_risk(flags, config, rng)
    return MissionState(
        n_debris_left=config.n_debris,
        dv_left=config.delta_v_max,
        dt_left=config.delta_t_max,
        current_location=START,
        removal_flags=flags,
        collision_risk=risks,
    )


def step(
    state: MissionState,
    action: int,
    config: MissionConfig,
    catalog: DebrisCatalog,
    cost_provider: Optional[CostProvider],
    rng: np.random.Generator,
    *,
    table: Optional[CostTable] = None,
) -> StepOutcome:
    """Apply one removal step. `table`, when given, replaces direct provider calls."""
    n = state.n_debris
    if not 0 <= action < n:
        raise InvalidActionError(f"Action {action} outside [0, {n})")
    if state.n_debris_left == 0:
        raise PlannerError("Cannot step from a terminal state: every debris is removed")

    if state.removal_flags[action] == 1:
        return StepOutcome(state, 0.0, True, TerminationCause.INVALID_REVISIT)

    cost = _leg_cost(state.current_location, action, config, catalog, cost_provider, table)
    if cost.delta_v > state.dv_left:
        return StepOutcome(state, 0.0, True, TerminationCause.DV_EXCEEDED, cost)
    if cost.delta_t > state.dt_left:
        return StepOutcome(state, 0.0, True, TerminationCause.DT_EXCEEDED, cost)

    flags = list(state.removal_flags)
    flags[action] = 1
    risks, _ = rand_risk(flags, config, rng)
    next_state = MissionState(
        n_debris_left=state.n_debris_left - 1,
        dv_left=state.dv_left - cost.delta_v,
        dt_left=state.dt_left - cost.delta_t,
        current_location=action,
        removal_flags=tuple(flags),
        collision_risk=risks,
    )
    reward = float(state.collision_risk[action])
    return StepOutcome(next_state, reward, next_state.n_debris_left == 0, TerminationCause.NONE, cost)


def _leg_cost(
    origin: int,
    target: int,
    config: MissionConfig,
    catalog: DebrisCatalog,
    cost_provider: Optional[CostProvider],
    table: Optional[CostTable],
) -> TransferCost:
    if table is not None:
        return table.cost(origin, target)
    provider = cost_provider or make_cost_provider()
    return CostTable(catalog, provider, config.start_policy, config.parking_elements).cost(origin, target)


def feature_size(n_debris: int) -> int:
    return 3 + (n_debris + 1) + 2 * n_debris


def encode_state(state: MissionState, config: MissionConfig) -> np.ndarray:
    """
    Network input: [n_left/N, dv_left/dv_max, dt_left/dt_max,
    one-hot location (N slots + START), flags, risks/r_prio].
    """
    n = state.n_debris
    vec = np.zeros(feature_size(n), dtype=np.float64)
    vec[0] = state.n_debris_left / n
    vec[1] = state.dv_left / config.delta_v_max
    vec[2] = state.dt_left / config.delta_t_max

    slot = n if state.current_location == START else state.current_location
    vec[3 + slot] = 1.0

    flags_at = 3 + n + 1
    vec[flags_at:flags_at + n] = state.removal_flags

    risks_at = flags_at + n
    if config.risk_visible:
        vec[risks_at:] = np.asarray(state.collision_risk, dtype=np.float64) / config.r_prio
    else:
        vec[risks_at:] = config.base_risk / config.r_prio
    return vec


def valid_action_mask(state: MissionState) -> np.ndarray:
    return np.asarray(state.removal_flags, dtype=np.int8) == 0


# ---------------------------------------------------------------------
# Stateful façade
# ---------------------------------------------------------------------
class MissionEnvironment:
    """
    Single-threaded episode runner.
    Independent instances with their own generators may run in parallel.
    """

    def __init__(
        self,
        config: MissionConfig,
        catalog: DebrisCatalog,
        cost_provider: Optional[CostProvider] = None,
        *,
        rng: Optional[np.random.Generator] = None,
        seed: Optional[int] = None,
        table: Optional[CostTable] = None,
    ) -> None:
        if len(catalog) != config.n_debris:
            raise CatalogError(
                f"Catalog holds {len(catalog)} debris but the mission expects {config.n_debris}",
                kind="size_mismatch",
            )
        self.config = config
        self.catalog = catalog
        if table is None:
            table = CostTable(
                catalog, cost_provider or make_cost_provider(), config.start_policy, config.parking_elements
            )
        self.table = table
        self.rng = rng if rng is not None else np.random.Generator(np.random.PCG64(seed))
        self.state: Optional[MissionState] = None
        self.done = True

    @property
    def n_actions(self) -> int:
        return self.config.n_debris

    @property
    def feature_size(self) -> int:
        return feature_size(self.config.n_debris)

    def reset(self) -> MissionState:
        self.state = reset(self.config, self.catalog, self.rng)
        self.done = False
        return self.state

    def step(self, action: int) -> StepOutcome:
        if self.state is None or self.done:
            raise PlannerError("Episode is over; call reset() first")
        outcome = step(
            self.state, action, self.config, self.catalog, None, self.rng, table=self.table
        )
        self.state = outcome.next_state
        self.done = outcome.terminal
        if outcome.termination_cause is not TerminationCause.NONE:
            logger.debug("Episode ended by %s on action %d", outcome.termination_cause.value, action)
        return outcome

    def features(self, state: Optional[MissionState] = None) -> np.ndarray:
        return encode_state(state or self.state, self.config)

    def valid_mask(self, state: Optional[MissionState] = None) -> np.ndarray:
        return valid_action_mask(state or self.state)
