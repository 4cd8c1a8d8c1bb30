# services/oracle.py
"""
Exhaustive-search ground truth for small catalogs.

Sequences are enumerated in lexicographic order and streamed, never
materialized. Every leg is priced through a `CostTable`, so totals are
accumulated with exactly the arithmetic the mission environment uses.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from typing import Iterator, List, NamedTuple, Optional, Sequence, Tuple

from ..core.config import Config
from ..core.errors import ConfigError, InvalidActionError, OracleLimitError
from ..models import START, DebrisCatalog, OrbitalElements, SequenceEvaluation, StartPolicy
from ..utils.logger import get_logger
from .costs import CostProvider, CostTable

log = get_logger(__name__)

Budgets = Tuple[float, float]  # (delta_v_max km/s, delta_t_max s)


class OptimalSequence(NamedTuple):
    sequence: Tuple[int, ...]
    dv_optimal: float
    unique: bool


class FullDepthResult(NamedTuple):
    best_reward: float
    sequence: Tuple[int, ...]


class _PartitionBand(NamedTuple):
    sequence: Optional[Tuple[int, ...]]  # first sequence in the tie band
    hits: int  # sequences in the band, capped at 2


# ---------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------
def enumerate_sequences(n: int, k: int) -> Iterator[Tuple[int, ...]]:
    """All n!/(n-k)! ordered sequences of k distinct indices, lexicographic."""
    if not 0 < k <= n:
        raise ConfigError(f"Sequence length must satisfy 0 < k <= n, got k={k}, n={n}")
    return itertools.permutations(range(n), k)


def _table_for(
    catalog: DebrisCatalog,
    cost_provider: CostProvider,
    start_policy: StartPolicy,
    parking: Optional[OrbitalElements],
    table: Optional[CostTable],
) -> CostTable:
    if table is not None:
        return table
    return CostTable(catalog, cost_provider, start_policy, parking)


def _guard(n: int, what: str) -> None:
    if n > Config.ORACLE_MAX_N:
        raise OracleLimitError(
            f"{what} refused: catalog holds {n} debris, the limit is {Config.ORACLE_MAX_N}"
        )


# ---------------------------------------------------------------------
# Sequence evaluation
# ---------------------------------------------------------------------
def evaluate_sequence(
    seq: Sequence[int],
    catalog: DebrisCatalog,
    cost_provider: CostProvider,
    start_policy: StartPolicy = StartPolicy.FREE_FIRST_PICK,
    parking: Optional[OrbitalElements] = None,
    *,
    table: Optional[CostTable] = None,
) -> SequenceEvaluation:
    """Totals over consecutive legs, the first leg priced per `start_policy`."""
    n = len(catalog)
    for index in seq:
        if not 0 <= index < n:
            raise InvalidActionError(f"Sequence index {index} outside [0, {n})")
    if len(set(seq)) != len(seq):
        raise InvalidActionError(f"Sequence {tuple(seq)} repeats a debris index")

    table = _table_for(catalog, cost_provider, start_policy, parking, table)
    total_dv = 0.0
    total_dt = 0.0
    location = START
    for index in seq:
        leg = table.cost(location, index)
        total_dv += leg.delta_v
        total_dt += leg.delta_t
        location = index
    return SequenceEvaluation(tuple(seq), total_dv, total_dt, float(len(seq)))


# ---------------------------------------------------------------------
# Minimum-ΔV sequence of length k
# ---------------------------------------------------------------------
def optimal_min_dv(
    catalog: DebrisCatalog,
    k: int,
    cost_provider: CostProvider,
    start_policy: StartPolicy = StartPolicy.FREE_FIRST_PICK,
    parking: Optional[OrbitalElements] = None,
    *,
    tolerance: float = Config.TIE_TOLERANCE,
    workers: Optional[int] = None,
    table: Optional[CostTable] = None,
) -> OptimalSequence:
    """
    Global minimum total ΔV over every length-k sequence.

    Two passes over partitions split by first element: the first finds the
    exact minimum, the second walks sequences in lexicographic order and
    keeps the first one within `tolerance` of it. Reversed sequences tie up
    to summation order, so the band, not the raw float, decides the
    witness. The uniqueness flag is true iff exactly one sequence lies in
    the band.
    """
    n = len(catalog)
    _guard(n, "Minimum-ΔV enumeration")
    if not 0 < k <= n:
        raise ConfigError(f"Sequence length must satisfy 0 < k <= n, got k={k}, n={n}")

    table = _table_for(catalog, cost_provider, start_policy, parking, table).warm()
    n_workers = min(Config.worker_count(workers), n)

    def per_partition(fn):
        if n_workers > 1:
            with ThreadPoolExecutor(max_workers=n_workers) as pool:
                return list(pool.map(fn, range(n)))
        return [fn(first) for first in range(n)]

    best = min(per_partition(lambda first: _partition_min(table, n, k, first)))
    ceiling = best + tolerance
    bands = per_partition(lambda first: _partition_band(table, n, k, first, ceiling))

    witness = next(band.sequence for band in bands if band.sequence is not None)
    unique = sum(band.hits for band in bands) == 1
    log.info("optimal_min_dv", n=n, k=k, dv_optimal=best, sequence=witness, unique=unique)
    return OptimalSequence(witness, best, unique)


def _partition_min(table: CostTable, n: int, k: int, first: int) -> float:
    """Smallest total among sequences starting at `first`; legs are non-negative, so prefixes above it are cut."""
    best = math.inf
    used = [False] * n
    used[first] = True

    def descend(location: int, depth: int, total: float) -> None:
        nonlocal best
        if total > best:
            return
        if depth == k:
            best = total
            return
        for target in range(n):
            if used[target]:
                continue
            used[target] = True
            descend(target, depth + 1, total + table.cost(location, target).delta_v)
            used[target] = False

    descend(first, 1, 0.0 + table.cost(START, first).delta_v)
    return best


def _partition_band(table: CostTable, n: int, k: int, first: int, ceiling: float) -> _PartitionBand:
    """First sequence (lexicographic) with total <= ceiling, and the band count capped at 2."""
    found: Optional[Tuple[int, ...]] = None
    hits = 0
    prefix = [first]
    used = [False] * n
    used[first] = True

    def descend(location: int, total: float) -> bool:
        nonlocal found, hits
        if total > ceiling:
            return False
        if len(prefix) == k:
            hits += 1
            if found is None:
                found = tuple(prefix)
            return hits >= 2
        for target in range(n):
            if used[target]:
                continue
            used[target] = True
            prefix.append(target)
            done = descend(target, total + table.cost(location, target).delta_v)
            prefix.pop()
            used[target] = False
            if done:
                return True
        return False

    descend(first, 0.0 + table.cost(START, first).delta_v)
    return _PartitionBand(found, hits)


# ---------------------------------------------------------------------
# Full-depth search under budgets
# ---------------------------------------------------------------------
def _removal_rewards(catalog: DebrisCatalog, risk_off: bool) -> List[float]:
    if risk_off:
        return [1.0] * len(catalog)
    return [float(entry.initial_risk) for entry in catalog]


def full_depth_best_reward(
    catalog: DebrisCatalog,
    budgets: Budgets,
    cost_provider: CostProvider,
    risk_off: bool = True,
    start_policy: StartPolicy = StartPolicy.FREE_FIRST_PICK,
    parking: Optional[OrbitalElements] = None,
    *,
    table: Optional[CostTable] = None,
) -> FullDepthResult:
    """
    Depth-first search over every feasible prefix under (ΔV_max, ΔT_max).

    A leg is cut exactly when the environment would terminate on it, and
    budgets are charged by the same subtraction, so replaying the witness
    through the environment reproduces it step for step.
    """
    n = len(catalog)
    _guard(n, "Full-depth search")
    dv_max, dt_max = budgets
    table = _table_for(catalog, cost_provider, start_policy, parking, table)
    rewards = _removal_rewards(catalog, risk_off)
    ceiling = sum(rewards)

    best = 0.0
    best_seq: Tuple[int, ...] = ()
    prefix: List[int] = []
    used = [False] * n

    def descend(location: int, dv_left: float, dt_left: float, earned: float) -> bool:
        nonlocal best, best_seq
        if earned > best:
            best, best_seq = earned, tuple(prefix)
            if best >= ceiling:
                return True
        for target in range(n):
            if used[target]:
                continue
            leg = table.cost(location, target)
            if leg.delta_v > dv_left or leg.delta_t > dt_left:
                continue
            used[target] = True
            prefix.append(target)
            done = descend(target, dv_left - leg.delta_v, dt_left - leg.delta_t, earned + rewards[target])
            prefix.pop()
            used[target] = False
            if done:
                return True
        return False

    descend(START, dv_max, dt_max, 0.0)
    log.info("full_depth_best_reward", n=n, best_reward=best, sequence=best_seq)
    return FullDepthResult(best, best_seq)


def longest_feasible_bfs(
    catalog: DebrisCatalog,
    budgets: Budgets,
    cost_provider: CostProvider,
    start_policy: StartPolicy = StartPolicy.FREE_FIRST_PICK,
    parking: Optional[OrbitalElements] = None,
    *,
    table: Optional[CostTable] = None,
) -> int:
    """Breadth-first length of the longest feasible sequence (cross-check for small n)."""
    n = len(catalog)
    _guard(n, "Breadth-first enumeration")
    dv_max, dt_max = budgets
    table = _table_for(catalog, cost_provider, start_policy, parking, table)

    longest = 0
    frontier = deque([((), START, dv_max, dt_max)])
    while frontier:
        seq, location, dv_left, dt_left = frontier.popleft()
        longest = max(longest, len(seq))
        for target in range(n):
            if target in seq:
                continue
            leg = table.cost(location, target)
            if leg.delta_v > dv_left or leg.delta_t > dt_left:
                continue
            frontier.append((seq + (target,), target, dv_left - leg.delta_v, dt_left - leg.delta_t))
    return longest
