"""Exhaustive-search oracle checks."""

import math

import numpy as np
import pytest

from adr_planner.api.models import MissionConfig
from adr_planner.core.config import Config
from adr_planner.core.errors import ConfigError, InvalidActionError, OracleLimitError
from adr_planner.models import OrbitalElements, StartPolicy, TerminationCause
from adr_planner.services.costs import CostTable, make_cost_provider
from adr_planner.services.environment import MissionEnvironment
from adr_planner.services.oracle import (
    enumerate_sequences,
    evaluate_sequence,
    full_depth_best_reward,
    longest_feasible_bfs,
    optimal_min_dv,
)

from conftest import altitude_cost, make_catalog, unit_cost

PROVIDER = make_cost_provider()


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("n", range(1, 9))
def test_sequence_count_is_falling_factorial(n):
    for k in range(1, n + 1):
        seqs = list(enumerate_sequences(n, k))
        assert len(seqs) == math.factorial(n) // math.factorial(n - k)
        assert all(len(set(s)) == k for s in seqs)
        assert len(set(seqs)) == len(seqs)


def test_enumeration_examples():
    assert sum(1 for _ in enumerate_sequences(10, 5)) == 30240
    assert list(enumerate_sequences(1, 1)) == [(0,)]
    assert list(enumerate_sequences(3, 2))[:3] == [(0, 1), (0, 2), (1, 0)]


@pytest.mark.parametrize("n, k", [(3, 4), (3, 0)])
def test_enumeration_rejects_bad_length(n, k):
    with pytest.raises(ConfigError):
        enumerate_sequences(n, k)


# ---------------------------------------------------------------------------
# Sequence evaluation
# ---------------------------------------------------------------------------

def test_single_element_free_first_pick_costs_nothing(small_catalog):
    ev = evaluate_sequence((2,), small_catalog, PROVIDER)
    assert (ev.total_dv, ev.total_dt) == (0.0, 0.0)


def test_unit_cost_totals():
    catalog = make_catalog([7000.0, 7050.0, 7100.0, 7150.0])
    ev = evaluate_sequence((3, 1, 0, 2), catalog, unit_cost)
    assert ev.total_dv == 3.0 and ev.total_dt == 3.0


def test_parking_orbit_prices_first_leg(small_catalog):
    parking = OrbitalElements.from_degrees(6800.0, 0.0, 0.0, 0.0)
    ev = evaluate_sequence((0,), small_catalog, unit_cost, StartPolicy.PARKING_ORBIT, parking)
    assert ev.total_dv == 1.0


def test_parking_orbit_charges_start_leg_on_every_sequence(small_catalog):
    parking = OrbitalElements.from_degrees(6800.0, 0.0, 0.0, 0.0)
    charged = evaluate_sequence((0, 1, 2), small_catalog, unit_cost, StartPolicy.PARKING_ORBIT, parking)
    free = evaluate_sequence((0, 1, 2), small_catalog, unit_cost)
    assert charged.total_dv == 3.0 and charged.total_dt == 3.0
    assert free.total_dv == 2.0


def test_evaluate_rejects_bad_sequences(small_catalog):
    with pytest.raises(InvalidActionError):
        evaluate_sequence((0, 0), small_catalog, unit_cost)
    with pytest.raises(InvalidActionError):
        evaluate_sequence((0, 5), small_catalog, unit_cost)


# ---------------------------------------------------------------------------
# Minimum ΔV
# ---------------------------------------------------------------------------

def test_monotone_altitude_order_is_optimal():
    catalog = make_catalog([7200.0, 7000.0, 7100.0])
    best = optimal_min_dv(catalog, 3, altitude_cost)
    # ascending (1, 2, 0) and descending (0, 2, 1) both cost 2; lexicographic witness is (0, 2, 1)
    assert best.sequence == (0, 2, 1)
    assert best.dv_optimal == pytest.approx(2.0)
    assert best.unique is False


def test_symmetric_catalog_is_not_unique():
    catalog = make_catalog([7000.0, 7000.0], incs_deg=[85.0, 87.0])
    best = optimal_min_dv(catalog, 2, PROVIDER)
    assert best.unique is False


def test_free_first_pick_ties_reversed_pairs():
    catalog = make_catalog([7000.0, 7100.0, 7300.0])
    best = optimal_min_dv(catalog, 2, altitude_cost)
    # 7000 -> 7100 and 7100 -> 7000 both cost 1
    assert best.dv_optimal == 1.0
    assert best.sequence == (0, 1)
    assert best.unique is False
    single = optimal_min_dv(catalog, 1, altitude_cost)
    assert single.dv_optimal == 0.0 and single.sequence == (0,)


def test_unique_minimum_from_parking_orbit():
    catalog = make_catalog([7000.0, 7100.0, 7300.0])
    parking = OrbitalElements.from_degrees(6900.0, 0.0, 0.0, 0.0)
    best = optimal_min_dv(catalog, 2, altitude_cost, StartPolicy.PARKING_ORBIT, parking)
    assert best.sequence == (0, 1)
    assert best.dv_optimal == 2.0
    assert best.unique is True


def test_minimum_below_random_samples_and_threads_agree(monkeypatch):
    catalog = make_catalog(
        [7050.0 + 25 * i for i in range(8)],
        incs_deg=[86.0 + 0.13 * ((i * 5) % 8) for i in range(8)],
        phases_deg=[45.0 * i for i in range(8)],
    )
    monkeypatch.setenv("ADR_PLANNER_THREADS", "1")
    serial = optimal_min_dv(catalog, 4, PROVIDER)
    monkeypatch.setenv("ADR_PLANNER_THREADS", "4")
    threaded = optimal_min_dv(catalog, 4, PROVIDER, workers=4)
    assert serial == threaded

    table = CostTable(catalog, PROVIDER)
    rng = np.random.Generator(np.random.PCG64(0))
    for _ in range(1000):
        seq = tuple(int(i) for i in rng.permutation(8)[:4])
        assert evaluate_sequence(seq, catalog, PROVIDER, table=table).total_dv >= serial.dv_optimal
    assert evaluate_sequence(serial.sequence, catalog, PROVIDER, table=table).total_dv == serial.dv_optimal


@pytest.mark.parametrize("start_policy", list(StartPolicy))
def test_witness_is_first_sequence_within_tolerance(start_policy):
    parking = OrbitalElements.from_degrees(7000.0, 86.0, 0.0, 0.0)
    rng = np.random.Generator(np.random.PCG64(42))
    for _ in range(25):
        catalog = make_catalog(
            list(rng.uniform(7050.0, 7250.0, 6)),
            incs_deg=list(rng.normal(86.4, 0.5, 6)),
            phases_deg=list(rng.uniform(0.0, 360.0, 6)),
        )
        table = CostTable(catalog, PROVIDER, start_policy, parking)
        totals = [
            (seq, evaluate_sequence(seq, catalog, PROVIDER, table=table).total_dv)
            for seq in enumerate_sequences(6, 4)
        ]
        minimum = min(total for _, total in totals)
        band = [seq for seq, total in totals if total <= minimum + Config.TIE_TOLERANCE]
        best = optimal_min_dv(catalog, 4, PROVIDER, start_policy, parking, table=table, workers=1)
        assert best.dv_optimal == minimum
        assert best.sequence == band[0]
        assert best.unique == (len(band) == 1)


def test_oracle_guard():
    catalog = make_catalog([7000.0 + 10 * i for i in range(13)])
    with pytest.raises(OracleLimitError):
        optimal_min_dv(catalog, 2, unit_cost)
    with pytest.raises(OracleLimitError):
        full_depth_best_reward(catalog, (1.0, 1.0), unit_cost)


# ---------------------------------------------------------------------------
# Full-depth search
# ---------------------------------------------------------------------------

def test_unit_cost_budget_2_5_reaches_three(small_catalog):
    result = full_depth_best_reward(small_catalog, (2.5, 1e9), unit_cost)
    assert result.best_reward == 3.0
    assert result.sequence == (0, 1, 2)


def test_parking_orbit_budget_below_first_leg():
    parking = OrbitalElements.from_degrees(6800.0, 0.0, 0.0, 0.0)
    result = full_depth_best_reward(
        make_catalog([7000.0, 7100.0]), (0.5, 1e9), unit_cost, True, StartPolicy.PARKING_ORBIT, parking
    )
    assert result == (0.0, ())


def test_optimal_budget_gives_length_k():
    catalog = make_catalog(
        [7050.0 + 30 * i for i in range(7)], incs_deg=[86.0 + 0.2 * i for i in range(7)],
        phases_deg=[50.0 * i for i in range(7)],
    )
    best = optimal_min_dv(catalog, 4, PROVIDER)
    result = full_depth_best_reward(catalog, (best.dv_optimal * (1 + 1e-9), 1e12), PROVIDER)
    assert result.best_reward == 4.0


def test_risk_weighted_search_uses_initial_risk():
    from adr_planner.models import DebrisCatalog, DebrisEntry

    base = make_catalog([7000.0, 7100.0, 7200.0])
    weighted = DebrisCatalog(
        tuple(DebrisEntry(e.debris_id, e.elements, r) for e, r in zip(base, (1, 5, 1)))
    )
    result = full_depth_best_reward(weighted, (1.0, 1e9), unit_cost, risk_off=False)
    assert result.best_reward == 6.0
    assert 1 in result.sequence


def test_dfs_matches_bfs_on_random_small_catalogs():
    rng = np.random.Generator(np.random.PCG64(21))
    for _ in range(20):
        n = int(rng.integers(2, 7))
        catalog = make_catalog(
            list(rng.uniform(7050.0, 7250.0, n)),
            incs_deg=list(rng.normal(86.4, 0.5, n)),
            phases_deg=list(rng.uniform(0.0, 360.0, n)),
        )
        budgets = (float(rng.uniform(0.05, 1.5)), float(rng.uniform(2e4, 5e5)))
        table = CostTable(catalog, PROVIDER)
        dfs = full_depth_best_reward(catalog, budgets, PROVIDER, table=table)
        assert dfs.best_reward == longest_feasible_bfs(catalog, budgets, PROVIDER, table=table)


# ---------------------------------------------------------------------------
# Oracle / environment agreement
# ---------------------------------------------------------------------------

def test_witness_replays_exactly_through_environment():
    rng = np.random.Generator(np.random.PCG64(5))
    for _ in range(20):
        n = int(rng.integers(2, 7))
        catalog = make_catalog(
            list(rng.uniform(7050.0, 7250.0, n)),
            incs_deg=list(rng.normal(86.4, 0.5, n)),
            phases_deg=list(rng.uniform(0.0, 360.0, n)),
        )
        budgets = (float(rng.uniform(0.05, 1.5)), float(rng.uniform(2e4, 5e5)))
        mission = MissionConfig(
            n_debris=n, delta_v_max=budgets[0], delta_t_max=budgets[1], risk_threshold=0.0
        )
        table = CostTable(catalog, PROVIDER)
        result = full_depth_best_reward(catalog, budgets, PROVIDER, table=table)
        oracle = evaluate_sequence(result.sequence, catalog, PROVIDER, table=table)

        env = MissionEnvironment(mission, catalog, table=table, seed=0)
        env.reset()
        reward, dv, dt = 0.0, 0.0, 0.0
        for action in result.sequence:
            outcome = env.step(action)
            assert outcome.termination_cause is TerminationCause.NONE
            reward += outcome.reward
            dv += outcome.cost.delta_v
            dt += outcome.cost.delta_t
        assert reward == result.best_reward
        assert (dv, dt) == (oracle.total_dv, oracle.total_dt)
