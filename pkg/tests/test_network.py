"""Q-network, TD target, loss, gradient, replay and action-selection checks."""

import numpy as np
import pytest

from adr_planner.core.errors import DimensionError
from adr_planner.models import Experience
from adr_planner.services.learner import (
    Batch,
    EpsilonSchedule,
    QNetworkParams,
    ReplayBuffer,
    Sgd,
    backward,
    forward,
    init_params,
    load_checkpoint,
    loss,
    save_checkpoint,
    select_action,
    td_target,
    td_targets,
)


def _zeros(d=3, h=(4, 4), n=2):
    return QNetworkParams(
        [np.zeros((d, h[0])), np.zeros((h[0], h[1])), np.zeros((h[1], n))],
        [np.zeros(h[0]), np.zeros(h[1]), np.zeros(n)],
    )


def _random_batch(rng, size, d, n):
    return Batch(
        rng.standard_normal((size, d)),
        rng.integers(0, n, size),
        rng.standard_normal(size),
        rng.standard_normal((size, d)),
        rng.random(size) < 0.3,
    )


# ---------------------------------------------------------------------------
# Forward
# ---------------------------------------------------------------------------

def test_zero_network_outputs_zero():
    assert np.array_equal(forward(_zeros(), np.ones(3)), np.zeros(2))


def test_hand_traced_single_path():
    # x -> 2x -> 3(2x) -> 0.5·6x + 1
    params = QNetworkParams(
        [np.array([[2.0]]), np.array([[3.0]]), np.array([[0.5]])],
        [np.zeros(1), np.zeros(1), np.array([1.0])],
    )
    assert forward(params, np.array([1.5]))[0] == pytest.approx(0.5 * 6 * 1.5 + 1.0)
    # negative pre-activation is cut by the rectifier
    assert forward(params, np.array([-1.5]))[0] == 1.0


def test_forward_rejects_wrong_width():
    with pytest.raises(DimensionError):
        forward(_zeros(d=3), np.ones(4))


# ---------------------------------------------------------------------------
# TD targets and loss
# ---------------------------------------------------------------------------

def test_td_target_branches():
    params = _zeros(d=3, n=2)
    params.biases[2][:] = [2.0, -1.0]  # max target Q = 2
    s = np.zeros(3)
    assert td_target(Experience(s, 0, 10.0, s, True), params, 0.9) == 10.0
    assert td_target(Experience(s, 0, 1.0, s, False), params, 0.9) == pytest.approx(2.8)
    assert td_target(Experience(s, 0, 1.0, s, False), params, 0.0) == 1.0


def test_td_targets_done_and_zero_gamma_are_reward():
    rng = np.random.Generator(np.random.PCG64(3))
    params = init_params(5, (8, 8), 3, rng)
    for _ in range(100):
        batch = _random_batch(rng, 16, 5, 3)
        y = td_targets(batch, params, 0.95)
        assert np.array_equal(y[batch.dones], batch.rewards[batch.dones])
        assert np.array_equal(td_targets(batch, params, 0.0), batch.rewards)


def test_loss_examples():
    params = _zeros(d=1, h=(1, 1), n=1)
    params.biases[2][:] = 1.0  # Q = 1 everywhere
    one = Batch(np.zeros((1, 1)), np.array([0]), np.zeros(1), np.zeros((1, 1)), np.array([True]))
    assert loss(one, params, np.array([1.0])) == 0.0
    assert loss(one, params, np.array([2.0])) == 1.0
    two = Batch(np.zeros((2, 1)), np.array([0, 0]), np.zeros(2), np.zeros((2, 1)), np.array([True, True]))
    assert loss(two, params, np.array([2.0, 4.0])) == 5.0


def test_empty_batch_rejected():
    empty = Batch(np.zeros((0, 3)), np.zeros(0, dtype=int), np.zeros(0), np.zeros((0, 3)), np.zeros(0, bool))
    with pytest.raises(DimensionError):
        loss(empty, _zeros(), np.zeros(0))


# ---------------------------------------------------------------------------
# Gradients
# ---------------------------------------------------------------------------

def test_zero_loss_gives_zero_gradient():
    rng = np.random.Generator(np.random.PCG64(0))
    params = init_params(4, (6, 6), 3, rng)
    batch = _random_batch(rng, 8, 4, 3)
    targets = forward(params, batch.states)[np.arange(8), batch.actions]
    value, grads = backward(params, batch, targets)
    assert value == 0.0
    assert np.all(grads.flat() == 0.0)


def test_only_selected_output_gets_gradient():
    rng = np.random.Generator(np.random.PCG64(1))
    params = init_params(4, (5, 5), 3, rng)
    batch = _random_batch(rng, 1, 4, 3)
    _, grads = backward(params, batch, np.array([7.0]))
    others = [a for a in range(3) if a != batch.actions[0]]
    assert np.all(grads.weights[2][:, others] == 0.0)
    assert np.all(grads.biases[2][others] == 0.0)


def test_gradient_matches_central_differences():
    rng = np.random.Generator(np.random.PCG64(2024))
    h = 1e-5
    worst = 0.0
    for _ in range(10):
        d, h1, h2, n = (int(v) for v in rng.integers(2, 6, 4))
        params = init_params(d, (h1, h2), n, rng)
        batch = _random_batch(rng, 6, d, n)
        targets = rng.standard_normal(6)
        _, grads = backward(params, batch, targets)

        theta = params.flat()
        numeric = np.empty_like(theta)
        for j in range(theta.size):
            plus, minus = theta.copy(), theta.copy()
            plus[j] += h
            minus[j] -= h
            numeric[j] = (
                loss(batch, params.with_flat(plus), targets) - loss(batch, params.with_flat(minus), targets)
            ) / (2 * h)
        analytic = grads.flat()
        err = np.linalg.norm(analytic - numeric) / (np.linalg.norm(analytic) + np.linalg.norm(numeric))
        worst = max(worst, err)
    assert worst < 1e-4


def test_frozen_batch_loss_decreases_monotonically():
    rng = np.random.Generator(np.random.PCG64(8))
    params = init_params(4, (16, 16), 3, rng)
    batch = _random_batch(rng, 32, 4, 3)
    targets = rng.standard_normal(32)
    opt = Sgd(1e-3)
    previous = np.inf
    for _ in range(100):
        value, grads = backward(params, batch, targets)
        assert value < previous
        previous = value
        opt.step(params, grads)


# ---------------------------------------------------------------------------
# Replay
# ---------------------------------------------------------------------------

def _exp(i, d=2):
    return Experience(np.full(d, float(i)), i % 2, float(i), np.full(d, float(i)), False)


def test_ring_buffer_evicts_oldest():
    buf = ReplayBuffer(3, 2)
    for i in range(5):
        buf.push(_exp(i))
    assert len(buf) == 3
    assert sorted(buf.get(j).reward for j in range(3)) == [2.0, 3.0, 4.0]
    assert buf.cursor == 2


def test_replay_sampling_is_reproducible_and_in_range():
    buf = ReplayBuffer(10, 2)
    for i in range(4):
        buf.push(_exp(i))
    a = buf.sample_indices(50, np.random.Generator(np.random.PCG64(0)))
    b = buf.sample_indices(50, np.random.Generator(np.random.PCG64(0)))
    assert np.array_equal(a, b)
    assert a.min() >= 0 and a.max() < 4


def test_replay_rejects_wrong_width():
    with pytest.raises(DimensionError):
        ReplayBuffer(3, 2).push(_exp(0, d=3))


# ---------------------------------------------------------------------------
# Action selection
# ---------------------------------------------------------------------------

def test_greedy_and_masked_selection():
    gen = np.random.Generator(np.random.PCG64(0))
    q = np.array([1.0, 3.0, 2.0])
    assert select_action(q, None, 0.0, gen) == 1
    mask = np.array([True, False, True])
    assert select_action(q, mask, 0.0, gen, mode="eval") == 2
    assert select_action(np.array([5.0, 5.0, 1.0]), None, 0.0, gen) == 0


def test_full_exploration_is_uniform():
    gen = np.random.Generator(np.random.PCG64(12))
    n, draws = 4, 10_000
    counts = np.bincount(
        [select_action(np.arange(n, dtype=float), None, 1.0, gen) for _ in range(draws)], minlength=n
    )
    sigma = np.sqrt(draws * (1 / n) * (1 - 1 / n))
    assert np.all(np.abs(counts - draws / n) < 3 * sigma)


def test_epsilon_schedule_is_linear_then_flat():
    schedule = EpsilonSchedule.over(100, 1.0, 0.05, 0.8)
    assert schedule.value(0) == 1.0
    assert schedule.value(40) == pytest.approx(1.0 - 0.95 * 0.5)
    assert schedule.value(80) == pytest.approx(0.05)
    assert schedule.value(99) == pytest.approx(0.05)


# ---------------------------------------------------------------------------
# Checkpoints
# ---------------------------------------------------------------------------

def test_checkpoint_round_trip_is_bit_exact(tmp_path):
    params = init_params(7, (5, 4), 3, np.random.Generator(np.random.PCG64(9)))
    path = save_checkpoint(tmp_path / "ck.npz", params, {"seed": 9})
    loaded, meta = load_checkpoint(path)
    assert meta == {"seed": 9}
    for a, b in zip(params.arrays(), loaded.arrays()):
        assert a.shape == b.shape and np.array_equal(a, b)
