# services/learner/network.py
"""
Two-hidden-layer Q-network in plain numpy (float64).

input → ReLU(hidden1) → ReLU(hidden2) → linear(N). `backward` returns the
exact analytic gradient of the mean squared TD error; targets are treated as
constants so only the value network receives gradient.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, NamedTuple, Sequence, Tuple

import numpy as np

from ...core.errors import DimensionError
from ...models import Experience


@dataclass
class QNetworkParams:
    """Layer weights (in, out) and biases (out,), input → h1 → h2 → N."""

    weights: List[np.ndarray]
    biases: List[np.ndarray]

    def __post_init__(self) -> None:
        if len(self.weights) != 3 or len(self.biases) != 3:
            raise DimensionError("A Q-network has exactly three affine layers")
        for w, b in zip(self.weights, self.biases):
            if w.ndim != 2 or b.shape != (w.shape[1],):
                raise DimensionError(f"Bias shape {b.shape} does not match weight shape {w.shape}")
        for w_in, w_out in zip(self.weights, self.weights[1:]):
            if w_in.shape[1] != w_out.shape[0]:
                raise DimensionError(f"Layer shapes {w_in.shape} and {w_out.shape} do not chain")

    @property
    def input_dim(self) -> int:
        return self.weights[0].shape[0]

    @property
    def n_actions(self) -> int:
        return self.weights[-1].shape[1]

    def arrays(self) -> List[np.ndarray]:
        return [*self.weights, *self.biases]

    def copy(self) -> "QNetworkParams":
        return QNetworkParams([w.copy() for w in self.weights], [b.copy() for b in self.biases])

    def copy_from(self, other: "QNetworkParams") -> None:
        for dst, src in zip(self.arrays(), other.arrays()):
            dst[...] = src

    def flat(self) -> np.ndarray:
        return np.concatenate([a.ravel() for a in self.arrays()])

    def with_flat(self, vector: np.ndarray) -> "QNetworkParams":
        out, offset = [], 0
        for a in self.arrays():
            out.append(vector[offset:offset + a.size].reshape(a.shape).astype(np.float64))
            offset += a.size
        return QNetworkParams(out[:3], out[3:])

    def all_finite(self) -> bool:
        return all(np.isfinite(a).all() for a in self.arrays())


class Batch(NamedTuple):
    states: np.ndarray  # (B, D)
    actions: np.ndarray  # (B,)
    rewards: np.ndarray  # (B,)
    next_states: np.ndarray  # (B, D)
    dones: np.ndarray  # (B,) bool

    def __len__(self) -> int:
        return self.actions.shape[0]

    @classmethod
    def from_experiences(cls, experiences: Sequence[Experience]) -> "Batch":
        return cls(
            np.stack([e.state for e in experiences]).astype(np.float64),
            np.asarray([e.action for e in experiences], dtype=np.int64),
            np.asarray([e.reward for e in experiences], dtype=np.float64),
            np.stack([e.next_state for e in experiences]).astype(np.float64),
            np.asarray([e.done for e in experiences], dtype=bool),
        )


# ---------------------------------------------------------------------
# Construction
# ---------------------------------------------------------------------
def init_params(
    input_dim: int, hidden_sizes: Sequence[int], n_actions: int, rng: np.random.Generator
) -> QNetworkParams:
    """He-normal weights, zero biases."""
    sizes = [input_dim, *hidden_sizes, n_actions]
    weights = [
        rng.standard_normal((fan_in, fan_out)) * np.sqrt(2.0 / fan_in)
        for fan_in, fan_out in zip(sizes, sizes[1:])
    ]
    biases = [np.zeros(fan_out, dtype=np.float64) for fan_out in sizes[1:]]
    return QNetworkParams(weights, biases)


# ---------------------------------------------------------------------
# Forward
# ---------------------------------------------------------------------
def _as_matrix(params: QNetworkParams, features: np.ndarray) -> Tuple[np.ndarray, bool]:
    x = np.asarray(features, dtype=np.float64)
    single = x.ndim == 1
    if single:
        x = x[None, :]
    if x.ndim != 2 or x.shape[1] != params.input_dim:
        raise DimensionError(
            f"Feature shape {np.shape(features)} does not match input width {params.input_dim}"
        )
    return x, single


def _forward_cache(params: QNetworkParams, x: np.ndarray) -> Tuple[List[np.ndarray], np.ndarray]:
    (w1, w2, w3), (b1, b2, b3) = params.weights, params.biases
    z1 = x @ w1 + b1
    h1 = np.maximum(z1, 0.0)
    z2 = h1 @ w2 + b2
    h2 = np.maximum(z2, 0.0)
    q = h2 @ w3 + b3
    return [x, z1, h1, z2, h2], q


def forward(params: QNetworkParams, features: np.ndarray) -> np.ndarray:
    """Q-values, shape (N,) for one state or (B, N) for a batch."""
    x, single = _as_matrix(params, features)
    _, q = _forward_cache(params, x)
    return q[0] if single else q


# ---------------------------------------------------------------------
# Targets and loss
# ---------------------------------------------------------------------
def td_target(experience: Experience, target_params: QNetworkParams, gamma: float) -> float:
    if experience.done:
        return float(experience.reward)
    return float(experience.reward + gamma * np.max(forward(target_params, experience.next_state)))


def td_targets(batch: Batch, target_params: QNetworkParams, gamma: float) -> np.ndarray:
    bootstrap = np.max(forward(target_params, batch.next_states), axis=1)
    return np.where(batch.dones, batch.rewards, batch.rewards + gamma * bootstrap)


def _check_batch(params: QNetworkParams, batch: Batch, targets: np.ndarray) -> None:
    if len(batch) == 0:
        raise DimensionError("Loss is undefined on an empty batch")
    if np.shape(targets) != (len(batch),):
        raise DimensionError(f"Expected {len(batch)} targets, got shape {np.shape(targets)}")
    if np.any(batch.actions < 0) or np.any(batch.actions >= params.n_actions):
        raise DimensionError("Batch actions outside the network's output range")


def loss(batch: Batch, value_params: QNetworkParams, targets: np.ndarray) -> float:
    """Mean over the batch of (y_i - Q(s_i, a_i))^2."""
    _check_batch(value_params, batch, targets)
    q = forward(value_params, batch.states)
    chosen = q[np.arange(len(batch)), batch.actions]
    return float(np.mean((targets - chosen) ** 2))


def backward(
    params: QNetworkParams, batch: Batch, targets: np.ndarray
) -> Tuple[float, QNetworkParams]:
    """Loss value and its exact gradient with respect to every parameter."""
    _check_batch(params, batch, targets)
    x, _ = _as_matrix(params, batch.states)
    (_, z1, h1, z2, h2), q = _forward_cache(params, x)
    rows = np.arange(len(batch))
    residual = targets - q[rows, batch.actions]

    dq = np.zeros_like(q)
    dq[rows, batch.actions] = -2.0 * residual / len(batch)

    w1, w2, w3 = params.weights
    dw3 = h2.T @ dq
    db3 = dq.sum(axis=0)
    dz2 = (dq @ w3.T) * (z2 > 0.0)
    dw2 = h1.T @ dz2
    db2 = dz2.sum(axis=0)
    dz1 = (dz2 @ w2.T) * (z1 > 0.0)
    dw1 = x.T @ dz1
    db1 = dz1.sum(axis=0)

    value = float(np.mean(residual**2))
    return value, QNetworkParams([dw1, dw2, dw3], [db1, db2, db3])
