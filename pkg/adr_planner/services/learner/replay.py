# services/learner/replay.py
"""Uniform experience replay with ring-buffer eviction."""

from __future__ import annotations

import numpy as np

from ...core.errors import DimensionError
from ...models import Experience
from .network import Batch


class ReplayBuffer:
    """Fixed-capacity store; once full, each push overwrites the oldest entry."""

    def __init__(self, capacity: int, feature_size: int) -> None:
        if capacity < 1:
            raise ValueError("Replay capacity must be positive")
        self.capacity = capacity
        self.feature_size = feature_size
        self._states = np.zeros((capacity, feature_size), dtype=np.float64)
        self._next_states = np.zeros((capacity, feature_size), dtype=np.float64)
        self._actions = np.zeros(capacity, dtype=np.int64)
        self._rewards = np.zeros(capacity, dtype=np.float64)
        self._dones = np.zeros(capacity, dtype=bool)
        self._cursor = 0
        self._size = 0

    def __len__(self) -> int:
        return self._size

    @property
    def cursor(self) -> int:
        """Slot the next push will write."""
        return self._cursor

    def push(self, experience: Experience) -> None:
        if experience.state.shape != (self.feature_size,) or experience.next_state.shape != (
            self.feature_size,
        ):
            raise DimensionError(
                f"Experience features must have length {self.feature_size}, "
                f"got {experience.state.shape} and {experience.next_state.shape}"
            )
        i = self._cursor
        self._states[i] = experience.state
        self._next_states[i] = experience.next_state
        self._actions[i] = experience.action
        self._rewards[i] = experience.reward
        self._dones[i] = experience.done
        self._cursor = (i + 1) % self.capacity
        self._size = min(self._size + 1, self.capacity)

    def get(self, index: int) -> Experience:
        if not 0 <= index < self._size:
            raise IndexError(f"Replay index {index} outside occupied range [0, {self._size})")
        return Experience(
            self._states[index].copy(),
            int(self._actions[index]),
            float(self._rewards[index]),
            self._next_states[index].copy(),
            bool(self._dones[index]),
        )

    def sample_indices(self, batch_size: int, rng: np.random.Generator) -> np.ndarray:
        if self._size == 0:
            raise DimensionError("Cannot sample from an empty replay buffer")
        return rng.integers(0, self._size, size=batch_size)

    def sample(self, batch_size: int, rng: np.random.Generator) -> Batch:
        idx = self.sample_indices(batch_size, rng)
        return Batch(
            self._states[idx],
            self._actions[idx],
            self._rewards[idx],
            self._next_states[idx],
            self._dones[idx],
        )
