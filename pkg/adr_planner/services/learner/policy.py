# services/learner/policy.py
"""ε-greedy action selection and the linear exploration schedule."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Optional

import numpy as np

Mode = Literal["train", "eval"]


@dataclass(frozen=True, slots=True)
class EpsilonSchedule:
    """Linear decay from `start` to `end` over `decay_episodes`, then flat."""

    start: float
    end: float
    decay_episodes: int

    def value(self, episode: int) -> float:
        if self.decay_episodes <= 0:
            return self.end
        frac = min(1.0, episode / self.decay_episodes)
        eps = self.start + (self.end - self.start) * frac
        return float(min(1.0, max(0.0, eps)))

    @classmethod
    def over(cls, episodes: int, start: float, end: float, fraction: float) -> "EpsilonSchedule":
        return cls(start, end, max(1, int(round(episodes * fraction))))


def select_action(
    q_values: np.ndarray,
    valid_mask: Optional[np.ndarray],
    epsilon: float,
    rng: np.random.Generator,
    mode: Mode = "train",
) -> int:
    """
    With probability epsilon pick uniformly among all N actions (revisits
    included, the agent has to learn to avoid them); otherwise argmax with
    ties to the lowest index. In eval mode a mask restricts the argmax.
    """
    n = q_values.shape[0]
    if epsilon > 0.0 and rng.random() < epsilon:
        return int(rng.integers(n))

    if mode == "eval" and valid_mask is not None and np.any(valid_mask):
        masked = np.where(valid_mask, q_values, -np.inf)
        return int(np.argmax(masked))
    return int(np.argmax(q_values))
