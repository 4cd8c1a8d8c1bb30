# services/learner/optim.py
"""In-place parameter updates: Adam (default) and plain gradient descent."""

from __future__ import annotations

from typing import List, Protocol

import numpy as np

from .network import QNetworkParams


class Optimizer(Protocol):
    def step(self, params: QNetworkParams, grads: QNetworkParams) -> None: ...


class Sgd:
    def __init__(self, learning_rate: float) -> None:
        self.learning_rate = learning_rate

    def step(self, params: QNetworkParams, grads: QNetworkParams) -> None:
        for p, g in zip(params.arrays(), grads.arrays()):
            p -= self.learning_rate * g


class Adam:
    """Adam with bias correction (β1=0.9, β2=0.999, ε=1e-8)."""

    def __init__(
        self,
        params: QNetworkParams,
        learning_rate: float,
        beta1: float = 0.9,
        beta2: float = 0.999,
        eps: float = 1e-8,
    ) -> None:
        self.learning_rate = learning_rate
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.t = 0
        self._m: List[np.ndarray] = [np.zeros_like(a) for a in params.arrays()]
        self._v: List[np.ndarray] = [np.zeros_like(a) for a in params.arrays()]

    def step(self, params: QNetworkParams, grads: QNetworkParams) -> None:
        self.t += 1
        correction1 = 1.0 - self.beta1**self.t
        correction2 = 1.0 - self.beta2**self.t
        for p, g, m, v in zip(params.arrays(), grads.arrays(), self._m, self._v):
            m *= self.beta1
            m += (1.0 - self.beta1) * g
            v *= self.beta2
            v += (1.0 - self.beta2) * g * g
            p -= self.learning_rate * (m / correction1) / (np.sqrt(v / correction2) + self.eps)


def build_optimizer(name: str, params: QNetworkParams, learning_rate: float) -> Optimizer:
    if name == "adam":
        return Adam(params, learning_rate)
    if name == "sgd":
        return Sgd(learning_rate)
    raise ValueError(f"Unknown optimizer: {name}")
