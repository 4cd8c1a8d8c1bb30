# services/learner/trainer.py
"""
DQN training loop with a fixed target network and uniform replay.

Random streams: `SeedSequence(seed).spawn(4)` gives, in order, the
parameter-initialisation stream, the exploration + replay-sampling stream,
the training-environment stream and the evaluation-environment stream. Each
is a PCG64 generator, so a seed fully determines a run.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from ...api.models import AgentConfig
from ...core.errors import TrainingError
from ...models import Experience, TerminationCause
from ...utils.logger import get_logger
from ..environment import MissionEnvironment
from .network import QNetworkParams, backward, forward, init_params, td_targets
from .optim import build_optimizer
from .policy import EpsilonSchedule, select_action
from .replay import ReplayBuffer

EnvFactory = Callable[[np.random.Generator], MissionEnvironment]

METRICS_COLUMNS = ["episode", "total_reward", "steps", "epsilon", "mean_loss", "terminal_cause"]

log = get_logger(__name__)


@dataclass(frozen=True)
class TrainingReport:
    seed: int
    rewards: Tuple[float, ...]
    steps: Tuple[int, ...]
    epsilons: Tuple[float, ...]
    mean_losses: Tuple[float, ...]  # nan for episodes without a gradient step
    causes: Tuple[str, ...]
    params: QNetworkParams
    total_steps: int
    target_syncs: int

    @property
    def episodes(self) -> int:
        return len(self.rewards)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "episode": np.arange(self.episodes, dtype=np.int64),
                "total_reward": np.asarray(self.rewards, dtype=np.float64),
                "steps": np.asarray(self.steps, dtype=np.int64),
                "epsilon": np.asarray(self.epsilons, dtype=np.float64),
                "mean_loss": np.asarray(self.mean_losses, dtype=np.float64),
                "terminal_cause": list(self.causes),
            },
            columns=METRICS_COLUMNS,
        )


@dataclass(frozen=True)
class GreedyEvaluation:
    rewards: Tuple[float, ...]
    first_sequence: Tuple[int, ...]

    @property
    def mean_reward(self) -> float:
        return float(np.mean(self.rewards))

    @property
    def std_reward(self) -> float:
        return float(np.std(self.rewards))


def seed_streams(seed: int) -> List[np.random.Generator]:
    return [np.random.Generator(np.random.PCG64(s)) for s in np.random.SeedSequence(seed).spawn(4)]


class DQNTrainer:
    """One deterministic training run; not shared between threads."""

    def __init__(self, env_factory: EnvFactory, config: AgentConfig) -> None:
        self.config = config
        init_rng, self.rng, env_rng, self.eval_rng = seed_streams(config.seed)
        self.env = env_factory(env_rng)
        self.env_factory = env_factory

        self.value = init_params(
            self.env.feature_size, config.hidden_sizes, self.env.n_actions, init_rng
        )
        self.target = self.value.copy()
        self.optimizer = build_optimizer(config.optimizer, self.value, config.learning_rate)
        self.buffer = ReplayBuffer(config.buffer_capacity, self.env.feature_size)
        self.schedule = EpsilonSchedule.over(
            config.episodes, config.epsilon_start, config.epsilon_end, config.epsilon_decay_fraction
        )
        self.total_steps = 0
        self.target_syncs = 0

    # --------------------------------------------------------------
    # Public API
    # --------------------------------------------------------------
    def run(self) -> TrainingReport:
        rewards: List[float] = []
        steps: List[int] = []
        epsilons: List[float] = []
        losses: List[float] = []
        causes: List[str] = []
        log_every = max(1, self.config.episodes // 10)

        for episode in range(self.config.episodes):
            epsilon = self.schedule.value(episode)
            total, n_steps, episode_losses, cause = self._run_episode(epsilon)
            rewards.append(total)
            steps.append(n_steps)
            epsilons.append(epsilon)
            losses.append(float(np.mean(episode_losses)) if episode_losses else math.nan)
            causes.append(cause.value)

            if (episode + 1) % log_every == 0:
                window = rewards[-log_every:]
                log.info(
                    "training_progress",
                    seed=self.config.seed,
                    episode=episode + 1,
                    mean_reward=round(float(np.mean(window)), 4),
                    epsilon=round(epsilon, 4),
                    buffer=len(self.buffer),
                )

        return TrainingReport(
            seed=self.config.seed,
            rewards=tuple(rewards),
            steps=tuple(steps),
            epsilons=tuple(epsilons),
            mean_losses=tuple(losses),
            causes=tuple(causes),
            params=self.value.copy(),
            total_steps=self.total_steps,
            target_syncs=self.target_syncs,
        )

    def evaluate(self, params: Optional[QNetworkParams] = None) -> "GreedyEvaluation":
        """Greedy rollouts on a fresh environment driven by the evaluation stream."""
        env = self.env_factory(self.eval_rng)
        params = params if params is not None else self.value
        return evaluate_greedy(params, env, self.config.eval_episodes, self.config.eval_mask_invalid)

    def sync_target(self) -> None:
        self.target.copy_from(self.value)
        self.target_syncs += 1

    def learn_step(self) -> float:
        batch = self.buffer.sample(self.config.batch_size, self.rng)
        targets = td_targets(batch, self.target, self.config.gamma)
        value, grads = backward(self.value, batch, targets)
        if not math.isfinite(value):
            raise TrainingError(f"Non-finite loss {value} after {self.total_steps} steps")
        self.optimizer.step(self.value, grads)
        return value

    # --------------------------------------------------------------
    # Internals
    # --------------------------------------------------------------
    def _run_episode(self, epsilon: float) -> Tuple[float, int, List[float], TerminationCause]:
        env = self.env
        state = env.reset()
        features = env.features(state)
        total, n_steps = 0.0, 0
        episode_losses: List[float] = []

        while True:
            q = forward(self.value, features)
            action = select_action(q, env.valid_mask(state), epsilon, self.rng, mode="train")
            outcome = env.step(action)
            next_features = env.features(outcome.next_state)
            self.buffer.push(Experience(features, action, outcome.reward, next_features, outcome.terminal))

            total += outcome.reward
            n_steps += 1
            self.total_steps += 1

            if len(self.buffer) >= self.config.effective_warmup:
                episode_losses.append(self.learn_step())
            if self.total_steps % self.config.target_sync_period == 0:
                self.sync_target()

            if outcome.terminal:
                return total, n_steps, episode_losses, outcome.termination_cause
            state, features = outcome.next_state, next_features


def train(env_factory: EnvFactory, agent_config: AgentConfig) -> TrainingReport:
    """Run a full training and return its immutable report."""
    return DQNTrainer(env_factory, agent_config).run()


def evaluate_greedy(
    params: QNetworkParams,
    env: MissionEnvironment,
    episodes: int = 1,
    mask_invalid: bool = True,
) -> GreedyEvaluation:
    """Greedy rollouts (ε = 0); the first episode's removal order is returned."""
    rewards: List[float] = []
    first_sequence: List[int] = []
    for episode in range(episodes):
        state = env.reset()
        total = 0.0
        while True:
            q = forward(params, env.features(state))
            action = select_action(q, env.valid_mask(state), 0.0, env.rng, mode="eval" if mask_invalid else "train")
            outcome = env.step(action)
            total += outcome.reward
            if episode == 0 and outcome.termination_cause is TerminationCause.NONE:
                first_sequence.append(action)
            if outcome.terminal:
                break
            state = outcome.next_state
        rewards.append(total)
    return GreedyEvaluation(tuple(rewards), tuple(first_sequence))


def write_metrics_csv(report: TrainingReport, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    report.to_frame().to_csv(path, index=False, lineterminator="\n", na_rep="nan")
    return path


def smoothed(values: Sequence[float], window: int) -> np.ndarray:
    """Trailing moving average; the first points average what is available."""
    data = np.asarray(values, dtype=np.float64)
    if data.size == 0:
        return data
    csum = np.cumsum(np.insert(data, 0, 0.0))
    idx = np.arange(1, data.size + 1)
    lo = np.maximum(0, idx - window)
    return (csum[idx] - csum[lo]) / (idx - lo)
