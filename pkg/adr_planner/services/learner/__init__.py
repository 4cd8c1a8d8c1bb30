"""From-scratch DQN: network, replay, optimizers, policy, checkpoints, training."""

from .checkpoint import load_checkpoint, save_checkpoint
from .network import (
    Batch,
    QNetworkParams,
    backward,
    forward,
    init_params,
    loss,
    td_target,
    td_targets,
)
from .optim import Adam, Sgd, build_optimizer
from .policy import EpsilonSchedule, select_action
from .replay import ReplayBuffer
from .trainer import (
    DQNTrainer,
    GreedyEvaluation,
    TrainingReport,
    evaluate_greedy,
    seed_streams,
    smoothed,
    train,
    write_metrics_csv,
)

__all__ = [
    "Adam",
    "Batch",
    "DQNTrainer",
    "EpsilonSchedule",
    "GreedyEvaluation",
    "QNetworkParams",
    "ReplayBuffer",
    "Sgd",
    "TrainingReport",
    "backward",
    "build_optimizer",
    "evaluate_greedy",
    "forward",
    "init_params",
    "load_checkpoint",
    "loss",
    "save_checkpoint",
    "seed_streams",
    "select_action",
    "smoothed",
    "td_target",
    "td_targets",
    "train",
    "write_metrics_csv",
]
