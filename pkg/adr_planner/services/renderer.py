# services/renderer.py
"""
Learning-curve rendering service.
Draws smoothed episode-reward curves as SVG files with matplotlib.
"""

import logging
from pathlib import Path
from typing import Dict, Optional, Sequence

from matplotlib.figure import Figure

from ..core.config import Config
from .learner.trainer import smoothed

logger = logging.getLogger(__name__)


class CurveRenderer:
    """Handles rendering of learning curves."""

    def __init__(self, window: Optional[int] = None):
        """Initialize the renderer; `window` defaults to Config.SMOOTHING_WINDOW."""
        self.window = window or Config.SMOOTHING_WINDOW

    def render(self, rewards: Sequence[float], path: Path, title: str = "Learning curve") -> Path:
        """
        Render one run's raw and smoothed episode rewards.

        Args:
            rewards: Per-episode total rewards
            path: Destination .svg file
            title: Figure title

        Returns:
            The written path
        """
        return self.render_overlay({"reward": rewards}, path, title, show_raw=True)

    def render_overlay(
        self,
        series: Dict[str, Sequence[float]],
        path: Path,
        title: str = "Learning curves",
        show_raw: bool = False,
    ) -> Path:
        """
        Render several smoothed reward curves on one axis.

        Args:
            series: Label -> per-episode rewards
            path: Destination .svg file
            title: Figure title
            show_raw: Also draw the unsmoothed values faintly

        Returns:
            The written path
        """
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)

        # no pyplot: seed workers render concurrently
        fig = Figure(figsize=(8, 4.5))
        ax = fig.subplots()
        for label, values in series.items():
            episodes = range(len(values))
            if show_raw:
                ax.plot(episodes, values, alpha=0.25, linewidth=0.8)
            ax.plot(episodes, smoothed(values, self.window), linewidth=1.6,
                    label=f"{label} ({self.window}-episode mean)")
        ax.set_xlabel("Episode")
        ax.set_ylabel("Episode reward")
        ax.set_title(title)
        ax.grid(True, alpha=0.3)
        ax.legend(loc="lower right")
        fig.tight_layout()
        fig.savefig(path, format="svg")

        logger.debug("Rendered %d curve(s) to %s", len(series), path)
        return path


def render_learning_curve(rewards: Sequence[float], path: Path, title: str = "Learning curve") -> Path:
    """Convenience wrapper for one curve."""
    return CurveRenderer().render(rewards, path, title)
