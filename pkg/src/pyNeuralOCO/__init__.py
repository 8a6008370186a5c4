"""Online learning over two-layer and deep networks, and episodic control with network policies."""

from __future__ import annotations

__version__ = "0.1.0"

from .control.driver import run_episodic
from .control.episode import episode_loss_and_gradient, rollout
from .core.ball import BallSet
from .harness.config import ExperimentConfig, load_config
from .harness.runner import run
from .neural.deep import init_deep
from .neural.dispatch import forward, gradient
from .neural.two_layer import init_two_layer
from .oco.reduction import run_nearly_convex
from .oco.types import RegretTrace, make_state
from .rf.teacher import sample_teacher

__all__ = [
    "__version__",
    "run_episodic",
    "episode_loss_and_gradient",
    "rollout",
    "BallSet",
    "ExperimentConfig",
    "load_config",
    "run",
    "init_deep",
    "forward",
    "gradient",
    "init_two_layer",
    "run_nearly_convex",
    "RegretTrace",
    "make_state",
    "sample_teacher",
]
