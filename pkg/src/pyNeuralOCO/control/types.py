"""Episodes, policy inputs, rollout results and stability certificates."""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from typing import Any, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from ..core.errors import ShapeMismatchError

logger = logging.getLogger(__name__)

DISTURBANCE_TOL = 1e-12


class PolicyInput(NamedTuple):
    """Padded disturbance history z_k and its normalized form z̄_k."""

    z: np.ndarray
    z_bar: np.ndarray


@dataclass(frozen=True)
class StabilityCertificate:
    """Outcome of the sequential-stability check; ``worst_k``/``worst_n`` locate the largest ratio."""

    C1: float
    rho1: float
    C2: float
    passed: bool
    worst_k: int
    worst_n: int
    worst_ratio: float
    max_B_norm: float
    n_products: int

    def to_dict(self):
        return {
            "C1": self.C1,
            "rho1": self.rho1,
            "C2": self.C2,
            "passed": self.passed,
            "worst_k": self.worst_k,
            "worst_n": self.worst_n,
            "worst_ratio": self.worst_ratio,
            "max_B_norm": self.max_B_norm,
            "n_products": self.n_products,
        }


@dataclass(frozen=True, eq=False)
class LtvEpisode:
    """One episode of x_{k+1} = A_k x_k + B_k u_k + w_k over k = 1..K.

    When ``feedback`` is set, ``A`` already holds the closed-loop A_k + B_k F_k and
    the cost sees the composite control F_k x_k + u_k.
    """

    A: np.ndarray
    B: np.ndarray
    w: np.ndarray
    x1: np.ndarray
    costs: Tuple[Any, ...]
    W: float
    feedback: Optional[np.ndarray] = None
    certificate: Optional[StabilityCertificate] = None

    def __post_init__(self):
        A = np.asarray(self.A, dtype=float)
        B = np.asarray(self.B, dtype=float)
        w = np.asarray(self.w, dtype=float)
        x1 = np.asarray(self.x1, dtype=float)
        if A.ndim != 3 or A.shape[1] != A.shape[2]:
            raise ShapeMismatchError(f"A must have shape (K, d_x, d_x), got {A.shape}")
        horizon, dx = A.shape[0], A.shape[1]
        if B.ndim != 3 or B.shape[:2] != (horizon, dx):
            raise ShapeMismatchError(f"B must have shape ({horizon}, {dx}, d_u), got {B.shape}")
        if w.shape != (horizon, dx):
            raise ShapeMismatchError(f"w must have shape {(horizon, dx)}, got {w.shape}")
        if x1.shape != (dx,):
            raise ShapeMismatchError(f"x1 must have shape ({dx},), got {x1.shape}")
        if len(self.costs) != horizon:
            raise ShapeMismatchError(f"Expected {horizon} cost descriptors, got {len(self.costs)}")
        feedback = self.feedback
        if feedback is not None:
            feedback = np.asarray(feedback, dtype=float)
            if feedback.shape != (horizon, B.shape[2], dx):
                raise ShapeMismatchError(f"Feedback gains must have shape {(horizon, B.shape[2], dx)}")
        if horizon and np.max(np.linalg.norm(w, axis=1)) > self.W * (1 + DISTURBANCE_TOL) + DISTURBANCE_TOL:
            raise ValueError(f"Disturbance norm exceeds W={self.W}")
        if np.linalg.norm(x1) > self.W * (1 + DISTURBANCE_TOL) + DISTURBANCE_TOL:
            logger.warning("Initial state norm %.4g exceeds W=%g; state bounds assume ||x1|| <= W",
                           np.linalg.norm(x1), self.W)
        for name, value in (("A", A), ("B", B), ("w", w), ("x1", x1), ("feedback", feedback)):
            object.__setattr__(self, name, value)
        object.__setattr__(self, "costs", tuple(self.costs))
        object.__setattr__(self, "W", float(self.W))

    @property
    def K(self) -> int:
        return self.A.shape[0]

    @property
    def dx(self) -> int:
        return self.A.shape[1]

    @property
    def du(self) -> int:
        return self.B.shape[2]

    @property
    def cost_lipschitz(self) -> float:
        return max((cost.lipschitz for cost in self.costs), default=1.0)

    def with_disturbances(self, w: Sequence) -> "LtvEpisode":
        return replace(self, w=np.asarray(w, dtype=float))

    def composite_control(self, k: int, x, u) -> np.ndarray:
        """Control the cost sees at step k (0-based): F_k x_k + u_k, or u_k without feedback."""
        if self.feedback is None:
            return np.asarray(u, dtype=float)
        return self.feedback[k] @ np.asarray(x, dtype=float) + np.asarray(u, dtype=float)


@dataclass(frozen=True, eq=False)
class EpisodeResult:
    """Realized trajectory of one episode.

    ``states`` holds x_1..x_{K+1}; ``controls`` the composite controls seen by the
    costs; ``network_controls`` the raw policy outputs.
    """

    states: np.ndarray
    controls: np.ndarray
    network_controls: np.ndarray
    step_costs: np.ndarray
    disturbances: np.ndarray
    policy_inputs: np.ndarray
    gradient: Optional[np.ndarray] = None

    @property
    def loss(self) -> float:
        return float(np.sum(self.step_costs))

    def with_gradient(self, gradient: np.ndarray) -> "EpisodeResult":
        return replace(self, gradient=gradient)
