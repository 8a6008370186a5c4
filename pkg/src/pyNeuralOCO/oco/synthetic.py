"""
Synthetic loss streams with known constants: convex quadratics and a one-dimensional
nearly-convex family whose margin is certified on a dense grid before any run.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np
from scipy import optimize

from .types import LossOracle, OracleOutput
from .validation import CertifiedMargin, certify_nearly_convex_1d

logger = logging.getLogger(__name__)


def quadratic_oracle(target) -> LossOracle:
    """ℓ(θ) = ½‖θ - target‖²."""
    target = np.asarray(target, dtype=float)

    def oracle(theta: np.ndarray) -> OracleOutput:
        residual = np.asarray(theta, dtype=float) - target
        return OracleOutput(0.5 * float(np.vdot(residual, residual)), residual)

    return oracle


def quadratic_stream(targets) -> List[LossOracle]:
    return [quadratic_oracle(target) for target in targets]


def quadratic_comparator(targets, center, radius: float) -> Tuple[np.ndarray, np.ndarray]:
    """Exact constrained minimizer of Σ ½‖θ - y_t‖² over a joint ball, and the per-round losses there."""
    targets = np.asarray(targets, dtype=float)
    center = np.asarray(center, dtype=float)
    mean = targets.mean(axis=0)
    offset = mean - center
    norm = float(np.linalg.norm(offset))
    theta = mean if norm <= radius else center + radius * offset / norm
    residual = (targets - theta).reshape(targets.shape[0], -1)
    return theta, 0.5 * np.sum(residual * residual, axis=1)


@dataclass(frozen=True)
class NearlyConvexFamily:
    """ℓ_t(θ) = ½(θ - y_t)² + β cos(ωθ) on [-radius, radius] with targets y_t in [-1, 1].

    The margin does not depend on y_t, so one certificate covers the whole stream.
    The family is non-convex whenever βω² > 1.
    """

    beta: float = 0.05
    omega: float = 6.0
    radius: float = 2.0
    target_range: float = 1.0

    def value(self, theta, target: float = 0.0) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        return 0.5 * (theta - target) ** 2 + self.beta * np.cos(self.omega * theta)

    def derivative(self, theta, target: float = 0.0) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        return (theta - target) - self.beta * self.omega * np.sin(self.omega * theta)

    @property
    def grad_bound(self) -> float:
        return self.radius + self.target_range + self.beta * self.omega

    @property
    def curvature_bound(self) -> float:
        return 1.0 + self.beta * self.omega**2

    def certify(self, n_grid: int = 2001) -> CertifiedMargin:
        return certify_nearly_convex_1d(
            self.value, self.derivative, -self.radius, self.radius, self.grad_bound, self.curvature_bound, n_grid
        )

    def oracle(self, target: float) -> LossOracle:
        def evaluate(theta: np.ndarray) -> OracleOutput:
            theta = np.asarray(theta, dtype=float)
            return OracleOutput(float(np.sum(self.value(theta, target))), self.derivative(theta, target))

        return evaluate

    def targets(self, rng: np.random.Generator, rounds: int) -> np.ndarray:
        return rng.uniform(-self.target_range, self.target_range, size=rounds)

    def stream(self, targets) -> List[LossOracle]:
        return [self.oracle(float(target)) for target in targets]

    def comparator(self, targets, n_grid: int = 4001) -> Tuple[float, np.ndarray]:
        """Best fixed θ in hindsight: dense grid search refined by a bounded scalar solve."""
        targets = np.asarray(targets, dtype=float)
        if targets.size == 0:
            return 0.0, np.zeros(0)

        def total(theta: float) -> float:
            return float(np.sum(self.value(theta, targets)))

        grid = np.linspace(-self.radius, self.radius, n_grid)
        totals = 0.5 * (np.sum(targets**2) - 2.0 * grid * np.sum(targets) + targets.size * grid**2)
        totals = totals + targets.size * self.beta * np.cos(self.omega * grid)
        index = int(np.argmin(totals))
        spacing = grid[1] - grid[0]
        lo = max(-self.radius, grid[index] - spacing)
        hi = min(self.radius, grid[index] + spacing)
        refined = optimize.minimize_scalar(total, bounds=(lo, hi), method="bounded", options={"xatol": 1e-12})
        theta = float(refined.x) if refined.fun <= totals[index] else float(grid[index])
        logger.debug("Synthetic comparator theta*=%.6g over %d rounds", theta, targets.size)
        return theta, self.value(theta, targets)
