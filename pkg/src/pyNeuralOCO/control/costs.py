"""
Per-step convex costs c_k(x, u) with their declared constant L_c, where
‖∇c_k(x, u)‖ ≤ L_c max{1, ‖x‖ + ‖u‖}.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Dict

import numpy as np


@dataclass(frozen=True, eq=False)
class QuadraticTrackingCost:
    """½‖x - g‖² + ½μ‖u‖², with L_c = 1 + ‖g‖ + μ."""

    target: np.ndarray
    mu: float = 1.0
    tag = "quadratic_tracking"

    def __post_init__(self):
        if self.mu < 0:
            raise ValueError(f"Control weight mu must be nonnegative, got {self.mu}")
        target = np.array(self.target, dtype=float)
        target.setflags(write=False)
        object.__setattr__(self, "target", target)

    @property
    def lipschitz(self) -> float:
        return 1.0 + float(np.linalg.norm(self.target)) + self.mu

    def value(self, x, u) -> float:
        residual = np.asarray(x, dtype=float) - self.target
        u = np.asarray(u, dtype=float)
        return 0.5 * float(np.dot(residual, residual)) + 0.5 * self.mu * float(np.dot(u, u))

    def grad_x(self, x, u) -> np.ndarray:
        return np.asarray(x, dtype=float) - self.target

    def grad_u(self, x, u) -> np.ndarray:
        return self.mu * np.asarray(u, dtype=float)

    def to_params(self) -> Dict[str, Any]:
        return {"target": self.target.tolist(), "mu": self.mu}


@dataclass(frozen=True)
class ZeroCost:
    tag = "zero"
    lipschitz = 1.0

    def value(self, x, u) -> float:
        return 0.0

    def grad_x(self, x, u) -> np.ndarray:
        return np.zeros_like(np.asarray(x, dtype=float))

    def grad_u(self, x, u) -> np.ndarray:
        return np.zeros_like(np.asarray(u, dtype=float))

    def to_params(self) -> Dict[str, Any]:
        return {}


def _quadratic(params: Dict[str, Any]) -> QuadraticTrackingCost:
    return QuadraticTrackingCost(np.asarray(params["target"], dtype=float), float(params.get("mu", 1.0)))


COSTS: Dict[str, Callable[[Dict[str, Any]], Any]] = {
    "quadratic_tracking": _quadratic,
    "zero": lambda params: ZeroCost(),
}


def register_cost(tag: str, factory: Callable[[Dict[str, Any]], Any]) -> None:
    """Register a convex cost family; instances must expose ``lipschitz``, ``value``, ``grad_x`` and ``grad_u``."""
    COSTS[tag] = factory


def cost_from_params(tag: str, params: Dict[str, Any]):
    try:
        factory = COSTS[tag]
    except KeyError:
        raise ValueError(f"Unknown cost '{tag}', expected one of {sorted(COSTS)}") from None
    cost = factory(params)
    if not np.isfinite(getattr(cost, "lipschitz", np.nan)):
        raise ValueError(f"Cost '{tag}' must declare a finite L_c")
    return cost
