"""
Empirical checks of ε-near-convexity: ℓ(x) ≥ ℓ(y) + ∇ℓ(y)ᵀ(x - y) - ε.
"""

from __future__ import annotations

import logging
from typing import Callable, List, Optional, Sequence, TypedDict

import numpy as np

from ..core.ball import BallSet
from ..core.seeding import make_rng
from .types import LossOracle, as_oracle_output

logger = logging.getLogger(__name__)

NEAR_CONVEX_SLACK = 1e-8


class NearConvexityReport(TypedDict):
    """Outcome of a sampled near-convexity check."""

    epsilon: float
    max_violation: float
    excess: float
    passed: bool
    n_pairs: int
    scheme: str
    radii: List[float]


class CertifiedMargin(TypedDict):
    """Dense-grid certificate of the near-convexity margin of a scalar function."""

    epsilon: float
    grid_max: float
    slack: float
    n_grid: int


def _gap(oracle: LossOracle, x: np.ndarray, y: np.ndarray) -> float:
    value_x, _ = as_oracle_output(oracle(x))[:2]
    value_y, grad_y = as_oracle_output(oracle(y))[:2]
    return float(value_y + np.vdot(grad_y, x - y) - value_x)


def verify_nearly_convex(oracle: LossOracle, decision_set: BallSet, epsilon: float, n_pairs: int, seed: int,
                         scheme: str = "uniform", sphere_radii: Optional[Sequence[float]] = None,
                         slack: float = NEAR_CONVEX_SLACK) -> NearConvexityReport:
    """Sample pairs from the set and report the worst first-order violation.

    ``max_violation`` is the largest ``ℓ(y) + ∇ℓ(y)ᵀ(x - y) - ℓ(x)`` over both orderings
    of every pair. With ``scheme="sphere"`` the pairs cycle through ``sphere_radii``.
    """
    if n_pairs < 1:
        raise ValueError("n_pairs must be at least 1")
    if scheme == "sphere":
        if not sphere_radii:
            raise ValueError("Sphere sampling needs at least one radius")
        radii = [float(r) for r in sphere_radii]
    else:
        radii = [decision_set.radius]
    rng = make_rng(seed)

    worst = -np.inf
    for index in range(n_pairs):
        radius = radii[index % len(radii)] if scheme == "sphere" else None
        first = decision_set.sample(rng, scheme, sphere_radius=radius)
        second = decision_set.sample(rng, scheme, sphere_radius=radius)
        worst = max(worst, _gap(oracle, first, second), _gap(oracle, second, first))

    passed = worst <= epsilon + slack
    if not passed:
        logger.warning("Near-convexity violated: worst gap %.6g exceeds epsilon %.6g", worst, epsilon)
    else:
        logger.info("Near-convexity holds on %d pairs (worst gap %.6g, epsilon %.6g)", n_pairs, worst, epsilon)
    return {
        "epsilon": float(epsilon),
        "max_violation": float(worst),
        "excess": float(worst - epsilon),
        "passed": bool(passed),
        "n_pairs": int(n_pairs),
        "scheme": scheme,
        "radii": radii,
    }


def certify_nearly_convex_1d(func: Callable[[np.ndarray], np.ndarray], derivative: Callable[[np.ndarray], np.ndarray],
                             lo: float, hi: float, grad_bound: float, curvature_bound: float,
                             n_grid: int = 2001) -> CertifiedMargin:
    """Upper bound on the margin of a scalar function on [lo, hi].

    The gap g(x, y) = f(y) + f'(y)(x - y) - f(x) is maximized on an ``n_grid`` square grid.
    Its partial derivatives are bounded by 2G in x and M·(hi - lo) in y, so adding
    h·(2G + M·(hi - lo)) with grid spacing h covers the whole square.
    """
    grid = np.linspace(lo, hi, n_grid)
    values = np.asarray(func(grid), dtype=float)
    slopes = np.asarray(derivative(grid), dtype=float)
    # rows index x, columns index y
    gap = values[None, :] + slopes[None, :] * (grid[:, None] - grid[None, :]) - values[:, None]
    grid_max = max(float(np.max(gap)), 0.0)
    spacing = (hi - lo) / (n_grid - 1)
    slack = spacing * (2.0 * grad_bound + curvature_bound * (hi - lo))
    logger.debug("Certified margin %.6g on [%g, %g] (grid max %.6g)", grid_max + slack, lo, hi, grid_max)
    return {"epsilon": grid_max + slack, "grid_max": grid_max, "slack": slack, "n_grid": int(n_grid)}
