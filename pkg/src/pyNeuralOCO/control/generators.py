"""
Disturbance and system generators. Every disturbance generator clips to norm W;
the rotation-contraction family is certifiable with C₁ = 1 and ρ₁ = ρ.
"""

from __future__ import annotations

import logging
from typing import Callable, Dict, Optional, Sequence

import numpy as np
from scipy import stats

from .costs import QuadraticTrackingCost, ZeroCost
from .types import LtvEpisode

logger = logging.getLogger(__name__)


def clip_norm(w: np.ndarray, bound: float) -> np.ndarray:
    """Scale rows down to norm at most ``bound``."""
    norms = np.linalg.norm(w, axis=-1, keepdims=True)
    scale = np.minimum(1.0, np.divide(bound, norms, out=np.ones_like(norms), where=norms > 0))
    return w * scale


def zero_disturbances(horizon: int, dx: int, W: float, rng: np.random.Generator, **_) -> np.ndarray:
    return np.zeros((horizon, dx))


def uniform_disturbances(horizon: int, dx: int, W: float, rng: np.random.Generator, **_) -> np.ndarray:
    return clip_norm(rng.uniform(-W, W, size=(horizon, dx)), W)


def sinusoidal_disturbances(horizon: int, dx: int, W: float, rng: np.random.Generator,
                            period: float = 8.0, **_) -> np.ndarray:
    """W/√d_x · sin(2πk/period + φ_j), one random phase per coordinate."""
    phases = rng.uniform(0.0, 2.0 * np.pi, size=dx)
    steps = np.arange(1, horizon + 1)[:, None]
    return clip_norm(W / np.sqrt(dx) * np.sin(2.0 * np.pi * steps / period + phases[None, :]), W)


def sign_alternating_disturbances(horizon: int, dx: int, W: float, rng: np.random.Generator, **_) -> np.ndarray:
    """(-1)^k W v for a fixed random unit direction v."""
    direction = rng.standard_normal(dx)
    direction /= np.linalg.norm(direction)
    signs = (-1.0) ** np.arange(1, horizon + 1)
    return clip_norm(W * signs[:, None] * direction[None, :], W)


DISTURBANCES: Dict[str, Callable[..., np.ndarray]] = {
    "zero": zero_disturbances,
    "uniform": uniform_disturbances,
    "sinusoidal": sinusoidal_disturbances,
    "sign_alternating": sign_alternating_disturbances,
}


def generate_disturbances(kind: str, horizon: int, dx: int, W: float, rng: np.random.Generator,
                          **options) -> np.ndarray:
    try:
        generator = DISTURBANCES[kind]
    except KeyError:
        raise ValueError(f"Unknown disturbance generator '{kind}', expected one of {sorted(DISTURBANCES)}") from None
    return generator(horizon, dx, W, rng, **options)


def _rotation(dx: int, rng: np.random.Generator) -> np.ndarray:
    if dx == 1:
        return np.array([[rng.choice([-1.0, 1.0])]])
    return stats.ortho_group.rvs(dim=dx, random_state=rng)


def rotation_contraction_system(horizon: int, dx: int, du: int, rho: float, C2: float,
                                rng: np.random.Generator, time_varying: bool = True):
    """A_k = ρ Q_k with Q_k orthogonal, B_k Gaussian rescaled to operator norm in [C₂/2, C₂].

    Every window product has operator norm exactly ρⁿ.
    """
    count = horizon if time_varying else 1
    A = np.array([rho * _rotation(dx, rng) for _ in range(count)])
    B = rng.standard_normal((count, dx, du))
    norms = np.array([np.linalg.norm(block, 2) for block in B])
    B = B * (C2 * rng.uniform(0.5, 1.0, size=count) / norms)[:, None, None]
    if not time_varying:
        A = np.repeat(A, horizon, axis=0)
        B = np.repeat(B, horizon, axis=0)
    return A, B


def tracking_costs(horizon: int, target: Sequence[float], mu: float) -> tuple:
    cost = QuadraticTrackingCost(np.asarray(target, dtype=float), mu)
    return tuple(cost for _ in range(horizon))


def zero_costs(horizon: int) -> tuple:
    return tuple(ZeroCost() for _ in range(horizon))


def make_episode(A, B, w, costs, W: float, x1: Optional[np.ndarray] = None) -> LtvEpisode:
    A = np.asarray(A, dtype=float)
    if x1 is None:
        x1 = np.zeros(A.shape[1])
    return LtvEpisode(A, B, w, x1, tuple(costs), W)
