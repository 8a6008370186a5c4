"""
Frobenius-norm balls around the initialization: the decision sets of every
online run.

``joint`` mode is a single ball over the whole tensor. ``per_slice`` mode is one
ball of radius R for each slice along the first axis (one slice per output
coordinate). An infinite radius gives the unconstrained set.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Optional, Sequence

import numpy as np

from .errors import ShapeMismatchError

BallMode = Literal["joint", "per_slice"]
BALL_MODES = ("joint", "per_slice")
SAMPLING_SCHEMES = ("uniform", "sphere")


def _slice_norms(delta: np.ndarray) -> np.ndarray:
    flat = delta.reshape(delta.shape[0], -1)
    return np.sqrt(np.sum(flat * flat, axis=1))


@dataclass(frozen=True, eq=False)
class BallSet:
    center: np.ndarray
    radius: float
    mode: BallMode = "joint"

    def __post_init__(self):
        if not self.radius >= 0:
            raise ValueError(f"Ball radius must be nonnegative, got {self.radius}")
        if self.mode not in BALL_MODES:
            raise ValueError(f"Unknown ball mode '{self.mode}', expected one of {BALL_MODES}")
        center = np.array(self.center, dtype=float)
        if self.mode == "per_slice" and center.ndim < 1:
            raise ShapeMismatchError("per_slice mode needs a center with at least one axis")
        center.setflags(write=False)
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "radius", float(self.radius))

    @property
    def shape(self):
        return self.center.shape

    @property
    def diameter(self) -> float:
        """Diameter in the Frobenius norm of the whole tensor."""
        if self.mode == "joint":
            return 2.0 * self.radius
        return 2.0 * self.radius * np.sqrt(self.center.shape[0])

    def _check(self, theta) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        if theta.shape != self.center.shape:
            raise ShapeMismatchError(f"Expected tensor of shape {self.center.shape}, got {theta.shape}")
        return theta

    def distances(self, theta) -> np.ndarray:
        """Distance to the center, one entry (joint) or one per slice."""
        delta = self._check(theta) - self.center
        if self.mode == "joint":
            return np.array([np.linalg.norm(delta.ravel())])
        return _slice_norms(delta)

    def contains(self, theta, atol: float = 0.0) -> bool:
        return bool(np.all(self.distances(theta) <= self.radius + atol))

    def project(self, theta) -> np.ndarray:
        """Euclidean projection; points already inside (boundary included) are returned unchanged."""
        theta = self._check(theta)
        delta = theta - self.center
        if self.mode == "joint":
            norm = float(np.linalg.norm(delta.ravel()))
            if norm <= self.radius:
                return theta.copy()
            return self.center + (self.radius / norm) * delta
        norms = _slice_norms(delta)
        outside = norms > self.radius
        if not np.any(outside):
            return theta.copy()
        scale = np.ones_like(norms)
        scale[outside] = self.radius / norms[outside]
        return self.center + delta * scale.reshape((-1,) + (1,) * (delta.ndim - 1))

    def sample(self, rng: np.random.Generator, scheme: str = "uniform",
               sphere_radius: Optional[float] = None) -> np.ndarray:
        """Draw a point uniformly in the ball, or uniformly on a sphere of given radius.

        Uniform sampling scales a normalized Gaussian direction to ``R * u**(1/n)``
        with ``n`` the number of coordinates of the ball (per slice in per_slice mode).
        """
        if scheme not in SAMPLING_SCHEMES:
            raise ValueError(f"Unknown sampling scheme '{scheme}', expected one of {SAMPLING_SCHEMES}")
        if not np.isfinite(self.radius) and sphere_radius is None:
            raise ValueError("Cannot sample uniformly from an unbounded set")
        if scheme == "sphere" and sphere_radius is None:
            raise ValueError("Sphere sampling needs a sphere_radius")
        direction = rng.standard_normal(self.center.shape)
        if self.mode == "joint":
            direction = direction / np.linalg.norm(direction.ravel())
            n_coords = direction.size
            radius = self._draw_radius(rng, scheme, sphere_radius, n_coords, 1)
            return self.center + radius[0] * direction
        n_slices = self.center.shape[0]
        norms = _slice_norms(direction)
        direction = direction / norms.reshape((-1,) + (1,) * (direction.ndim - 1))
        n_coords = direction[0].size
        radius = self._draw_radius(rng, scheme, sphere_radius, n_coords, n_slices)
        return self.center + direction * radius.reshape((-1,) + (1,) * (direction.ndim - 1))

    def _draw_radius(self, rng, scheme, sphere_radius, n_coords, count) -> np.ndarray:
        if scheme == "sphere":
            return np.full(count, float(sphere_radius))
        u = rng.uniform(size=count)
        return self.radius * u ** (1.0 / n_coords)


def ball_around(center: np.ndarray, radius: float, mode: BallMode = "joint") -> BallSet:
    return BallSet(np.asarray(center, dtype=float), radius, mode)


def unconstrained(shape: Sequence[int]) -> BallSet:
    """The whole space, as a ball of infinite radius around zero."""
    return BallSet(np.zeros(tuple(shape)), np.inf, "joint")
