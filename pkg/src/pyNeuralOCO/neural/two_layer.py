"""
Two-layer networks with symmetric initialization.

Coordinate i of the output is

    f_i(θ[i]; x) = (1/b) Σ_r a_{i,r} (σ(θ[i,r]ᵀx) - σ(θ̄[i,r]ᵀx))

where rows ``0..m/2-1`` of ``θ[i]`` hold θ[i,r] and rows ``m/2..m-1`` hold the
mirrored θ̄[i,r], whose output weight is ā = -a. Initialization duplicates the
Gaussian rows, so the output at θ₁ is exactly zero.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from typing import Optional, Union

import numpy as np

from ..core.activations import ActivationSpec, resolve_activation
from ..core.errors import ShapeMismatchError
from ..core.seeding import make_rng
from ..core.validation import check_unit_input

logger = logging.getLogger(__name__)

ARCHITECTURE = "two_layer"


@dataclass(frozen=True, eq=False)
class TwoLayerParams:
    theta: np.ndarray
    a: np.ndarray
    b: float
    activation: ActivationSpec
    theta1: np.ndarray
    seed: Optional[int] = None

    def __post_init__(self):
        theta = np.asarray(self.theta, dtype=float)
        if theta.ndim != 3:
            raise ShapeMismatchError(f"theta must have shape (d, m, p), got {theta.shape}")
        d, m, _ = theta.shape
        if m < 2 or m % 2:
            raise ValueError(f"Hidden width m must be even and at least 2, got {m}")
        a = np.asarray(self.a, dtype=float)
        if a.shape != (d, m // 2):
            raise ShapeMismatchError(f"Output signs must have shape {(d, m // 2)}, got {a.shape}")
        if not np.all(np.abs(a) == 1.0):
            raise ValueError("Output weights a must be ±1")
        theta1 = np.asarray(self.theta1, dtype=float)
        if theta1.shape != theta.shape:
            raise ShapeMismatchError("Initialization snapshot must match theta")
        if not self.b > 0:
            raise ValueError(f"Scaling factor b must be positive, got {self.b}")
        a = a.copy()
        theta1 = theta1.copy()
        a.setflags(write=False)
        theta1.setflags(write=False)
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "theta1", theta1)
        object.__setattr__(self, "b", float(self.b))
        object.__setattr__(self, "activation", resolve_activation(self.activation))

    @property
    def d(self) -> int:
        return self.theta.shape[0]

    @property
    def m(self) -> int:
        return self.theta.shape[1]

    @property
    def p(self) -> int:
        return self.theta.shape[2]

    @property
    def output_weights(self) -> np.ndarray:
        """Signs of all m rows: a for the first half, ā = -a for the mirrored half."""
        return np.concatenate([self.a, -self.a], axis=1)

    def with_theta(self, theta) -> "TwoLayerParams":
        theta = np.asarray(theta, dtype=float)
        if theta.shape != self.theta.shape:
            raise ShapeMismatchError(f"Expected theta of shape {self.theta.shape}, got {theta.shape}")
        return replace(self, theta=theta)


def init_two_layer(p: int, d: int, m: int, b: Optional[float] = None, seed: int = 0,
                   activation: Union[str, ActivationSpec] = "tanh") -> TwoLayerParams:
    """Symmetric initialization; b defaults to √m."""
    if m < 2 or m % 2:
        raise ValueError(f"Hidden width m must be even and at least 2, got {m}")
    if b is None:
        b = float(np.sqrt(m))
    rng = make_rng(seed)
    half = m // 2
    rows = rng.standard_normal((d, half, p))
    a = rng.choice(np.array([-1.0, 1.0]), size=(d, half))
    theta1 = np.concatenate([rows, rows], axis=1)
    logger.debug("Initialized two-layer network p=%d d=%d m=%d b=%g", p, d, m, b)
    return TwoLayerParams(theta1.copy(), a, b, activation, theta1, seed)


def _batch(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return x[None, :] if x.ndim == 1 else x


def preactivations(params: TwoLayerParams, x) -> np.ndarray:
    """θ[i,r]ᵀx for a batch, shape (n, d, m)."""
    return np.einsum("imp,np->nim", params.theta, _batch(x))


def forward_two_layer(params: TwoLayerParams, x, strict: bool = True) -> np.ndarray:
    """Network output, shape (d,) for one input or (n, d) for a batch."""
    x = check_unit_input(x, params.p, strict=strict)
    activated = params.activation.value(preactivations(params, x))
    half = params.m // 2
    # pairwise differences make the output exactly zero when mirrored rows agree
    out = np.einsum("ir,nir->ni", params.a, activated[..., :half] - activated[..., half:]) / params.b
    return out[0] if x.ndim == 1 else out


def grad_two_layer(params: TwoLayerParams, x, upstream, strict: bool = True) -> np.ndarray:
    """Σ_i upstream_i ∇_θ f_i, summed over batch rows; same shape as θ."""
    x = check_unit_input(x, params.p, strict=strict)
    inputs = _batch(x)
    upstream = np.asarray(upstream, dtype=float)
    upstream = upstream.reshape(inputs.shape[0], params.d)
    slopes = params.activation.derivative(preactivations(params, inputs))
    weights = upstream[:, :, None] * params.output_weights[None, :, :] * slopes / params.b
    return np.einsum("nim,np->imp", weights, inputs)
