"""
Depth-H ReLU networks with one scalar subnetwork per output coordinate.

    x⁰ = A x,   xʰ = relu(θ[i,h] xʰ⁻¹),   f_i(θ[i]; x) = a[i]ᵀ x^H

A (m × p) is shared by all coordinates, a[i] is drawn per coordinate, both stay
frozen. Only θ (d × H × m × m) is trained. The ReLU subgradient at zero is 0.
"""

from __future__ import annotations

import hashlib
import logging
from dataclasses import dataclass, replace
from typing import List, Optional, Tuple

import numpy as np

from ..core.activations import ActivationSpec, get_activation
from ..core.errors import ShapeMismatchError
from ..core.seeding import make_rng
from ..core.validation import check_unit_input

logger = logging.getLogger(__name__)

ARCHITECTURE = "deep"


@dataclass(frozen=True, eq=False)
class DeepParams:
    A: np.ndarray
    theta: np.ndarray
    a: np.ndarray
    theta1: np.ndarray
    seed: Optional[int] = None

    def __post_init__(self):
        theta = np.asarray(self.theta, dtype=float)
        if theta.ndim != 4 or theta.shape[2] != theta.shape[3]:
            raise ShapeMismatchError(f"theta must have shape (d, H, m, m), got {theta.shape}")
        d, depth, m, _ = theta.shape
        if depth < 1:
            raise ValueError("Depth H must be at least 1")
        A = np.asarray(self.A, dtype=float)
        if A.ndim != 2 or A.shape[0] != m:
            raise ShapeMismatchError(f"A must have shape ({m}, p), got {A.shape}")
        a = np.asarray(self.a, dtype=float)
        if a.shape != (d, m):
            raise ShapeMismatchError(f"a must have shape {(d, m)}, got {a.shape}")
        theta1 = np.asarray(self.theta1, dtype=float)
        if theta1.shape != theta.shape:
            raise ShapeMismatchError("Initialization snapshot must match theta")
        for name, value in (("A", A), ("a", a), ("theta1", theta1)):
            value = value.copy()
            value.setflags(write=False)
            object.__setattr__(self, name, value)
        object.__setattr__(self, "theta", theta)

    @property
    def activation(self) -> ActivationSpec:
        return get_activation("relu")

    @property
    def d(self) -> int:
        return self.theta.shape[0]

    @property
    def H(self) -> int:
        return self.theta.shape[1]

    @property
    def m(self) -> int:
        return self.theta.shape[2]

    @property
    def p(self) -> int:
        return self.A.shape[1]

    def with_theta(self, theta) -> "DeepParams":
        theta = np.asarray(theta, dtype=float)
        if theta.shape != self.theta.shape:
            raise ShapeMismatchError(f"Expected theta of shape {self.theta.shape}, got {theta.shape}")
        return replace(self, theta=theta)

    def frozen_checksum(self) -> str:
        """SHA-256 over the bytes of A and a."""
        digest = hashlib.sha256()
        digest.update(np.ascontiguousarray(self.A, dtype="<f8").tobytes())
        digest.update(np.ascontiguousarray(self.a, dtype="<f8").tobytes())
        return digest.hexdigest()


def init_deep(p: int, d: int, m: int, H: int, seed: int = 0) -> DeepParams:
    """A and θ entries N(0, 2/m), a entries N(0, 1)."""
    if m < 1 or H < 1:
        raise ValueError(f"Need m >= 1 and H >= 1, got m={m}, H={H}")
    rng = make_rng(seed)
    scale = np.sqrt(2.0 / m)
    A = scale * rng.standard_normal((m, p))
    theta1 = scale * rng.standard_normal((d, H, m, m))
    a = rng.standard_normal((d, m))
    logger.debug("Initialized deep network p=%d d=%d m=%d H=%d", p, d, m, H)
    return DeepParams(A, theta1.copy(), a, theta1, seed)


def _forward_pass(params: DeepParams, inputs: np.ndarray) -> Tuple[List[np.ndarray], List[np.ndarray]]:
    """Hidden states x⁰..x^H and preactivations, each of shape (n, d, m)."""
    base = inputs @ params.A.T
    state = np.broadcast_to(base[:, None, :], (inputs.shape[0], params.d, params.m))
    states = [state]
    pre = []
    for h in range(params.H):
        z = np.einsum("ijk,nik->nij", params.theta[:, h], state)
        state = np.maximum(z, 0.0)
        pre.append(z)
        states.append(state)
    return states, pre


def _batch(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return x[None, :] if x.ndim == 1 else x


def deep_preactivations(params: DeepParams, x, strict: bool = True) -> List[np.ndarray]:
    x = check_unit_input(x, params.p, strict=strict)
    return _forward_pass(params, _batch(x))[1]


def forward_deep(params: DeepParams, x, strict: bool = True) -> np.ndarray:
    x = check_unit_input(x, params.p, strict=strict)
    states, _ = _forward_pass(params, _batch(x))
    out = np.einsum("ij,nij->ni", params.a, states[-1])
    return out[0] if x.ndim == 1 else out


def grad_deep(params: DeepParams, x, upstream, strict: bool = True) -> np.ndarray:
    """Reverse-mode subgradient of Σ_i upstream_i f_i, summed over batch rows."""
    x = check_unit_input(x, params.p, strict=strict)
    inputs = _batch(x)
    upstream = np.asarray(upstream, dtype=float).reshape(inputs.shape[0], params.d)
    states, pre = _forward_pass(params, inputs)
    grad = np.zeros_like(params.theta)
    back = upstream[:, :, None] * params.a[None, :, :]
    for h in reversed(range(params.H)):
        delta = back * (pre[h] > 0.0)
        grad[:, h] = np.einsum("nij,nik->ijk", delta, states[h])
        back = np.einsum("nij,ijk->nik", delta, params.theta[:, h])
    return grad


def kink_margin(params: DeepParams, x, strict: bool = True) -> float:
    """Smallest |preactivation| over all layers; finite differences are reliable when it is large."""
    return float(min(np.min(np.abs(z)) for z in deep_preactivations(params, x, strict=strict)))
