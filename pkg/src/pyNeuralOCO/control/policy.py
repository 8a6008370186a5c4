"""Disturbance-history policy inputs and the network policy u_k = f(θ; z̄_k)."""

from __future__ import annotations

import numpy as np

from ..neural.dispatch import NetworkParams, forward
from .types import PolicyInput


def policy_input_dim(horizon: int, dx: int, constant_coordinate: bool = False) -> int:
    return horizon * dx + (1 if constant_coordinate else 0)


def build_policy_input(history, k: int, horizon: int, dx: int, constant_coordinate: bool = False) -> PolicyInput:
    """z_k = vec([w_{k-1}, ..., w_1, 0, ..., 0]) and z̄_k = z_k / ‖z_k‖ (zero stays zero).

    ``history`` holds w_1..w_{k-1} (or more; only the first k-1 rows are used).
    With ``constant_coordinate`` a trailing 1 is appended before normalizing, so
    z̄_k is a unit vector even for the empty history.
    """
    if not 1 <= k <= horizon:
        raise ValueError(f"Step k={k} outside 1..{horizon}")
    history = np.asarray(history, dtype=float).reshape(-1, dx)[: k - 1]
    z = np.zeros(policy_input_dim(horizon, dx, constant_coordinate))
    if k > 1:
        z[: (k - 1) * dx] = history[::-1].ravel()
    if constant_coordinate:
        z[-1] = 1.0
    norm = float(np.linalg.norm(z))
    z_bar = z / norm if norm > 0 else np.zeros_like(z)
    return PolicyInput(z, z_bar)


def policy_inputs(disturbances, horizon: int, dx: int, constant_coordinate: bool = False) -> np.ndarray:
    """Normalized inputs z̄_1..z̄_K built from a recorded disturbance sequence, shape (K, p)."""
    return np.array(
        [build_policy_input(disturbances, k, horizon, dx, constant_coordinate).z_bar for k in range(1, horizon + 1)]
    ).reshape(horizon, policy_input_dim(horizon, dx, constant_coordinate))


def nonzero_rows(inputs) -> np.ndarray:
    return np.linalg.norm(np.atleast_2d(inputs), axis=-1) > 0


def policy_controls(params: NetworkParams, inputs, strict: bool = True) -> np.ndarray:
    """f(θ; z̄_k) for a batch of inputs; zero inputs give zero controls without the unit-norm check."""
    inputs = np.atleast_2d(np.asarray(inputs, dtype=float))
    controls = np.zeros((inputs.shape[0], params.d))
    mask = nonzero_rows(inputs)
    if np.any(mask):
        controls[mask] = forward(params, inputs[mask], strict=strict)
    return controls
