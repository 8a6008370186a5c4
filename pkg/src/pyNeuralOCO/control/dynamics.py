"""
LTV dynamics: the affine step, disturbance recovery, recursive simulation and the
closed-form decomposition x_k = x_k^nat + Σ_{i<k} M_i^k u_i with
M_i^k = A_{k-1} ··· A_{i+1} B_i.
"""

from __future__ import annotations

import logging
from dataclasses import replace
from typing import NamedTuple

import numpy as np

from ..core.errors import ShapeMismatchError
from .types import LtvEpisode

logger = logging.getLogger(__name__)


def _check_dims(A, B, x, u) -> None:
    if A.shape != (x.size, x.size):
        raise ShapeMismatchError(f"A has shape {A.shape}, state has dimension {x.size}")
    if B.shape != (x.size, u.size):
        raise ShapeMismatchError(f"B has shape {B.shape}, expected ({x.size}, {u.size})")


def step(A, B, x, u, w) -> np.ndarray:
    """x_{k+1} = A x + B u + w."""
    A, B, x, u, w = (np.atleast_1d(np.asarray(value, dtype=float)) for value in (A, B, x, u, w))
    A = A.reshape(x.size, -1) if A.ndim < 2 else A
    B = B.reshape(x.size, -1) if B.ndim < 2 else B
    _check_dims(A, B, x, u)
    if w.shape != x.shape:
        raise ShapeMismatchError(f"Disturbance has shape {w.shape}, state has shape {x.shape}")
    return A @ x + B @ u + w


def recover_disturbance(x_next, A, B, x, u) -> np.ndarray:
    """w = x_{k+1} - A x - B u."""
    A, B, x, u, x_next = (np.atleast_1d(np.asarray(value, dtype=float)) for value in (A, B, x, u, x_next))
    A = A.reshape(x.size, -1) if A.ndim < 2 else A
    B = B.reshape(x.size, -1) if B.ndim < 2 else B
    _check_dims(A, B, x, u)
    if x_next.shape != x.shape:
        raise ShapeMismatchError(f"Next state has shape {x_next.shape}, state has shape {x.shape}")
    return x_next - A @ x - B @ u


def simulate(episode: LtvEpisode, controls) -> np.ndarray:
    """States x_1..x_{K+1} under the given network controls, shape (K+1, d_x)."""
    controls = np.asarray(controls, dtype=float).reshape(episode.K, episode.du)
    states = np.empty((episode.K + 1, episode.dx))
    states[0] = episode.x1
    for k in range(episode.K):
        states[k + 1] = episode.A[k] @ states[k] + episode.B[k] @ controls[k] + episode.w[k]
    return states


class TransferDecomposition(NamedTuple):
    """``natural[k]`` is x^nat at state index k; ``transfer[k, i]`` is M_i^k (zero for i >= k)."""

    natural: np.ndarray
    transfer: np.ndarray

    def states(self, controls) -> np.ndarray:
        controls = np.asarray(controls, dtype=float)
        return self.natural + np.einsum("kiab,ib->ka", self.transfer, controls)


def transfer_decomposition(episode: LtvEpisode) -> TransferDecomposition:
    horizon, dx, du = episode.K, episode.dx, episode.du
    natural = simulate(episode, np.zeros((horizon, du)))
    transfer = np.zeros((horizon + 1, horizon, dx, du))
    for i in range(horizon):
        block = episode.B[i]
        for k in range(i + 1, horizon + 1):
            transfer[k, i] = block
            if k < horizon:
                block = episode.A[k] @ block
    return TransferDecomposition(natural, transfer)


def closed_form_states(episode: LtvEpisode, controls) -> np.ndarray:
    return transfer_decomposition(episode).states(np.asarray(controls, dtype=float).reshape(episode.K, episode.du))


def stabilize_transform(episode: LtvEpisode, gains) -> LtvEpisode:
    """Closed-loop episode with A'_k = A_k + B_k F_k; the gains are kept for the cost's composite control."""
    gains = np.asarray(gains, dtype=float)
    if gains.shape != (episode.K, episode.du, episode.dx):
        raise ShapeMismatchError(f"Gains must have shape {(episode.K, episode.du, episode.dx)}, got {gains.shape}")
    closed = episode.A + np.einsum("kab,kbc->kac", episode.B, gains)
    feedback = gains if episode.feedback is None else episode.feedback + gains
    logger.debug("Applied feedback gains to %d steps", episode.K)
    return replace(episode, A=closed, feedback=feedback, certificate=None)
