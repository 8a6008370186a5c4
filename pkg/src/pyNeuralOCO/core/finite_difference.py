"""
Central finite differences for checking analytic gradients.
"""

from __future__ import annotations

import logging
from typing import Callable, Sequence

import numpy as np

logger = logging.getLogger(__name__)

DEFAULT_STEP = 1e-5
RELATIVE_FLOOR = 1e-6


def central_difference(func: Callable[[np.ndarray], float], theta: np.ndarray, coords: Sequence[int],
                       step: float = DEFAULT_STEP) -> np.ndarray:
    """Centered-difference partial derivatives of ``func`` at the flat indices ``coords``."""
    theta = np.asarray(theta, dtype=float)
    logger.debug("Finite differences on %d of %d coordinates, step %g", len(coords), theta.size, step)
    estimates = np.empty(len(coords))
    for j, index in enumerate(coords):
        shifted = theta.copy().ravel()
        shifted[index] = theta.flat[index] + step
        f_plus = func(shifted.reshape(theta.shape))
        shifted[index] = theta.flat[index] - step
        f_minus = func(shifted.reshape(theta.shape))
        estimates[j] = (f_plus - f_minus) / (2 * step)
    return estimates


def relative_error(analytic, numeric, floor: float = RELATIVE_FLOOR) -> np.ndarray:
    analytic = np.asarray(analytic, dtype=float)
    numeric = np.asarray(numeric, dtype=float)
    scale = np.maximum(np.maximum(np.abs(analytic), np.abs(numeric)), floor)
    return np.abs(analytic - numeric) / scale
