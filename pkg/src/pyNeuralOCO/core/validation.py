"""Input checks shared by the network and teacher evaluators."""

from __future__ import annotations

import logging

import numpy as np

from .errors import InputNormError, ShapeMismatchError

logger = logging.getLogger(__name__)

UNIT_NORM_TOL = 1e-9


def check_unit_input(x, dim: int, strict: bool = True, tol: float = UNIT_NORM_TOL) -> np.ndarray:
    """Validate one input of shape (dim,) or a batch of shape (n, dim) against the unit sphere.

    Strict mode raises; lenient mode logs a warning and proceeds.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim not in (1, 2) or x.shape[-1] != dim:
        raise ShapeMismatchError(f"Expected input of shape ({dim},) or (n, {dim}), got {x.shape}")
    norms = np.linalg.norm(x, axis=-1)
    off = np.abs(norms - 1.0) > tol
    if np.any(off):
        worst = float(np.max(np.abs(norms - 1.0)))
        message = f"input norm deviates from 1 by {worst:.3e} (tolerance {tol:g}); normalize inputs first"
        if strict:
            raise InputNormError(message)
        logger.warning("Lenient mode: %s", message)
    return x


def normalize(x) -> np.ndarray:
    """Scale rows to unit norm; zero rows stay zero."""
    x = np.asarray(x, dtype=float)
    norms = np.linalg.norm(x, axis=-1, keepdims=True)
    return np.divide(x, norms, out=np.zeros_like(x), where=norms > 0)
