"""
Sequential stability: ‖A_k ··· A_{k-n+1}‖_op ≤ C₁ρ₁ⁿ for all windows and ‖B_k‖_op ≤ C₂.
"""

from __future__ import annotations

import logging
from dataclasses import replace

import numpy as np
from scipy import linalg

from .types import LtvEpisode, StabilityCertificate

logger = logging.getLogger(__name__)

STABILITY_TOL = 1e-12


def operator_norm(matrix: np.ndarray) -> float:
    """Largest singular value."""
    if matrix.size == 0:
        return 0.0
    return float(linalg.svdvals(matrix)[0])


def check_sequential_stability(episode: LtvEpisode, C1: float, rho1: float, C2: float) -> StabilityCertificate:
    """Check every window product ending at each k, n = 1..k, and every ‖B_k‖.

    The worst (k, n) pair is the window with the largest ratio ‖product‖ / (C₁ρ₁ⁿ), 1-based.
    """
    worst_ratio, worst_k, worst_n = 0.0, 0, 0
    products = 0
    for k in range(episode.K):
        product = np.eye(episode.dx)
        for n in range(1, k + 2):
            product = product @ episode.A[k - n + 1]
            products += 1
            ratio = operator_norm(product) / (C1 * rho1**n)
            if ratio > worst_ratio:
                worst_ratio, worst_k, worst_n = ratio, k + 1, n
    max_b = max((operator_norm(block) for block in episode.B), default=0.0)
    passed = worst_ratio <= 1.0 + STABILITY_TOL and max_b <= C2 * (1.0 + STABILITY_TOL)
    certificate = StabilityCertificate(
        float(C1), float(rho1), float(C2), bool(passed), worst_k, worst_n, float(worst_ratio), float(max_b), products
    )
    if passed:
        logger.debug("Sequential stability certified with C1=%g rho1=%g C2=%g", C1, rho1, C2)
    else:
        logger.warning("Sequential stability fails at window (k=%d, n=%d): ratio %.6g, max ||B|| %.6g",
                       worst_k, worst_n, worst_ratio, max_b)
    return certificate


def certify(episode: LtvEpisode, C1: float, rho1: float, C2: float) -> LtvEpisode:
    """Attach the certificate when the episode passes; otherwise return it uncertified."""
    certificate = check_sequential_stability(episode, C1, rho1, C2)
    return replace(episode, certificate=certificate if certificate.passed else None)
