"""State and Lipschitz bounds for certified episodes, evaluated with measured D_x and D_u."""

from __future__ import annotations

from typing import Any, Dict

import numpy as np

from .types import EpisodeResult, LtvEpisode, StabilityCertificate


def bounded_state_bound(C1: float, rho1: float, W: float, D_u: float, C2: float) -> float:
    """C₁/(1 - ρ₁) · (W + D_u C₂)."""
    return C1 / (1.0 - rho1) * (W + D_u * C2)


def cost_lipschitz_on_trajectory(L_c: float, D_x: float, D_u: float) -> float:
    """L'_c = L_c · max{1, D_x + D_u}."""
    return L_c * max(1.0, D_x + D_u)


def control_lipschitz_bound(L_c: float, D_x: float, D_u: float, C1: float, rho1: float, C2: float) -> float:
    """Bound on ‖∂L/∂u_k‖: L'_c (1 + C₂C₁/(1 - ρ₁)).

    The leading 1 accounts for c_k's own control argument; the geometric sum covers
    the later states through M_k^i.
    """
    return cost_lipschitz_on_trajectory(L_c, D_x, D_u) * (1.0 + C2 * C1 / (1.0 - rho1))


def check_episode_bounds(episode: LtvEpisode, result: EpisodeResult, control_grads: np.ndarray,
                         certificate: StabilityCertificate) -> Dict[str, Any]:
    """Measured state and control-gradient norms against the bounds of a certified episode."""
    state_norms = np.linalg.norm(result.states, axis=1)
    D_x = float(np.max(state_norms))
    D_u = float(np.max(np.linalg.norm(result.network_controls, axis=1))) if episode.K else 0.0
    D_c = float(np.max(np.linalg.norm(result.controls, axis=1))) if episode.K else 0.0
    state_bound = bounded_state_bound(certificate.C1, certificate.rho1, episode.W, D_u, certificate.C2)
    grad_bound = control_lipschitz_bound(
        episode.cost_lipschitz, D_x, D_c, certificate.C1, certificate.rho1, certificate.C2
    )
    max_grad = float(np.max(np.linalg.norm(control_grads, axis=1))) if episode.K else 0.0
    return {
        "D_x": D_x,
        "D_u": D_u,
        "state_bound": state_bound,
        "states_ok": bool(D_x <= state_bound * (1 + 1e-12)),
        "max_control_grad": max_grad,
        "control_grad_bound": grad_bound,
        "control_grads_ok": bool(max_grad <= grad_bound * (1 + 1e-12)),
    }
