from __future__ import annotations

import numpy as np
import pytest

from pyNeuralOCO.control import (
    bounded_state_bound,
    certify,
    check_episode_bounds,
    check_sequential_stability,
    control_lipschitz_bound,
    episode_loss_and_gradient,
    loss_of_controls,
    make_episode,
    operator_norm,
    rollout,
    zero_costs,
)


@pytest.mark.control
def test_rotation_system_is_certified(certified_episode):
    """Test that ρQ_k products pass with C₁ = 1, ρ₁ = ρ."""
    certificate = certified_episode.certificate
    assert certificate is not None and certificate.passed
    assert certificate.n_products == 55  # windows ending at k = 1..10
    assert certificate.max_B_norm <= 1.0 + 1e-12


@pytest.mark.control
def test_expanding_system_fails():
    """Test that A = 2I is rejected and the worst window is reported."""
    A = np.repeat(2.0 * np.eye(2)[None], 3, axis=0)
    B = np.repeat(np.eye(2)[None], 3, axis=0)
    episode = make_episode(A, B, np.zeros((3, 2)), zero_costs(3), 1.0)
    certificate = check_sequential_stability(episode, 1.0, 0.5, 1.0)
    assert not certificate.passed
    assert (certificate.worst_k, certificate.worst_n) == (3, 3)
    assert certificate.worst_ratio == pytest.approx(64.0)  # 2³ / 0.5³
    assert certify(episode, 1.0, 0.5, 1.0).certificate is None


@pytest.mark.control
def test_large_inputs_fail():
    """Test the ‖B_k‖ ≤ C₂ side of the check."""
    A = np.repeat(0.5 * np.eye(2)[None], 2, axis=0)
    B = np.repeat(3.0 * np.eye(2)[None], 2, axis=0)
    episode = make_episode(A, B, np.zeros((2, 2)), zero_costs(2), 1.0)
    assert not check_sequential_stability(episode, 1.0, 0.5, 1.0).passed


@pytest.mark.control
def test_operator_norm():
    """Test the largest singular value and the empty matrix."""
    assert operator_norm(np.diag([3.0, -4.0])) == pytest.approx(4.0)
    assert operator_norm(np.zeros((0, 0))) == 0.0


@pytest.mark.control
def test_bound_formulas():
    """Test C₁/(1-ρ₁)(W + D_u C₂) and L'_c(1 + C₂C₁/(1-ρ₁))."""
    assert bounded_state_bound(1.0, 0.5, 1.0, 2.0, 1.0) == pytest.approx(6.0)
    assert control_lipschitz_bound(1.0, 2.0, 1.0, 1.0, 0.5, 1.0) == pytest.approx(9.0)


@pytest.mark.control
def test_measured_bounds_hold(policy, certified_episode):
    """Test that measured states and control gradients respect the certified bounds."""
    result = rollout(policy, certified_episode)
    grads = loss_of_controls(certified_episode, result.network_controls).control_grads
    report = check_episode_bounds(certified_episode, result, grads, certified_episode.certificate)
    assert report["states_ok"]
    assert report["control_grads_ok"]
    assert report["D_x"] > 0.0
    _, grad = episode_loss_and_gradient(policy, certified_episode)
    assert np.all(np.isfinite(grad))
