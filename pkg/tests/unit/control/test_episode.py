from __future__ import annotations

import numpy as np
import pytest

from pyNeuralOCO.core.finite_difference import central_difference
from pyNeuralOCO.control import (
    build_policy_input,
    counterfactual_loss,
    episode_loss_and_gradient,
    loss_of_controls,
    policy_controls,
    policy_inputs,
    rollout,
    simulate,
    stabilize_transform,
)


@pytest.mark.control
def test_policy_input_layout():
    """Test z_3 = [w_2, w_1, 0] and its normalization."""
    history = np.array([[1.0, 0.0], [0.0, 2.0]])
    z, z_bar = build_policy_input(history, 3, 3, 2)
    np.testing.assert_array_equal(z, [0.0, 2.0, 1.0, 0.0, 0.0, 0.0])
    np.testing.assert_allclose(z_bar, z / np.sqrt(5.0))


@pytest.mark.control
def test_first_input_is_zero():
    """Test the empty history with and without the constant coordinate."""
    z, z_bar = build_policy_input(np.zeros((0, 2)), 1, 4, 2)
    assert not np.any(z_bar)
    z, z_bar = build_policy_input(np.zeros((0, 2)), 1, 4, 2, constant_coordinate=True)
    assert z_bar.shape == (9,)
    assert z_bar[-1] == 1.0
    with pytest.raises(ValueError):
        build_policy_input(np.zeros((0, 2)), 5, 4, 2)


@pytest.mark.control
def test_zero_input_gives_zero_control(policy):
    """Test u_1 = 0 without tripping the unit-norm check."""
    controls = policy_controls(policy, np.zeros((1, policy.p)))
    np.testing.assert_array_equal(controls, np.zeros((1, 2)))


@pytest.mark.control
def test_rollout_recovers_disturbances(policy, certified_episode):
    """Test that the rollout's states and recovered disturbances match the episode."""
    result = rollout(policy, certified_episode)
    np.testing.assert_allclose(result.disturbances, certified_episode.w, atol=1e-12)
    np.testing.assert_allclose(result.states, simulate(certified_episode, result.network_controls), atol=1e-12)
    assert result.loss == pytest.approx(counterfactual_loss(policy, certified_episode))


@pytest.mark.control
def test_rollout_checks_output_dimension(certified_episode, two_layer):
    """Test policy output dimension against d_u."""
    wrong = type(two_layer)(np.zeros((3, 2, 20)), np.ones((3, 1)), 1.0, "tanh", np.zeros((3, 2, 20)))
    with pytest.raises(ValueError, match="d_u"):
        rollout(wrong, certified_episode)


@pytest.mark.control
def test_control_gradient_matches_finite_differences(certified_episode, rng):
    """Test the costate pass against central differences in u."""
    controls = rng.standard_normal((certified_episode.K, certified_episode.du))

    def func(u):
        return loss_of_controls(certified_episode, u).value

    numeric = central_difference(func, controls, range(controls.size)).reshape(controls.shape)
    np.testing.assert_allclose(loss_of_controls(certified_episode, controls).control_grads, numeric,
                               rtol=1e-6, atol=1e-6)


@pytest.mark.control
def test_feedback_gradient_matches_finite_differences(certified_episode, rng):
    """Test the costate pass when the cost sees F_k x_k + u_k."""
    episode = stabilize_transform(certified_episode, 0.2 * rng.standard_normal((certified_episode.K, 2, 2)))
    controls = rng.standard_normal((episode.K, episode.du))
    numeric = central_difference(lambda u: loss_of_controls(episode, u).value, controls, range(controls.size))
    np.testing.assert_allclose(loss_of_controls(episode, controls).control_grads.ravel(), numeric,
                               rtol=1e-6, atol=1e-6)


@pytest.mark.control
def test_loss_is_convex_in_controls(certified_episode, rng):
    """Test midpoint convexity of the counterfactual loss in u_{1:K}."""
    for _ in range(20):
        first, second = rng.standard_normal((2, certified_episode.K, certified_episode.du))
        middle = loss_of_controls(certified_episode, 0.5 * (first + second)).value
        average = 0.5 * (loss_of_controls(certified_episode, first).value
                         + loss_of_controls(certified_episode, second).value)
        assert middle <= average + 1e-9


@pytest.mark.control
def test_episode_gradient_matches_finite_differences(policy, certified_episode, rng):
    """Test ∇_θ L against central differences on sampled coordinates."""
    value, grad = episode_loss_and_gradient(policy, certified_episode)
    assert value == pytest.approx(counterfactual_loss(policy, certified_episode))

    def func(theta):
        return counterfactual_loss(policy.with_theta(theta), certified_episode)

    coords = rng.choice(policy.theta.size, size=30, replace=False)
    numeric = central_difference(func, policy.theta, coords)
    np.testing.assert_allclose(grad.ravel()[coords], numeric, rtol=1e-4, atol=1e-6)


@pytest.mark.control
def test_policy_inputs_shape(certified_episode):
    """Test one normalized row per step, zero only at k = 1."""
    inputs = policy_inputs(certified_episode.w, certified_episode.K, certified_episode.dx)
    assert inputs.shape == (10, 20)
    norms = np.linalg.norm(inputs, axis=1)
    assert norms[0] == 0.0
    np.testing.assert_allclose(norms[1:], 1.0)
