from __future__ import annotations

import numpy as np
import pytest

from pyNeuralOCO.control import make_episode, policy_input_dim, run_episodic, zero_costs
from pyNeuralOCO.neural import decision_set, init_two_layer


@pytest.mark.control
def test_episodic_run(policy, certified_episode):
    """Test trace length, feasibility of the final policy and recorded disturbances."""
    ball = decision_set(policy, 2.0)
    start = policy.with_theta(ball.project(policy.theta))
    run = run_episodic(start, [certified_episode] * 4, ball, 0.01)
    assert len(run.trace) == 4
    assert ball.contains(run.params.theta, atol=1e-12)
    assert len(run.recorded) == 4
    np.testing.assert_allclose(run.recorded[0].w, certified_episode.w, atol=1e-12)
    assert all(result.gradient is not None for result in run.results)


@pytest.mark.control
def test_zero_cost_episodes(certified_episode):
    """Test that zero costs give zero losses and leave θ at θ₁."""
    episode = make_episode(certified_episode.A, certified_episode.B, certified_episode.w, zero_costs(10), 1.0)
    params = init_two_layer(policy_input_dim(10, 2), 2, 8, seed=1)
    run = run_episodic(params, [episode] * 3, decision_set(params, 1.0), 0.5, keep_results=False)
    np.testing.assert_array_equal(run.trace.losses, np.zeros(3))
    np.testing.assert_array_equal(run.params.theta, params.theta1)
    assert run.results == []


@pytest.mark.control
def test_no_episodes(policy):
    """Test an empty episode stream."""
    ball = decision_set(policy, 10.0)
    run = run_episodic(policy.with_theta(ball.project(policy.theta)), [], ball, 0.1)
    assert len(run.trace) == 0
