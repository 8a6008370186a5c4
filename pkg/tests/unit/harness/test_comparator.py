from __future__ import annotations

import numpy as np
import pytest

from pyNeuralOCO.core.ball import ball_around
from pyNeuralOCO.core.errors import ShapeMismatchError
from pyNeuralOCO.harness.comparator import (
    APPROXIMATE_LABEL,
    budget_sweep,
    constructive_theta_star,
    fixed_comparator,
    offline_comparator,
    projected_descent,
    unconstrained_diagnostic,
)
from pyNeuralOCO.neural import init_two_layer
from pyNeuralOCO.oco.synthetic import quadratic_comparator
from pyNeuralOCO.rf import sample_teacher, teacher_for_student


def _quadratic(targets):
    def objective(theta):
        residual = theta[None, :] - targets
        return 0.5 * float(np.sum(residual**2)), np.sum(residual, axis=0)

    def per_round(theta):
        return 0.5 * np.sum((theta[None, :] - targets) ** 2, axis=1)

    return objective, per_round


@pytest.mark.harness
@pytest.mark.parametrize("radius", [0.25, 10.0])
def test_descent_matches_closed_form(rng, radius):
    """Test the projected descent against the exact constrained minimizer, active and inactive."""
    targets = rng.normal(1.0, 1.0, (40, 3))
    objective, per_round = _quadratic(targets)
    ball = ball_around(np.zeros(3), radius)
    result = offline_comparator(objective, per_round, np.zeros(3), ball, budget=500)
    theta, losses = quadratic_comparator(targets, np.zeros(3), radius)
    assert result["converged"]
    assert result["label"] == APPROXIMATE_LABEL
    np.testing.assert_allclose(result["theta"], theta, atol=1e-6)
    assert result["cum_loss"][-1] == pytest.approx(np.sum(losses), abs=1e-6)


@pytest.mark.harness
def test_zero_losses():
    """Test that an identically zero stream stops at once with zero loss."""
    ball = ball_around(np.zeros(2), 1.0)
    theta, value, evaluations, _, converged = projected_descent(lambda t: (0.0, np.zeros(2)), np.zeros(2), ball)
    assert value == 0.0
    assert evaluations == 1
    assert converged
    np.testing.assert_array_equal(theta, np.zeros(2))


@pytest.mark.harness
def test_exhausted_budget_is_reported(rng):
    """Test that a budget of one pass reports non-convergence."""
    objective, per_round = _quadratic(rng.normal(size=(5, 2)))
    result = offline_comparator(objective, per_round, np.zeros(2), ball_around(np.zeros(2), 5.0), budget=1)
    assert not result["converged"]
    assert result["iterations"] == 1


@pytest.mark.harness
def test_budget_sweep_is_monotone(rng):
    """Test that more passes never give a larger comparator loss."""
    objective, _ = _quadratic(rng.normal(size=(10, 2)))
    sweep = budget_sweep(objective, np.zeros(2), ball_around(np.zeros(2), 5.0), [2, 4, 8, 16])
    assert sweep["monotone"]
    assert sweep["totals"][-1] <= sweep["totals"][0]


@pytest.mark.harness
def test_unconstrained_diagnostic_finds_mean(rng):
    """Test the L-BFGS-B diagnostic on a quadratic."""
    targets = rng.normal(3.0, 1.0, (20, 2))
    objective, per_round = _quadratic(targets)
    report = unconstrained_diagnostic(objective, np.zeros(2))
    assert report["success"]
    assert report["total_loss"] == pytest.approx(float(np.sum(per_round(targets.mean(axis=0)))), rel=1e-6)


@pytest.mark.harness
def test_constructive_theta_star_in_ball():
    """Test that θ* lies within bD√d/√m of θ₁."""
    params = init_two_layer(5, 2, 20, seed=4)
    theta_star = constructive_theta_star(teacher_for_student(params, 1.0, seed=2), params)
    radius = params.b * 1.0 * np.sqrt(2) / np.sqrt(20)
    assert np.linalg.norm((theta_star - params.theta1).ravel()) <= radius + 1e-12


@pytest.mark.harness
def test_constructive_theta_star_needs_student_features():
    """Test mismatched shapes and features."""
    params = init_two_layer(5, 2, 20, seed=4)
    with pytest.raises(ShapeMismatchError):
        constructive_theta_star(sample_teacher(5, 2, 1.0, 4, seed=1), params)
    with pytest.raises(ValueError, match="initial rows"):
        constructive_theta_star(sample_teacher(5, 2, 1.0, 10, seed=1), params)


@pytest.mark.harness
def test_fixed_comparator():
    """Test cumulative losses of a fixed comparator and unknown kinds."""
    result = fixed_comparator("zero_policy", None, [1.0, 2.0])
    np.testing.assert_array_equal(result["cum_loss"], [1.0, 3.0])
    assert result["label"] == "exact"
    with pytest.raises(ValueError):
        fixed_comparator("oracle", None, [])
