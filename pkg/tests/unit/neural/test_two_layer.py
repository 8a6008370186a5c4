from __future__ import annotations

import numpy as np
import pytest

from pyNeuralOCO.core.errors import InputNormError, ShapeMismatchError
from pyNeuralOCO.core.finite_difference import central_difference
from pyNeuralOCO.core.seeding import unit_sphere
from pyNeuralOCO.neural import decision_set, forward_two_layer, grad_two_layer, init_two_layer


@pytest.mark.neural
def test_output_is_zero_at_initialization(two_layer, rng):
    """Test that mirrored rows cancel exactly at θ₁."""
    inputs = unit_sphere(rng, 25, two_layer.p)
    np.testing.assert_array_equal(forward_two_layer(two_layer, inputs), np.zeros((25, two_layer.d)))


@pytest.mark.neural
def test_initialization_layout():
    """Test shapes, the default scale b = √m and the duplicated halves."""
    params = init_two_layer(3, 2, 8, seed=1)
    assert params.theta.shape == (2, 8, 3)
    assert params.a.shape == (2, 4)
    assert params.b == pytest.approx(np.sqrt(8))
    np.testing.assert_array_equal(params.theta[:, :4], params.theta[:, 4:])
    np.testing.assert_array_equal(params.output_weights[:, 4:], -params.a)


@pytest.mark.neural
def test_initialization_is_seeded():
    """Test that the seed alone determines θ₁."""
    np.testing.assert_array_equal(init_two_layer(3, 1, 4, seed=9).theta, init_two_layer(3, 1, 4, seed=9).theta)


@pytest.mark.neural
@pytest.mark.parametrize("width", [0, 3, 7])
def test_width_must_be_even(width):
    """Test rejection of odd or degenerate widths."""
    with pytest.raises(ValueError, match="even"):
        init_two_layer(3, 1, width)


@pytest.mark.neural
def test_gradient_matches_finite_differences(two_layer, rng):
    """Test the analytic gradient against central differences away from θ₁."""
    current = two_layer.with_theta(decision_set(two_layer, 1.0).sample(rng))
    x = unit_sphere(rng, 1, current.p)[0]
    upstream = np.array([0.7, -1.3])

    def func(theta):
        return float(upstream @ forward_two_layer(current.with_theta(theta), x))

    coords = rng.choice(current.theta.size, size=30, replace=False)
    numeric = central_difference(func, current.theta, coords)
    analytic = grad_two_layer(current, x, upstream).ravel()[coords]
    np.testing.assert_allclose(analytic, numeric, rtol=1e-4, atol=1e-8)


@pytest.mark.neural
def test_coordinates_use_their_own_slice(two_layer, rng):
    """Test that ∇f_i is supported on θ[i] only."""
    current = two_layer.with_theta(decision_set(two_layer, 1.0).sample(rng))
    x = unit_sphere(rng, 1, current.p)[0]
    grad = grad_two_layer(current, x, np.array([1.0, 0.0]))
    assert np.any(grad[0] != 0.0)
    np.testing.assert_array_equal(grad[1], 0.0)


@pytest.mark.neural
def test_batch_gradient_sums_rows(two_layer, rng):
    """Test that a batch gradient is the sum of single-input gradients."""
    current = two_layer.with_theta(decision_set(two_layer, 0.5).sample(rng))
    inputs = unit_sphere(rng, 4, current.p)
    upstream = rng.standard_normal((4, current.d))
    single = sum(grad_two_layer(current, x, u) for x, u in zip(inputs, upstream))
    np.testing.assert_allclose(grad_two_layer(current, inputs, upstream), single, atol=1e-12)


@pytest.mark.neural
def test_inputs_must_be_unit_norm(two_layer):
    """Test strict rejection and lenient acceptance of off-sphere inputs."""
    x = np.full(two_layer.p, 1.0)
    with pytest.raises(InputNormError):
        forward_two_layer(two_layer, x)
    assert forward_two_layer(two_layer, x, strict=False).shape == (two_layer.d,)


@pytest.mark.neural
def test_with_theta_checks_shape(two_layer):
    """Test that replacing θ keeps the architecture."""
    with pytest.raises(ShapeMismatchError):
        two_layer.with_theta(np.zeros((1, 2, 3)))


@pytest.mark.neural
def test_frozen_fields_are_read_only(two_layer):
    """Test that a and θ₁ cannot be modified in place."""
    with pytest.raises(ValueError):
        two_layer.a[0, 0] = 2.0
    with pytest.raises(ValueError):
        two_layer.theta1[0, 0, 0] = 2.0
