from __future__ import annotations

import numpy as np
import pytest

from pyNeuralOCO.core.seeding import unit_sphere
from pyNeuralOCO.neural import decision_set, get_output_loss, init_two_layer, load_params, network_oracle, save_params
from pyNeuralOCO.neural.monitors import (
    deep_margin_scaling,
    deep_output_monitor,
    two_layer_gradient_bound_check,
    two_layer_gradient_lipschitz_check,
)
from pyNeuralOCO.oco.validation import verify_nearly_convex


@pytest.mark.neural
def test_two_layer_gradient_bounds():
    """Test ‖∇f_i‖ ≤ √m C/b and the C/b gradient Lipschitz bound on sampled points."""
    params = init_two_layer(4, 2, 64, b=8.0, seed=2)
    bound = two_layer_gradient_bound_check(params, 2.0, 30, seed=1)
    assert bound["passed"]
    assert bound["bound"] == pytest.approx(1.0)
    lipschitz = two_layer_gradient_lipschitz_check(params, 2.0, 30, seed=1)
    assert lipschitz["passed"]
    assert 0.0 < lipschitz["measured"] <= 1.0 / 8.0 + 1e-12


@pytest.mark.neural
def test_two_layer_margin_holds(rng):
    """Test that sampled gaps stay below 2CLR²/b."""
    params = init_two_layer(4, 2, 32, seed=6)
    x = unit_sphere(rng, 1, 4)[0]
    oracle = network_oracle(params, x, np.array([0.3, -0.3]), get_output_loss("absolute"))
    radius = 0.5
    report = verify_nearly_convex(oracle, decision_set(params, radius), 2 * radius**2 / params.b, 200, seed=2)
    assert report["passed"]


@pytest.mark.neural
@pytest.mark.slow
def test_two_layer_constants_at_full_size(rng):
    """Test the gradient bound, gradient Lipschitz bound and 2CLR²/b margin at m=256, b=16, R=2 over 500 draws."""
    params = init_two_layer(8, 2, 256, b=16.0, seed=11)
    bound = two_layer_gradient_bound_check(params, 2.0, 500, seed=12)
    assert bound["bound"] == pytest.approx(1.0)
    assert bound["passed"]
    lipschitz = two_layer_gradient_lipschitz_check(params, 2.0, 500, seed=13)
    assert lipschitz["bound"] == pytest.approx(1.0 / 16.0)
    assert lipschitz["passed"]

    x = unit_sphere(rng, 1, 8)[0]
    oracle = network_oracle(params, x, rng.uniform(-1.0, 1.0, size=2), get_output_loss("absolute"))
    report = verify_nearly_convex(oracle, decision_set(params, 2.0), 0.5, 500, seed=14)
    assert report["passed"]
    assert report["max_violation"] <= 0.5 + 1e-8


@pytest.mark.neural
def test_deep_monitors_report(deep, rng):
    """Test that the deep monitors return their measured ratios."""
    report = deep_output_monitor(deep, 0.05, 10, seed=1, kappa=100.0)
    assert report["within_kappa"]
    assert report["output_kappa"] >= 0.0
    x = unit_sphere(rng, 1, deep.p)[0]
    scaling = deep_margin_scaling(deep, x, np.zeros(2), get_output_loss("absolute"), 0.1, 20, seed=3)
    assert scaling["rate_ratio"] == pytest.approx(4 ** (4 / 3))
    assert scaling["shrunk_radius"] == pytest.approx(0.025)


@pytest.mark.neural
@pytest.mark.parametrize("network", ["two_layer", "deep"])
def test_params_round_trip(network, request, tmp_path):
    """Test bitwise save and load of both parameter types."""
    params = request.getfixturevalue(network)
    path = save_params(tmp_path / "params.pnoc", params)
    loaded = load_params(path)
    assert type(loaded) is type(params)
    assert loaded.theta.tobytes() == params.theta.tobytes()
    assert loaded.theta1.tobytes() == params.theta1.tobytes()
    assert loaded.seed == params.seed
