"""
Configuration for pytest: markers, integration selection and shared fixtures.

Node ids containing ``_int_`` are marked ``integration`` and deselected by default.
"""

from __future__ import annotations

import numpy as np
import pytest
from _pytest.nodes import Item

from pyNeuralOCO.control.generators import generate_disturbances, make_episode, rotation_contraction_system, tracking_costs
from pyNeuralOCO.control.policy import policy_input_dim
from pyNeuralOCO.control.stability import certify
from pyNeuralOCO.harness.config import ExperimentConfig
from pyNeuralOCO.neural.deep import init_deep
from pyNeuralOCO.neural.two_layer import init_two_layer


def pytest_collection_modifyitems(items: list[Item]):
    for item in items:
        if "_int_" in item.nodeid:
            item.add_marker(pytest.mark.integration)


def pytest_configure(config):
    """Add custom markers to pytest configuration."""
    custom_markers = [
        "oco: tests for the online learners, reduction and regret accounting",
        "neural: tests for network evaluation, gradients and theory constants",
        "rf: tests for random-feature teachers and the kernel estimator",
        "control: tests for dynamics, policies and episodic learning",
        "harness: tests for configuration, comparators, artifacts and the command line",
    ]
    for marker in custom_markers:
        config.addinivalue_line("markers", marker)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def two_layer():
    """Small tanh network: p=6, d=2, m=16, b=4."""
    return init_two_layer(6, 2, 16, seed=3)


@pytest.fixture
def deep():
    """Small ReLU network: p=4, d=2, m=16, H=2."""
    return init_deep(4, 2, 16, 2, seed=3)


@pytest.fixture
def certified_episode():
    """Rotation-contraction system, d_x=d_u=2, K=10, uniform disturbances, certified with C1=1, rho1=0.8, C2=1."""
    rng = np.random.default_rng(7)
    A, B = rotation_contraction_system(10, 2, 2, 0.8, 1.0, rng)
    w = generate_disturbances("uniform", 10, 2, 1.0, rng)
    episode = make_episode(A, B, w, tracking_costs(10, np.full(2, 0.5), 1.0), 1.0)
    return certify(episode, 1.0, 0.8, 1.0)


@pytest.fixture
def policy(certified_episode):
    """Two-layer policy for the certified episode, moved off its initialization."""
    params = init_two_layer(policy_input_dim(10, 2), 2, 16, seed=5)
    rng = np.random.default_rng(11)
    return params.with_theta(params.theta1 + 0.3 * rng.standard_normal(params.theta1.shape))


@pytest.fixture
def run_config(tmp_path):
    """Default configuration writing into a temporary directory."""
    return ExperimentConfig().with_overrides(out=str(tmp_path / "run"))
