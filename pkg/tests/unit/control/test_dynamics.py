from __future__ import annotations

import numpy as np
import pytest

from pyNeuralOCO.core.errors import ShapeMismatchError
from pyNeuralOCO.control import (
    closed_form_states,
    recover_disturbance,
    simulate,
    stabilize_transform,
    step,
    transfer_decomposition,
)


@pytest.mark.control
def test_step_example():
    """Test x' = Ax + Bu + w with identity matrices."""
    np.testing.assert_array_equal(step(np.eye(2), np.eye(2), [1.0, 0.0], [0.0, 1.0], [0.0, 0.0]), [1.0, 1.0])


@pytest.mark.control
def test_scalar_system():
    """Test d_x = d_u = 1 with scalar arguments."""
    np.testing.assert_allclose(step(0.5, 2.0, [1.0], [1.0], [0.25]), [2.75])


@pytest.mark.control
def test_disturbance_recovery(rng):
    """Test that w is recovered from (x, u, x')."""
    A, B = rng.standard_normal((3, 3)), rng.standard_normal((3, 2))
    x, u, w = rng.standard_normal(3), rng.standard_normal(2), rng.standard_normal(3)
    np.testing.assert_allclose(recover_disturbance(step(A, B, x, u, w), A, B, x, u), w, atol=1e-12)


@pytest.mark.control
def test_dimension_mismatch():
    """Test shape checking of the system matrices."""
    with pytest.raises(ShapeMismatchError):
        step(np.eye(3), np.eye(2), np.zeros(2), np.zeros(2), np.zeros(2))


@pytest.mark.control
def test_closed_form_matches_recursion(certified_episode, rng):
    """Test x_k = x_k^nat + Σ M_i^k u_i against the recursion."""
    controls = rng.standard_normal((certified_episode.K, certified_episode.du))
    np.testing.assert_allclose(
        closed_form_states(certified_episode, controls), simulate(certified_episode, controls), atol=1e-10
    )


@pytest.mark.control
def test_transfer_blocks(certified_episode):
    """Test M_i^{i+1} = B_i, M_i^{i+2} = A_{i+1} B_i and zeros above the diagonal."""
    transfer = transfer_decomposition(certified_episode).transfer
    episode = certified_episode
    np.testing.assert_array_equal(transfer[1, 0], episode.B[0])
    np.testing.assert_allclose(transfer[3, 1], episode.A[2] @ episode.B[1])
    np.testing.assert_array_equal(transfer[2, 5], 0.0)


@pytest.mark.control
def test_stabilized_episode(certified_episode, rng):
    """Test the closed-loop matrices and that gains accumulate."""
    gains = 0.1 * rng.standard_normal((certified_episode.K, 2, 2))
    closed = stabilize_transform(certified_episode, gains)
    np.testing.assert_allclose(closed.A[4], certified_episode.A[4] + certified_episode.B[4] @ gains[4])
    assert closed.certificate is None
    np.testing.assert_allclose(stabilize_transform(closed, gains).feedback, 2 * gains)
    with pytest.raises(ShapeMismatchError):
        stabilize_transform(certified_episode, gains[:, :1])
