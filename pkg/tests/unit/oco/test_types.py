from __future__ import annotations

import numpy as np
import pytest

from pyNeuralOCO.core.ball import ball_around
from pyNeuralOCO.oco.types import RegretTrace, make_state


@pytest.mark.oco
def test_trace_columns():
    """Test prefix sums, regret and average regret."""
    trace = RegretTrace([1.0, 2.0, 3.0], [0.5, 1.0, 1.5])
    np.testing.assert_allclose(trace.cum_loss, [1.0, 3.0, 6.0])
    np.testing.assert_allclose(trace.regret, [0.5, 2.0, 4.5])
    np.testing.assert_allclose(trace.avg_regret, [0.5, 1.0, 1.5])
    assert trace.records()[1] == (2, 2.0, 3.0, 1.0, 2.0, 1.0)


@pytest.mark.oco
def test_comparator_defaults_to_nan():
    """Test the empty comparator column and attaching one later."""
    trace = RegretTrace([1.0, 1.0])
    assert np.all(np.isnan(trace.regret))
    np.testing.assert_allclose(trace.with_comparator([0.0, 0.0]).regret, [1.0, 2.0])


@pytest.mark.oco
def test_comparator_length_checked():
    """Test that a comparator column of the wrong length is rejected."""
    with pytest.raises(ValueError, match="rounds"):
        RegretTrace([1.0, 2.0], [1.0])


@pytest.mark.oco
def test_truncated():
    """Test keeping the first rounds."""
    trace = RegretTrace([1.0, 2.0, 3.0], [0.0, 0.0, 0.0]).truncated(2)
    np.testing.assert_allclose(trace.cum_loss, [1.0, 3.0])



@pytest.mark.oco
def test_truncated_keeps_final_state():
    """Test that truncation carries the learner state forward."""
    ball = ball_around(np.zeros(1), 1.0)
    state = make_state(np.array([0.5]), ball, 1.0)
    trace = RegretTrace([1.0, 2.0, 3.0], final_state=state).truncated(1)
    assert len(trace) == 1
    assert trace.final_state is state

@pytest.mark.oco
def test_make_state_validation():
    """Test infeasible starts and unknown algorithms."""
    ball = ball_around(np.zeros(2), 1.0)
    with pytest.raises(ValueError, match="outside"):
        make_state(np.array([2.0, 0.0]), ball, 1.0)
    with pytest.raises(ValueError, match="Unknown algorithm"):
        make_state(np.zeros(2), ball, 1.0, "ftpl")
    with pytest.raises(ValueError, match="nonnegative"):
        make_state(np.zeros(2), ball, -1.0)
