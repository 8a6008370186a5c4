from __future__ import annotations

import numpy as np
import pytest

from pyNeuralOCO.core.errors import TraceWriteError
from pyNeuralOCO.harness.trace_io import (
    check_regret_identity,
    emit_trace,
    format_trace,
    parse_trace,
    read_trace,
    trace_from_frame,
)
from pyNeuralOCO.oco.types import RegretTrace

HEADER = "t,loss,cum_loss,comparator_cum_loss,regret,avg_regret"


@pytest.mark.harness
def test_single_round_file():
    """Test that one round gives a header and one row."""
    text = format_trace(RegretTrace([0.5], [0.25]))
    assert text == f"{HEADER}\n1,0.5,0.5,0.25,0.25,0.25\n"


@pytest.mark.harness
def test_empty_trace_is_header_only():
    """Test T = 0."""
    text = format_trace(RegretTrace([]))
    assert text == f"{HEADER}\n"
    assert check_regret_identity(parse_trace(text))["passed"]


@pytest.mark.harness
def test_missing_comparator_written_as_nan():
    """Test the nan spelling and that NaN columns still pass the identity."""
    text = format_trace(RegretTrace([1.0, 2.0]))
    assert text.splitlines()[1] == "1,1,1,nan,nan,nan"
    assert check_regret_identity(parse_trace(text))["passed"]


@pytest.mark.harness
def test_values_survive_the_file(tmp_path, rng):
    """Test that 17 significant digits reproduce every float exactly."""
    losses = rng.uniform(0, 1, 50)
    trace = RegretTrace(losses, np.cumsum(rng.uniform(0, 1, 50)))
    frame = read_trace(emit_trace(trace, tmp_path / "out" / "trace.csv"))
    restored = trace_from_frame(frame)
    assert restored.losses.tobytes() == trace.losses.tobytes()
    assert restored.comparator_cum_loss.tobytes() == trace.comparator_cum_loss.tobytes()
    assert check_regret_identity(frame)["passed"]


@pytest.mark.harness
def test_identity_detects_edits():
    """Test a regret column that disagrees with cum_loss - comparator_cum_loss."""
    frame = parse_trace(format_trace(RegretTrace([1.0, 1.0], [0.5, 1.0])))
    frame.loc[1, "regret"] = 2.0
    report = check_regret_identity(frame)
    assert not report["passed"]
    assert report["regret_error"] == pytest.approx(0.5)


@pytest.mark.harness
def test_wrong_columns():
    """Test files whose header is not the trace header."""
    with pytest.raises(ValueError, match="columns"):
        parse_trace("t,loss\n1,0.5\n")


@pytest.mark.harness
def test_unwritable_target(tmp_path):
    """Test that an I/O failure surfaces as a trace write error."""
    blocker = tmp_path / "blocker"
    blocker.write_text("not a directory")
    with pytest.raises(TraceWriteError):
        emit_trace(RegretTrace([1.0]), blocker / "trace.csv")
