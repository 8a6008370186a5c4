from __future__ import annotations

import json

import pytest

from pyNeuralOCO.harness.config import parse_config
from pyNeuralOCO.harness.display import format_checks, format_metadata, format_runs, format_summary
from pyNeuralOCO.harness.runner import run, run_seeds
from pyNeuralOCO.harness.trace_io import read_trace
from pyNeuralOCO.neural import load_params
from pyNeuralOCO.rf import load_teacher

CONFIG = """
experiment:
  kind: online_rf
architecture:
  p: 4
  m: 16
stream:
  rounds: 20
seeds:
  master: 5
"""


def _metadata(directory):
    metadata = json.loads((directory / "metadata.json").read_text())
    metadata["config"]["output"].pop("directory")
    return metadata


@pytest.mark.harness
def test_artifacts(tmp_path):
    """Test the files of a run and what they hold."""
    outcome = run(parse_config(CONFIG).with_overrides(out=str(tmp_path / "run")))
    directory = outcome.directory
    for name in ("trace.csv", "metadata.json", "config.yaml", "params.pnoc", "teacher.pnoc", "checks.csv"):
        assert (directory / name).exists()
    assert len(read_trace(directory / "trace.csv")) == 20
    metadata = json.loads((directory / "metadata.json").read_text())
    assert metadata["seeds"]["master"] == 5
    assert metadata["comparator"]["kind"] == "constructive_theta_star"
    assert metadata["generator"] == "numpy.random.PCG64"
    assert load_params(directory / "params.pnoc").m == 16
    assert load_teacher(directory / "teacher.pnoc").D == 1.0
    assert outcome.passed


@pytest.mark.harness
def test_runs_are_reproducible(tmp_path):
    """Test byte-identical traces and parameters from one seed."""
    config = parse_config(CONFIG)
    first = run(config.with_overrides(out=str(tmp_path / "a"))).directory
    second = run(config.with_overrides(out=str(tmp_path / "b"))).directory
    for name in ("trace.csv", "params.pnoc", "teacher.pnoc", "checks.csv"):
        assert (first / name).read_bytes() == (second / name).read_bytes()
    assert _metadata(first) == _metadata(second)


@pytest.mark.harness
def test_seeds_change_the_run(tmp_path):
    """Test that a different master seed gives a different trace."""
    config = parse_config(CONFIG)
    first = run(config.with_overrides(out=str(tmp_path / "a"))).directory
    second = run(config.with_overrides(seed=6, out=str(tmp_path / "b"))).directory
    assert (first / "trace.csv").read_bytes() != (second / "trace.csv").read_bytes()


@pytest.mark.harness
def test_run_seeds(tmp_path):
    """Test one directory per seed and the aggregated table."""
    summaries = run_seeds(parse_config(CONFIG).with_overrides(out=str(tmp_path)), [1, 2], workers=1)
    assert [summary["seed"] for summary in summaries] == [1, 2]
    assert (tmp_path / "seed-1" / "trace.csv").exists()
    assert "mean avg_regret" in format_runs(summaries)


@pytest.mark.harness
def test_display(tmp_path):
    """Test the text tables."""
    outcome = run(parse_config(CONFIG).with_overrides(out=str(tmp_path / "run")))
    summary = format_summary(outcome.result["trace"], outcome.result["comparator"])
    assert summary.splitlines()[0].split() == ["Rounds", "20"]
    assert "constructive_theta_star (exact)" in summary
    assert "two_layer_regret_bound" in format_checks(outcome.result["checks"])
    assert format_checks([]) == "No checks recorded."
    assert format_metadata({}) == ""
    assert "a.b  1" in format_metadata({"a": {"b": 1}})
