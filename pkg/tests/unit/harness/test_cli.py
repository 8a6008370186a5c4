from __future__ import annotations

import pytest

from pyNeuralOCO.harness.cli import EXIT_ABORTED, EXIT_CONFIG, EXIT_FAILED, EXIT_IO, EXIT_OK, main
from pyNeuralOCO.oco import synthetic

CONFIG = """
experiment:
  kind: nearly_convex_synthetic
stream:
  rounds: 40
"""


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / "config.yaml"
    path.write_text(CONFIG)
    return path


@pytest.mark.harness
def test_run_and_inspect(config_file, tmp_path, capsys):
    """Test a run followed by inspecting its directory and trace."""
    out = tmp_path / "out"
    assert main(["run", "--config", str(config_file), "--out", str(out)]) == EXIT_OK
    assert "Final regret" in capsys.readouterr().out
    assert main(["inspect", str(out)]) == EXIT_OK
    lines = [line.split() for line in capsys.readouterr().out.splitlines()]
    assert ["experiment", "nearly_convex_synthetic"] in lines
    assert main(["inspect", str(out / "trace.csv")]) == EXIT_OK
    assert "regret identity ok" in capsys.readouterr().out


@pytest.mark.harness
def test_tampered_trace_fails_inspection(config_file, tmp_path):
    """Test exit code 1 for a trace whose regret column was edited."""
    out = tmp_path / "out"
    main(["run", "--config", str(config_file), "--out", str(out)])
    lines = (out / "trace.csv").read_text().splitlines()
    fields = lines[5].split(",")
    fields[4] = "123"
    lines[5] = ",".join(fields)
    (out / "trace.csv").write_text("\n".join(lines) + "\n")
    assert main(["inspect", str(out / "trace.csv")]) == EXIT_FAILED


@pytest.mark.harness
def test_inspect_container(tmp_path, capsys):
    """Test inspecting a parameter file by its magic bytes."""
    path = tmp_path / "config.yaml"
    path.write_text("experiment:\n  kind: online_rf\narchitecture:\n  m: 8\n  p: 3\nstream:\n  rounds: 5\n")
    main(["run", "--config", str(path), "--out", str(tmp_path / "out")])
    capsys.readouterr()
    assert main(["inspect", str(tmp_path / "out" / "params.pnoc")]) == EXIT_OK
    lines = [line.split() for line in capsys.readouterr().out.splitlines()]
    assert ["tag", "two_layer"] in lines


@pytest.mark.harness
def test_invalid_config_exit_code(tmp_path):
    """Test exit code 2 for bad and missing configurations."""
    path = tmp_path / "bad.yaml"
    path.write_text("architecture:\n  m: 7\n")
    assert main(["run", "--config", str(path)]) == EXIT_CONFIG
    assert main(["run", "--config", str(tmp_path / "missing.yaml")]) == EXIT_CONFIG


@pytest.mark.harness
@pytest.mark.parametrize(
    "text",
    [
        "experiment:\n  kind: nearly_convex_synthetic\nstream:\n  set_radius: -1.0\n",
        "experiment:\n  kind: episodic_control\ncontrol:\n  W: -1.0\n",
    ],
)
def test_out_of_range_config_exit_code(tmp_path, text):
    """Test exit code 2 for out-of-range values that would otherwise fail inside the run."""
    path = tmp_path / "range.yaml"
    path.write_text(text)
    assert main(["run", "--config", str(path), "--out", str(tmp_path / "out")]) == EXIT_CONFIG
    assert not (tmp_path / "out").exists()


@pytest.mark.harness
def test_write_failure_exit_code(config_file, tmp_path):
    """Test exit code 4 when the output directory cannot be created."""
    blocker = tmp_path / "blocker"
    blocker.write_text("")
    assert main(["run", "--config", str(config_file), "--out", str(blocker / "run")]) == EXIT_IO
    assert main(["inspect", str(tmp_path / "nothing-here")]) == EXIT_IO


@pytest.mark.harness
def test_aborted_run_exit_code(config_file, tmp_path, monkeypatch):
    """Test exit code 3 when the learner meets a non-finite gradient."""
    def broken(target):
        def oracle(theta):
            return float("nan"), theta

        return oracle

    monkeypatch.setattr(synthetic.NearlyConvexFamily, "oracle", lambda self, target: broken(target))
    assert main(["run", "--config", str(config_file), "--out", str(tmp_path / "out")]) == EXIT_ABORTED


@pytest.mark.harness
def test_multi_seed_run(config_file, tmp_path, capsys):
    """Test --seeds with a single worker."""
    out = tmp_path / "seeds"
    assert main(["run", "--config", str(config_file), "--out", str(out), "--seeds", "3", "4", "--workers", "1"]) == 0
    assert (out / "seed-3" / "metadata.json").exists()
    assert "mean avg_regret" in capsys.readouterr().out


@pytest.mark.harness
@pytest.mark.slow
def test_verify_default_suite(tmp_path, capsys):
    """Test that every hard check of the invariant suite passes with the default configuration."""
    path = tmp_path / "config.yaml"
    path.write_text("")
    assert main(["verify", "--config", str(path), "--out", str(tmp_path / "suite")]) == EXIT_OK
    output = capsys.readouterr().out
    assert "FAILED" not in output
    assert (tmp_path / "suite" / "checks.csv").exists()
