from __future__ import annotations

import pytest

from pyNeuralOCO.core.errors import ConfigError
from pyNeuralOCO.harness.config import ExperimentConfig, load_config, parse_config, worker_count


@pytest.mark.harness
def test_defaults():
    """Test the configuration used when a file sets nothing."""
    config = parse_config("")
    assert config == ExperimentConfig()
    assert config.experiment.kind == "invariant_suite"
    assert config.algorithm.eta0 == "paper_default"
    assert config.tolerances.projection == 1e-12


@pytest.mark.harness
def test_overrides_from_yaml():
    """Test typed values, integer-to-float widening and numeric step sizes."""
    config = parse_config(
        "experiment:\n  kind: online_rf\narchitecture:\n  m: 128\n  radius: 2\nalgorithm:\n  eta0: 0.5\n"
    )
    assert config.experiment.kind == "online_rf"
    assert config.architecture.m == 128
    assert config.architecture.radius == 2.0
    assert isinstance(config.architecture.radius, float)
    assert config.algorithm.eta0 == 0.5


@pytest.mark.harness
def test_unknown_key_reports_path_and_line():
    """Test the section.key path and 1-based line in the error."""
    with pytest.raises(ConfigError) as info:
        parse_config("experiment:\n  kind: online_rf\narchitecture:\n  width: 10\n")
    assert info.value.field == "architecture.width"
    assert info.value.line == 4
    assert str(info.value).startswith("line 4: architecture.width:")


@pytest.mark.harness
@pytest.mark.parametrize(
    "text, field",
    [
        ("architecture:\n  m: big\n", "architecture.m"),
        ("architecture:\n  m: 7\n", "architecture.m"),
        ("architecture:\n  loss: hinge\n", "architecture.loss"),
        ("control:\n  rho: 1.5\n", "control.rho"),
        ("algorithm:\n  eta0: fast\n", "algorithm.eta0"),
        ("stream:\n  rounds: -1\n", "stream.rounds"),
        ("experiment:\n  strict_inputs: 1\n", "experiment.strict_inputs"),
        ("telemetry:\n  on: true\n", "telemetry"),
        ("stream:\n  set_radius: -1.0\n", "stream.set_radius"),
        ("stream:\n  set_radius: .inf\n", "stream.set_radius"),
        ("stream:\n  noise: -0.1\n", "stream.noise"),
        ("control:\n  W: 0\n", "control.W"),
        ("control:\n  W: -1.0\n", "control.W"),
        ("control:\n  period: 0\n", "control.period"),
        ("architecture:\n  kappa: .nan\n", "architecture.kappa"),
        ("tolerances:\n  rollout: 0\n", "tolerances.rollout"),
    ],
)
def test_invalid_values(text, field):
    """Test rejection of wrong types, invalid choices and out-of-range values."""
    with pytest.raises(ConfigError) as info:
        parse_config(text)
    assert info.value.field == field


@pytest.mark.harness
def test_range_errors_name_the_line():
    """Test that out-of-range radii and disturbance bounds report their line."""
    with pytest.raises(ConfigError, match="must be at least 0") as info:
        parse_config("experiment:\n  kind: nearly_convex_synthetic\nstream:\n  set_radius: -1.0\n")
    assert info.value.line == 4
    with pytest.raises(ConfigError, match="must be greater than 0") as info:
        parse_config("experiment:\n  kind: episodic_control\ncontrol:\n  horizon: 5\n  W: -1.0\n")
    assert (info.value.field, info.value.line) == ("control.W", 5)


@pytest.mark.harness
def test_invalid_yaml():
    """Test that YAML syntax errors become configuration errors."""
    with pytest.raises(ConfigError, match="invalid YAML"):
        parse_config("architecture: [m: 3\n")


@pytest.mark.harness
def test_dump_round_trip():
    """Test that a dumped configuration parses back to the same value."""
    config = parse_config("experiment:\n  kind: episodic_control\ncontrol:\n  horizon: 6\n  constant_coordinate: true\n")
    assert parse_config(config.dump()) == config
    assert ExperimentConfig.from_dict(config.to_dict()) == config


@pytest.mark.harness
def test_with_overrides():
    """Test command-line overrides of seed, kind and output directory."""
    config = ExperimentConfig().with_overrides(seed=9, kind="online_rf", out="elsewhere")
    assert config.seeds.master == 9
    assert config.experiment.kind == "online_rf"
    assert config.output.directory == "elsewhere"
    assert config.seed("init") != config.seed("stream")
    with pytest.raises(ConfigError):
        ExperimentConfig().with_overrides(kind="offline")


@pytest.mark.harness
def test_missing_file(tmp_path):
    """Test loading a config that does not exist."""
    with pytest.raises(ConfigError, match="not found"):
        load_config(tmp_path / "absent.yaml")


@pytest.mark.harness
def test_worker_count(monkeypatch):
    """Test the worker environment variable."""
    monkeypatch.delenv("PYNEURALOCO_WORKERS", raising=False)
    assert worker_count(2) == 2
    monkeypatch.setenv("PYNEURALOCO_WORKERS", "3")
    assert worker_count() == 3
    monkeypatch.setenv("PYNEURALOCO_WORKERS", "0")
    assert worker_count() == 1
    monkeypatch.setenv("PYNEURALOCO_WORKERS", "many")
    with pytest.raises(ConfigError):
        worker_count()
