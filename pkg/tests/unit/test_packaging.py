from __future__ import annotations

from pathlib import Path

import pytest

import pyNeuralOCO

PYPROJECT = Path(__file__).resolve().parents[2] / "pyproject.toml"


def test_coverage_gate_and_version():
    """Test the full-coverage gate and the declared version."""
    tomllib = pytest.importorskip("tomllib")
    manifest = tomllib.loads(PYPROJECT.read_text(encoding="utf-8"))
    assert manifest["tool"]["coverage"]["report"]["fail_under"] == 100
    assert manifest["project"]["version"] == pyNeuralOCO.__version__
    assert manifest["project"]["scripts"]["pyneuraloco"] == "pyNeuralOCO.harness.cli:main"
