"""
Run an experiment and persist its artifacts.

A run directory holds ``trace.csv``, ``metadata.json``, ``config.yaml`` and, when
present, ``params.pnoc``, ``teacher.pnoc`` and ``checks.csv``. Every file is written
to a temporary sibling and renamed, so an interrupted run leaves no partial file.
"""

from __future__ import annotations

import io
import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path
from typing import Any, Dict, List, NamedTuple, Optional, Sequence

import numpy as np

from .. import __version__
from ..core.errors import TraceWriteError
from ..core.seeding import GENERATOR_ID, SEED_COMPONENTS
from ..core.serialization import FORMAT_VERSION, atomic_write_bytes
from ..neural.dispatch import architecture_metadata
from ..neural.serialization import save_params
from ..rf.teacher import save_teacher
from .config import ExperimentConfig, worker_count
from .display import checks_frame
from .experiments import ExperimentResult, run_experiment
from .trace_io import emit_trace

logger = logging.getLogger(__name__)

TRACE_FILE = "trace.csv"
METADATA_FILE = "metadata.json"
CONFIG_FILE = "config.yaml"
PARAMS_FILE = "params.pnoc"
TEACHER_FILE = "teacher.pnoc"
CHECKS_FILE = "checks.csv"


class RunOutcome(NamedTuple):
    directory: Path
    result: ExperimentResult
    passed: bool


def _jsonable(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(key): _jsonable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(item) for item in value]
    if isinstance(value, np.ndarray):
        return _jsonable(value.tolist())
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float) and not np.isfinite(value):
        return None
    return value


def build_metadata(config: ExperimentConfig, result: ExperimentResult) -> Dict[str, Any]:
    """Everything needed to audit a run; no timestamps, so equal inputs give equal bytes."""
    trace = result["trace"]
    metadata: Dict[str, Any] = {
        "package_version": __version__,
        "container_version": FORMAT_VERSION,
        "experiment": config.experiment.kind,
        "name": config.experiment.name,
        "generator": GENERATOR_ID,
        "seeds": {"master": config.seeds.master, **{name: config.seed(name) for name in SEED_COMPONENTS}},
        "rounds": len(trace),
        "final_regret": float(trace.regret[-1]) if len(trace) else 0.0,
        "final_avg_regret": float(trace.avg_regret[-1]) if len(trace) else 0.0,
        "checks_passed": all(row["passed"] for row in result["checks"] if row["hard"]),
        "config": config.to_dict(),
    }
    if result["params"] is not None:
        metadata["architecture"] = architecture_metadata(result["params"])
    comparator = result["comparator"]
    if comparator is not None:
        metadata["comparator"] = {
            key: comparator[key] for key in ("kind", "label", "iterations", "final_grad_norm", "converged", "budget")
        }
    metadata.update(result["metadata"])
    return _jsonable(metadata)


def _write_text(path: Path, text: str) -> None:
    try:
        atomic_write_bytes(path, text.encode("utf-8"))
    except OSError as exc:
        raise TraceWriteError(f"could not write {path}: {exc}") from exc


def write_artifacts(config: ExperimentConfig, result: ExperimentResult) -> Path:
    directory = Path(config.output.directory)
    emit_trace(result["trace"], directory / TRACE_FILE, config.tolerances.regret_identity)
    if result["checks"]:
        buffer = io.StringIO()
        checks_frame(result["checks"]).to_csv(buffer, index=False, float_format="%.17g", lineterminator="\n")
        _write_text(directory / CHECKS_FILE, buffer.getvalue())
    try:
        if config.output.save_params and result["params"] is not None:
            save_params(directory / PARAMS_FILE, result["params"])
        if result["teacher"] is not None:
            save_teacher(directory / TEACHER_FILE, result["teacher"])
    except OSError as exc:
        raise TraceWriteError(f"could not write parameters to {directory}: {exc}") from exc
    _write_text(directory / CONFIG_FILE, config.dump())
    _write_text(directory / METADATA_FILE, json.dumps(build_metadata(config, result), indent=2, sort_keys=True) + "\n")
    return directory


def run(config: ExperimentConfig) -> RunOutcome:
    """Execute the configured experiment and write its artifacts."""
    logger.info("Running %s '%s' with master seed %d", config.experiment.kind, config.experiment.name,
                config.seeds.master)
    result = run_experiment(config)
    directory = write_artifacts(config, result)
    passed = all(row["passed"] for row in result["checks"] if row["hard"])
    logger.info("Artifacts written to %s", directory)
    return RunOutcome(directory, result, passed)


def _run_summary(config: ExperimentConfig) -> Dict[str, Any]:
    outcome = run(config)
    trace = outcome.result["trace"]
    return {
        "seed": config.seeds.master,
        "directory": str(outcome.directory),
        "rounds": len(trace),
        "regret": float(trace.regret[-1]) if len(trace) else 0.0,
        "avg_regret": float(trace.avg_regret[-1]) if len(trace) else 0.0,
        "passed": outcome.passed,
    }


def run_seeds(config: ExperimentConfig, seeds: Sequence[int], workers: Optional[int] = None) -> List[Dict[str, Any]]:
    """One run per master seed, each in ``<directory>/seed-<n>``, on a process pool."""
    base = Path(config.output.directory)
    configs = [
        replace(config.with_overrides(seed=seed), output=replace(config.output, directory=str(base / f"seed-{seed}")))
        for seed in seeds
    ]
    workers = workers if workers is not None else worker_count(min(len(configs), 4) or 1)
    if workers == 1 or len(configs) == 1:
        return [_run_summary(item) for item in configs]
    logger.info("Running %d seeds on %d workers", len(configs), workers)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_summary, configs))
