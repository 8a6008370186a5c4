"""
Regret trace CSV files.

Columns are exactly ``t, loss, cum_loss, comparator_cum_loss, regret, avg_regret``,
written with 17 significant digits and UNIX newlines. A missing comparator is
written as ``nan``. Every emitted file is re-read and its regret column checked.
"""

from __future__ import annotations

import io
import logging
from pathlib import Path
from typing import Any, Dict

import numpy as np
import pandas as pd

from ..core.errors import TraceWriteError
from ..core.serialization import PathLike, atomic_write_bytes
from ..oco.types import RegretTrace

logger = logging.getLogger(__name__)

TRACE_COLUMNS = ("t", "loss", "cum_loss", "comparator_cum_loss", "regret", "avg_regret")
REGRET_IDENTITY_TOL = 1e-9


def trace_frame(trace: RegretTrace) -> pd.DataFrame:
    frame = pd.DataFrame.from_records(trace.records(), columns=list(TRACE_COLUMNS))
    return frame.astype({"t": "int64"} | {column: "float64" for column in TRACE_COLUMNS[1:]})


def format_trace(trace: RegretTrace) -> str:
    buffer = io.StringIO()
    trace_frame(trace).to_csv(buffer, index=False, float_format="%.17g", lineterminator="\n", na_rep="nan")
    return buffer.getvalue()


def parse_trace(text: str) -> pd.DataFrame:
    frame = pd.read_csv(io.StringIO(text), float_precision="round_trip", dtype={"t": "int64"})
    if tuple(frame.columns) != TRACE_COLUMNS:
        raise ValueError(f"Trace columns {tuple(frame.columns)} differ from {TRACE_COLUMNS}")
    return frame


def read_trace(path: PathLike) -> pd.DataFrame:
    return parse_trace(Path(path).read_text(encoding="utf-8"))


def trace_from_frame(frame: pd.DataFrame) -> RegretTrace:
    return RegretTrace(frame["loss"].to_numpy(), frame["comparator_cum_loss"].to_numpy())


def check_regret_identity(frame: pd.DataFrame, tol: float = REGRET_IDENTITY_TOL) -> Dict[str, Any]:
    """regret = cum_loss - comparator_cum_loss and avg_regret = regret / t, recomputed from the file."""
    if frame.empty:
        return {"regret_error": 0.0, "avg_regret_error": 0.0, "cum_loss_error": 0.0, "passed": True}
    cum_loss = frame["cum_loss"].to_numpy()
    comparator = frame["comparator_cum_loss"].to_numpy()
    regret = frame["regret"].to_numpy()
    scale = np.maximum(1.0, np.abs(cum_loss))

    def worst(measured, expected) -> float:
        missing = np.isnan(measured) | np.isnan(expected)
        agree = np.isnan(measured) == np.isnan(expected)
        error = np.abs(np.where(missing, 0.0, measured - expected)) / scale
        return float(np.max(np.where(agree, error, np.inf)))

    report = {
        "regret_error": worst(regret, cum_loss - comparator),
        "avg_regret_error": worst(frame["avg_regret"].to_numpy(), regret / frame["t"].to_numpy()),
        "cum_loss_error": worst(cum_loss, np.cumsum(frame["loss"].to_numpy())),
    }
    report["passed"] = all(value <= tol for value in report.values())
    return report


def emit_trace(trace: RegretTrace, path: PathLike, tol: float = REGRET_IDENTITY_TOL) -> Path:
    """Write the trace atomically and verify the regret identity on what was written."""
    text = format_trace(trace)
    identity = check_regret_identity(parse_trace(text), tol)
    if not identity["passed"]:
        raise ValueError(f"Regret identity failed on emitted trace: {identity}")
    try:
        written = atomic_write_bytes(path, text.encode("utf-8"))
    except OSError as exc:
        raise TraceWriteError(f"could not write trace to {path}: {exc}") from exc
    logger.info("Wrote %d trace rows to %s", len(trace), written)
    return written
