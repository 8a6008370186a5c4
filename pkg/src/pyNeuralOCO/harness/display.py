"""Plain-text tables for check results, run summaries and artifact metadata."""

from __future__ import annotations

from typing import Any, Dict, Iterable, List, Mapping, Optional

import numpy as np
import pandas as pd

from ..oco.types import RegretTrace
from .comparator import ComparatorResult


def checks_frame(rows: Iterable[Mapping[str, Any]]) -> pd.DataFrame:
    columns = ["check", "group", "measured", "bound", "passed", "hard"]
    return pd.DataFrame.from_records(list(rows), columns=columns)


def format_checks(rows: Iterable[Mapping[str, Any]]) -> str:
    frame = checks_frame(rows)
    if frame.empty:
        return "No checks recorded."
    # Mapping of column keys to display labels
    key_labels: Dict[str, str] = {
        "check": "Check",
        "group": "Group",
        "measured": "Measured",
        "bound": "Bound",
        "passed": "Passed",
        "hard": "Hard",
    }
    frame = frame.assign(
        passed=frame["passed"].map({True: "ok", False: "FAILED"}),
        hard=frame["hard"].map({True: "hard", False: "monitor"}),
    )
    return frame.rename(columns=key_labels).to_string(index=False, float_format=lambda value: f"{value:.6g}")


def summary_rows(trace: RegretTrace, comparator: Optional[ComparatorResult] = None) -> Dict[str, Any]:
    rounds = len(trace)
    summary: Dict[str, Any] = {
        "Rounds": rounds,
        "Cumulative loss": float(trace.cum_loss[-1]) if rounds else 0.0,
        "Comparator loss": float(trace.comparator_cum_loss[-1]) if rounds else 0.0,
        "Final regret": float(trace.regret[-1]) if rounds else 0.0,
        "Average regret": float(trace.avg_regret[-1]) if rounds else 0.0,
    }
    if comparator is not None:
        summary["Comparator"] = f"{comparator['kind']} ({comparator['label']})"
        if comparator["kind"] == "offline_gd_oracle":
            summary["Comparator passes"] = comparator["iterations"]
            summary["Comparator converged"] = comparator["converged"]
    return summary


def format_summary(trace: RegretTrace, comparator: Optional[ComparatorResult] = None) -> str:
    summary = summary_rows(trace, comparator)
    width = max(len(key) for key in summary)
    lines = []
    for key, value in summary.items():
        text = f"{value:.6g}" if isinstance(value, float) else str(value)
        lines.append(f"{key:<{width}}  {text}")
    return "\n".join(lines)


def format_runs(outcomes: List[Mapping[str, Any]]) -> str:
    """One row per seed of a multi-seed run, plus the mean and standard error of the final average regret."""
    frame = pd.DataFrame.from_records(outcomes)
    text = frame.to_string(index=False, float_format=lambda value: f"{value:.6g}")
    if len(frame) > 1:
        values = frame["avg_regret"].to_numpy(dtype=float)
        text += f"\nmean avg_regret {np.mean(values):.6g} ± {np.std(values, ddof=1) / np.sqrt(len(values)):.3g}"
    return text


def format_metadata(metadata: Mapping[str, Any]) -> str:
    """Flatten nested metadata into dotted keys, one per line."""
    if not metadata:
        return ""
    flat = pd.json_normalize(dict(metadata), sep=".").iloc[0].to_dict()
    width = max((len(key) for key in flat), default=0)
    return "\n".join(f"{key:<{width}}  {value}" for key, value in sorted(flat.items()))
