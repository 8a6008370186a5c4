"""
Exception hierarchy shared by every subpackage.

Malformed calls are ``ValueError`` subclasses so callers that only know the
standard contract still catch them. Aborted online runs carry the round index
and the trace recorded up to the failing round.
"""

from __future__ import annotations

from typing import Any, Optional


class ShapeMismatchError(ValueError):
    """Tensor shapes or system dimensions do not agree."""


class InputNormError(ValueError):
    """A network input violates the unit-norm requirement in strict mode."""


class ConfigError(ValueError):
    """Invalid experiment configuration."""

    def __init__(self, message: str, field: Optional[str] = None, line: Optional[int] = None):
        self.field = field
        self.line = line
        location = ""
        if field is not None:
            location = f"{field}: "
        if line is not None:
            location = f"line {line}: {location}"
        super().__init__(f"{location}{message}")


class RunAbortedError(RuntimeError):
    """An online run stopped before consuming its whole stream."""

    def __init__(self, message: str, round_index: int, trace: Any = None):
        self.round_index = round_index
        self.trace = trace
        super().__init__(f"round {round_index}: {message}")


class NumericalAbortError(RunAbortedError):
    """Non-finite value, gradient or state encountered."""


class OracleFailureError(RunAbortedError):
    """A loss oracle raised while being queried."""


class TraceWriteError(OSError):
    """An artifact could not be written to its final path."""
