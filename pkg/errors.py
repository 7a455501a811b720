"""Exception hierarchy for the atomc toolkit.

Every failure that the toolkit raises on purpose derives from AtomcError, so
callers (the pipeline, the studies and the CLI) can turn them into result
dicts and exit codes without catching unrelated bugs.
"""

from typing import Optional


class AtomcError(Exception):
    """Base class for all toolkit errors."""


class CircuitError(AtomcError):
    """Raised when a gate or circuit violates its structural invariants."""


class QasmError(AtomcError):
    """Raised when an OpenQASM program cannot be turned into a Circuit."""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.message = message
        self.line = line
        self.column = column
        if line is not None:
            super().__init__(f"line {line}, column {column}: {message}")
        else:
            super().__init__(message)


class LoweringError(AtomcError):
    """Raised when a gate kind has no rule reaching the target native set."""


class HardwareSpecError(AtomcError):
    """Raised for unknown presets, unreadable or invalid hardware files."""


class RoutingError(AtomcError):
    """Raised when a gate cannot be made executable on the coupling graph."""

    def __init__(self, message: str, gate_index: Optional[int] = None):
        self.gate_index = gate_index
        super().__init__(message if gate_index is None else f"gate {gate_index}: {message}")


class PlanMismatchError(AtomcError):
    """Raised when two plans that must cover the same circuit do not."""


class StudyError(AtomcError):
    """Raised for invalid trade-off study parameters (empty ranges, bad kinds)."""
