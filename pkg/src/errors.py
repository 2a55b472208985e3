"""
Exception hierarchy shared by the services.

Everything derives from ValueError so callers that only care about
"bad input" can keep catching ValueError.
"""
from typing import Dict, Optional


class SimulationError(ValueError):
    """Base class for simulator errors."""


class DimensionError(SimulationError):
    """Qubit counts or bit lengths do not match."""


class CapacityError(SimulationError):
    """A request exceeds a configured size cap."""


class UnsupportedGateError(SimulationError):
    """A backend was asked to apply a gate it cannot represent."""


class ChannelValidationError(SimulationError):
    """A channel violates one of its invariants."""


class ChannelSpecError(SimulationError):
    """A channel-spec document could not be parsed."""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class FitError(SimulationError):
    """A least-squares fit failed to converge."""

    def __init__(self, message: str, diagnostics: Optional[Dict] = None):
        self.diagnostics = diagnostics or {}
        super().__init__(message)
