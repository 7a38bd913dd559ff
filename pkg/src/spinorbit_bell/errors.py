"""Exception types shared across the package."""


class SimulationError(Exception):
    """Base class for all package errors."""


class TruncationError(SimulationError):
    """Raised when a state cannot be represented within the configured cutoffs.

    Attributes:
        required_cutoff: smallest per-mode cutoff that would satisfy the
            requested tail tolerance, when known.
    """

    def __init__(self, message, required_cutoff=None):
        super().__init__(message)
        self.required_cutoff = required_cutoff


class ConfigError(SimulationError):
    """Raised on invalid run configuration; names the offending field."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field
