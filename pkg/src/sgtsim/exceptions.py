"""Exception types shared across the package."""


class SgtError(Exception):
    """Base class for all package-specific errors."""


class InvalidDimensionError(SgtError):
    """Raised for zero or otherwise unusable Hilbert-space dimensions."""


class DimensionMismatchError(SgtError):
    """Raised when two states (or a state and an operator) disagree on dimension."""


class DegenerateStateError(SgtError):
    """Raised when a vector with norm below 1e-12 would have to be normalized."""


class InvalidGainError(SgtError):
    """Raised for non-positive gains where a positive gain is required."""


class NoSignalError(SgtError):
    """Raised when a reconstruction is attempted on all-zero count data."""


class OracleError(SgtError):
    """Wraps a measurement-oracle failure, carrying the iteration index."""

    def __init__(self, iteration: int, message: str = "measurement oracle failed"):
        self.iteration = iteration
        super().__init__(f"{message} at iteration {iteration}")


class ConfigError(SgtError):
    """Raised for malformed or inconsistent configuration input."""
