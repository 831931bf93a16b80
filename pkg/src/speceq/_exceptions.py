"""Exception types used across the package.

The CLI maps these onto exit codes: input problems exit with 2,
numeric failures with 3.
"""

__all__ = [
    "InputDataError",
    "NumericFailure",
    "DegenerateSpectrumError",
    "BootstrapAbort",
    "ExperimentAbort",
]


class InputDataError(ValueError):
    """Raised when user-supplied data or configuration is malformed."""


class NumericFailure(RuntimeError):
    """Raised when a computation produces numerically invalid results."""


class DegenerateSpectrumError(NumericFailure):
    """Raised when a spectral estimate is identically zero, so the
    studentization constants are undefined."""


class BootstrapAbort(NumericFailure):
    """Raised when too many bootstrap replicates are degenerate."""


class ExperimentAbort(NumericFailure):
    """Raised when too many Monte Carlo repetitions fail."""
