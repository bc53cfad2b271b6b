"""Semantic exception hierarchy for the pconf package.

Library code never raises bare ValueError/ArithmeticError for contract
violations; the CLI maps these classes onto exit codes.
"""


class PconfError(Exception):
    """Base class for all errors raised by this package."""


class InvalidSpecError(PconfError, ValueError):
    """A spec/config object violates its invariants (bad covariance, k out of
    family range, epochs < 1, ...)."""


class DataFormatError(PconfError, ValueError):
    """A file does not match the documented CSV schema.

    Carries optional row (1-based file line) and column context.
    """

    def __init__(self, message: str, row: int | None = None, column: str | None = None):
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column {column!r}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)
        self.row = row
        self.column = column


class InvalidDataError(PconfError, ValueError):
    """Data content is unusable (single-class input, score out of range, ...)."""


class ContractError(PconfError, ValueError):
    """An operation was called outside its precondition (shape mismatch,
    empty input, unclipped confidence, ...)."""


class DivergedOptimizationError(PconfError, ArithmeticError):
    """The optimizer hit a non-finite loss or gradient.

    ``step`` is the 1-based epoch at which divergence was detected.
    """

    def __init__(self, message: str, step: int | None = None):
        if step is not None:
            message = f"{message} (epoch {step})"
        super().__init__(message)
        self.step = step


class TuningError(PconfError):
    """Every hyperparameter candidate failed to train."""


class PlotError(PconfError):
    """The requested plot is unsupported (non-2D data, non-linear model)."""
