from typing import List, Optional, Sequence


class CoDesignError(Exception):
    """Base class for all errors raised by tankcodesign."""


class InvalidInstanceError(CoDesignError, ValueError):
    """
    A model instance violates one or more modelling assumptions.

    Attributes:
        failures: Names of the violated constraints.
    """

    def __init__(self, message: str, failures: Sequence[str] = ()) -> None:
        super().__init__(message)
        self.failures: List[str] = list(failures)


class DimensionMismatchError(CoDesignError, ValueError):
    """Arrays or models do not share the expected shape."""


class InsufficientDataError(CoDesignError, ValueError):
    """A time series does not carry enough samples for estimation."""


class ReducibleChainError(CoDesignError, ValueError):
    """The Markov chain is reducible, so its stationary distribution is not unique."""


class StationarySolveError(CoDesignError, ArithmeticError):
    """
    The balance equations could not be solved to tolerance.

    Attributes:
        residual: Infinity-norm residual of the returned solution, if any.
    """

    def __init__(self, message: str, residual: Optional[float] = None) -> None:
        super().__init__(message)
        self.residual = residual


class DegenerateTruncationError(CoDesignError, ArithmeticError):
    """The truncation threshold lies too far below the price distribution support."""


class OptimizationError(CoDesignError, RuntimeError):
    """
    An optimization failed for every restart or every candidate.

    Attributes:
        causes: One message per failed restart or candidate.
    """

    def __init__(self, message: str, causes: Sequence[str] = ()) -> None:
        super().__init__(message if not causes else f"{message}: " + "; ".join(causes))
        self.causes: List[str] = list(causes)


__all__ = [
    "CoDesignError",
    "DegenerateTruncationError",
    "DimensionMismatchError",
    "InsufficientDataError",
    "InvalidInstanceError",
    "OptimizationError",
    "ReducibleChainError",
    "StationarySolveError",
]
