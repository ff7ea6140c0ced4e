"""Exception types shared across the package."""

from __future__ import annotations


class DistQLAError(Exception):
    """Base class for every error raised by distqla."""


class DegenerateInputError(DistQLAError, ValueError):
    """Input is structurally valid but degenerate (zero matrix, zero vector, ...)."""


class ContractError(DistQLAError, ValueError):
    """A precondition of an operation was violated by the caller."""


class NumericalFailureError(DistQLAError, RuntimeError):
    """An iterative numerical routine did not meet its certificate."""


class TopologyViolationError(DistQLAError):
    """A message was sent in a direction the topology forbids."""


class PhaseFindingError(DistQLAError, RuntimeError):
    """Phase optimisation did not reach the residual threshold.

    Recoverable: callers are expected to fall back to the exact polynomial
    encoding path.
    """

    def __init__(self, message: str, residual: float = float("nan")):
        super().__init__(message)
        self.residual = residual
