"""Exception hierarchy for paid-features."""

from __future__ import annotations

from typing import TYPE_CHECKING, Any

if TYPE_CHECKING:
    from ..models import RunLog


class PaidFeaturesError(Exception):
    """Base class for all library errors."""


class DimensionMismatchError(PaidFeaturesError, ValueError):
    """Operands of a linear-algebra operation have incompatible shapes."""


class NonFiniteInputError(PaidFeaturesError, ValueError):
    """An input contains NaN or infinite entries."""


class SolverConvergenceError(PaidFeaturesError, RuntimeError):
    """The ball-constrained quadratic solver did not converge.

    Attributes:
        best_iterate: The best feasible point found before giving up.
        arm: Grid arm being solved when the failure happened, if any.
    """

    def __init__(self, message: str, best_iterate: Any = None, arm: int | None = None):
        super().__init__(message)
        self.best_iterate = best_iterate
        self.arm = arm


class ProfileError(PaidFeaturesError, ValueError):
    """A covariance profile was queried outside [0, 1] or produced a non-PSD matrix."""


class SingularCovarianceError(PaidFeaturesError, ValueError):
    """The observed-feature autocorrelation is singular beyond tolerance."""


class InstanceMismatchError(PaidFeaturesError, ValueError):
    """A landscape and a run log refer to different instances."""


class RateFitError(PaidFeaturesError, ValueError):
    """Too few usable points for a log-log rate fit."""


class EpisodeError(PaidFeaturesError, RuntimeError):
    """An episode aborted; `partial_log` holds the rounds completed so far."""

    def __init__(self, message: str, partial_log: RunLog):
        super().__init__(message)
        self.partial_log = partial_log
