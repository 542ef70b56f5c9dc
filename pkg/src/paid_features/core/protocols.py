"""Core protocol definitions for pluggable policies."""

from __future__ import annotations

from typing import TYPE_CHECKING, Protocol, runtime_checkable

if TYPE_CHECKING:
    from ..environment.sampling import RoundSample
    from ..models import PolicyConfig
    from ..policies.base import PolicyDecision

__all__ = ["Policy"]


@runtime_checkable
class Policy(Protocol):
    """Protocol for online paid-feature learners.

    A policy owns its estimator state for a single episode. The harness calls
    ``decide`` at the start of round t, draws a sample at the chosen cost and hands it
    back through ``observe``.
    """

    config: PolicyConfig

    def decide(self, t: int) -> PolicyDecision:
        """Choose the cost and predictor for round ``t`` (1-indexed).

        Raises:
            SolverConvergenceError: If a ball-constrained solve fails.
        """
        ...

    def observe(self, decision: PolicyDecision, sample: RoundSample) -> None:
        """Fold the round's observation into the estimator state."""
        ...
