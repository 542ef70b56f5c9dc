"""Policy decisions."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from ..estimators import ConfidenceParams
from ..models import PolicyConfig


@dataclass(frozen=True)
class PolicyDecision:
    """Cost k/K and predictor chosen for one round.

    ``objectives`` holds the per-arm values the choice minimized (regularized losses for
    the known-covariance policy, optimistic indices for the unknown-covariance one); it
    is None for forced initialization rounds.
    """

    cost: float
    arm: int
    predictor: NDArray[np.float64]
    objectives: NDArray[np.float64] | None = None
    forced: bool = False


def confidence_for(config: PolicyConfig) -> ConfidenceParams:
    return ConfidenceParams(d=config.d, R=config.R, S=config.S, delta=config.delta)
