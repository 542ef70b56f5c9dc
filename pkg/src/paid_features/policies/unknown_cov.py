"""Optimistic grid policy for unknown noise covariances."""

from __future__ import annotations

import numpy as np

from ..core.config import get_settings
from ..core.errors import SolverConvergenceError
from ..environment.sampling import RoundSample
from ..estimators import ConfidenceParams, UnknownCovState, uc_update, ucb_indices
from ..models import PolicyConfig
from .base import PolicyDecision, confidence_for


def alg2_step(
    state: UnknownCovState,
    conf: ConfidenceParams,
    t: int,
    *,
    bonus_scale: float = 1.0,
    tol: float = 1e-10,
    max_iter: int = 200,
) -> PolicyDecision:
    """Round t of the optimistic policy.

    The first rounds play every arm once in increasing order with the zero predictor.
    Afterwards the arm with the smallest optimistic index is played, ties going to the
    smallest arm, with that arm's empirical-best predictor.

    Raises:
        SolverConvergenceError: With ``arm`` set to the failing arm.
    """
    arms = state.arms
    if t <= len(arms):
        arm = arms[t - 1]
        return PolicyDecision(
            cost=arm / state.K, arm=arm, predictor=np.zeros(state.d), forced=True
        )
    try:
        indices, _, nus = ucb_indices(state, conf, t, bonus_scale, tol=tol, max_iter=max_iter)
    except SolverConvergenceError as e:
        arm = None if e.arm is None else e.arm + state.first_arm
        raise SolverConvergenceError(str(e), best_iterate=e.best_iterate, arm=arm) from e
    best = int(np.argmin(indices))
    arm = best + state.first_arm
    return PolicyDecision(cost=arm / state.K, arm=arm, predictor=nus[best], objectives=indices)


class UnknownCovPolicy:
    """Episode-scoped learner that only observes noisy features."""

    def __init__(self, config: PolicyConfig):
        if config.variant != "unknown":
            raise ValueError(f"UnknownCovPolicy needs an 'unknown' config, got '{config.variant}'")
        settings = get_settings()
        self.config = config
        self.state = UnknownCovState(K=config.K, d=config.d, include_zero=config.include_zero_arm)
        self.conf = confidence_for(config)
        self._tol = settings.trs_tol
        self._max_iter = settings.trs_max_iter

    def decide(self, t: int) -> PolicyDecision:
        return alg2_step(
            self.state,
            self.conf,
            t,
            bonus_scale=self.config.bonus_scale,
            tol=self._tol,
            max_iter=self._max_iter,
        )

    def observe(self, decision: PolicyDecision, sample: RoundSample) -> None:
        uc_update(self.state, decision.arm, sample, self.config.lam)
