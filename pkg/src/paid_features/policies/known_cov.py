"""Greedy grid policy for known noise covariances."""

from __future__ import annotations

import numpy as np
from numpy.typing import NDArray

from ..core.config import get_settings
from ..core.errors import SolverConvergenceError
from ..core.linalg import min_quadratic_on_ball_batch, quadratic_objective
from ..environment.profiles import noise_stack
from ..environment.sampling import RoundSample
from ..estimators import ConfidenceParams, KnownCovState, kc_quadratic_batch, kc_update
from ..models import CovarianceProfile, PolicyConfig
from .base import PolicyDecision, confidence_for


def alg1_step(
    state: KnownCovState,
    conf: ConfidenceParams,
    profile: CovarianceProfile,
    lam: float,
    K: int,
    t: int,
    *,
    noise_covs: NDArray[np.float64] | None = None,
    regularized: bool = True,
    gamma_scale: float = 1.0,
    tol: float = 1e-10,
    max_iter: int = 200,
) -> PolicyDecision:
    """Pick the grid cost whose regularized loss estimate has the smallest minimum.

    For each k = 1..K the estimate at k/K is minimized over the S-ball; the arm with the
    smallest minimum wins, ties going to the smallest k. ``state`` must hold the t - 1
    previous rounds; an empty state makes every arm tie at zero.

    Raises:
        SolverConvergenceError: With ``arm`` set to the failing grid index.
    """
    if state.t != t - 1:
        raise ValueError(f"Round {t} needs a state with {t - 1} observations, got {state.t}")
    costs = np.arange(1, K + 1, dtype=np.float64) / K
    if state.t == 0:
        objectives = np.zeros(K)
        return PolicyDecision(cost=1.0 / K, arm=1, predictor=np.zeros(state.d), objectives=objectives)
    if noise_covs is None:
        noise_covs = noise_stack(profile, costs)
    A, b, consts = kc_quadratic_batch(state, costs, noise_covs, lam, conf, regularized, gamma_scale)
    try:
        nus = min_quadratic_on_ball_batch(A, b, conf.S, tol=tol, max_iter=max_iter)
    except SolverConvergenceError as e:
        arm = None if e.arm is None else e.arm + 1
        raise SolverConvergenceError(str(e), best_iterate=e.best_iterate, arm=arm) from e
    objectives = quadratic_objective(A, b, nus) + consts
    best = int(np.argmin(objectives))
    return PolicyDecision(
        cost=float(costs[best]), arm=best + 1, predictor=nus[best], objectives=objectives
    )


class KnownCovPolicy:
    """Episode-scoped learner that knows the noise profile."""

    def __init__(self, config: PolicyConfig, profile: CovarianceProfile):
        if config.variant != "known":
            raise ValueError(f"KnownCovPolicy needs a 'known' config, got '{config.variant}'")
        settings = get_settings()
        self.config = config
        self.profile = profile
        self.state = KnownCovState.empty(config.d)
        self.conf = confidence_for(config)
        self._costs = np.arange(1, config.K + 1, dtype=np.float64) / config.K
        self._noise_covs = noise_stack(profile, self._costs)
        self._tol = settings.trs_tol
        self._max_iter = settings.trs_max_iter

    def decide(self, t: int) -> PolicyDecision:
        return alg1_step(
            self.state,
            self.conf,
            self.profile,
            self.config.lam,
            self.config.K,
            t,
            noise_covs=self._noise_covs,
            regularized=self.config.regularized,
            gamma_scale=self.config.regularization_scale,
            tol=self._tol,
            max_iter=self._max_iter,
        )

    def observe(self, decision: PolicyDecision, sample: RoundSample) -> None:
        kc_update(
            self.state,
            decision.cost,
            sample,
            self.profile,
            noise_cov=self._noise_covs[decision.arm - 1],
        )
