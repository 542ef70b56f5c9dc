"""Single-episode interaction loop."""

from __future__ import annotations

import numpy as np
from numpy.typing import NDArray

from ..core.config import get_settings
from ..core.errors import EpisodeError, PaidFeaturesError
from ..core.logging_config import get_logger, run_context
from ..environment.sampling import RoundSampler, episode_rng
from ..models import Instance, LossLandscape, PolicyConfig, RoundRecord, RunLog, RunSummary
from ..oracle import cost_regret, loss_landscape, observed_covariance
from ..policies import PolicyRegistry

logger = get_logger()


class _ExpectedLoss:
    """l(c, nu) with Sigma_xhat(c) cached per played cost."""

    def __init__(self, instance: Instance):
        self._instance = instance
        self._cross = instance.sigma_x @ instance.theta
        self._offset = float(instance.theta @ self._cross) + instance.output_noise_var
        self._covs: dict[float, NDArray[np.float64]] = {}

    def __call__(self, c: float, nu: NDArray[np.float64]) -> float:
        cov = self._covs.get(c)
        if cov is None:
            cov = observed_covariance(self._instance, c)
            self._covs[c] = cov
        return float(nu @ cov @ nu - 2.0 * nu @ self._cross + self._offset + self._instance.lam * c)


def _summarize(
    instance: Instance, landscape: LossLandscape, rounds: list[RoundRecord], error: str | None
) -> RunSummary:
    if not rounds:
        return RunSummary(
            optimal_loss=landscape.optimal_loss,
            slack=landscape.slack,
            completed=error is None,
            error=error,
        )
    n = len(rounds)
    regret = rounds[-1].regret_cum
    payment = cost_regret(instance, [r.cost for r in rounds], landscape)
    return RunSummary(
        rounds=n,
        regret=regret,
        regret_per_round=regret / n,
        payment_regret=payment,
        prediction_regret=regret - payment,
        mean_loss_realized=sum(r.loss_realized for r in rounds) / n,
        mean_loss_expected=sum(r.loss_expected for r in rounds) / n,
        optimal_loss=landscape.optimal_loss,
        slack=landscape.slack,
        completed=error is None,
        error=error,
    )


def run_episode(
    instance: Instance,
    config: PolicyConfig,
    T: int,
    seed: int,
    landscape: LossLandscape | None = None,
    episode_index: int = 0,
) -> RunLog:
    """Play ``T`` rounds of ``config``'s policy on ``instance`` and score them.

    Each round the policy picks (c_t, nu_t), a sample is drawn at c_t, the prediction
    x_hat^T nu_t is scored against y_t and the observation is fed back. Regret is the
    cumulative expected loss above the landscape optimum.

    Args:
        instance: Environment to play.
        config: Policy configuration.
        T: Number of rounds; 0 gives an empty log.
        seed: Base seed of the episode's random stream.
        landscape: Precomputed scoring landscape; built with the configured grid if omitted.
        episode_index: Child stream index under ``seed``.

    Raises:
        EpisodeError: If the policy or sampler fails; ``partial_log`` keeps the finished rounds.
    """
    if T < 0:
        raise ValueError(f"T must be nonnegative, got {T}")
    if landscape is None:
        landscape = loss_landscape(instance, get_settings().oracle_grid)
    fingerprint = instance.fingerprint()
    if landscape.instance_fingerprint != fingerprint:
        raise ValueError(f"Landscape was built for '{landscape.instance_name}'")

    with run_context(instance=instance.name, policy=config.variant, T=T, seed=seed):
        return _play(instance, config, T, seed, landscape, fingerprint, episode_index)


def _play(
    instance: Instance,
    config: PolicyConfig,
    T: int,
    seed: int,
    landscape: LossLandscape,
    fingerprint: str,
    episode_index: int,
) -> RunLog:
    logger.debug(f"Episode start: {config.describe()}")
    policy = PolicyRegistry.create(config, instance)
    sampler = RoundSampler(instance)
    rng = episode_rng(seed, episode_index)
    loss = _ExpectedLoss(instance)
    rounds: list[RoundRecord] = []
    regret = 0.0

    def build_log(error: str | None) -> RunLog:
        return RunLog(
            instance_name=instance.name,
            instance_fingerprint=fingerprint,
            config=config,
            seed=seed,
            horizon=T,
            rounds=rounds,
            summary=_summarize(instance, landscape, rounds, error),
        )

    for t in range(1, T + 1):
        try:
            decision = policy.decide(t)
            sample = sampler.sample(decision.cost, rng)
        except PaidFeaturesError as e:
            logger.debug(f"Episode aborted at round {t}: {e}")
            raise EpisodeError(f"Round {t} failed: {e}", build_log(str(e))) from e

        nu = decision.predictor
        squared_error = float((sample.x_hat @ nu - sample.y) ** 2)
        expected = loss(decision.cost, nu)
        regret += expected - landscape.optimal_loss
        rounds.append(
            RoundRecord(
                t=t,
                k=decision.arm,
                cost=decision.cost,
                nu=nu.tolist(),
                squared_error=squared_error,
                loss_realized=squared_error + instance.lam * decision.cost,
                loss_expected=expected,
                regret_cum=regret,
                objectives=(
                    decision.objectives.tolist()
                    if config.record_diagnostics and decision.objectives is not None
                    else None
                ),
            )
        )
        policy.observe(decision, sample)

    log = build_log(None)
    logger.debug(f"Episode finish: regret={log.summary.regret:.6g}")
    return log
