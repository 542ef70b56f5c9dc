"""Monte-Carlo check of the uniform loss-estimate widths.

Histories play uniformly random grid costs k/K. At each checkpoint the known-covariance
estimate is compared to t l(c, nu) at random points (c uniform on [0, 1], nu uniform on
the S-ball), and each arm's own estimate to N_k l(k/K, nu). Random points lower-bound the
supremum, so a found violation is real while the absence of one is only evidence.
"""

from __future__ import annotations

import numpy as np
from numpy.typing import NDArray

from ..core.config import get_settings
from ..core.logging_config import get_logger
from ..environment.profiles import noise_stack
from ..environment.sampling import RoundSampler, episode_rng
from ..estimators import ConfidenceParams
from ..models import Instance, ViolationReport
from ..oracle import expected_loss_batch, uniform_ball
from .checkpoints import decay_fraction, geometric_checkpoints, safe_ratio

logger = get_logger()

MIN_POINTS = 10


def _point_values(
    A: NDArray[np.float64],
    b: NDArray[np.float64],
    const: NDArray[np.float64],
    nus: NDArray[np.float64],
) -> NDArray[np.float64]:
    """nu_p^T A_p nu_p - 2 b^T nu_p + const_p per point p."""
    return np.einsum("pi,pij,pj->p", nus, A, nus) - 2.0 * nus @ b + const


def mc_loss_uniform(
    instance: Instance,
    t_max: int,
    delta: float,
    trials: int,
    points: int,
    seed: int = 0,
    K: int = 8,
) -> ViolationReport:
    """Violation frequency of the known-covariance width, plus per-arm width violations.

    The nominal level is 3 delta.

    Raises:
        ValueError: If ``points`` < 10 or ``trials`` is below ``PAID_MIN_TRIALS``.
    """
    if points < MIN_POINTS:
        raise ValueError(f"points must be at least {MIN_POINTS}, got {points}")
    min_trials = get_settings().min_trials
    if trials < min_trials:
        raise ValueError(f"trials must be at least {min_trials}, got {trials}")
    d = instance.d
    lam = instance.lam
    checkpoints = geometric_checkpoints(t_max)
    conf = ConfidenceParams(d=d, R=instance.subgaussian, S=instance.S, delta=delta)
    arm_costs = np.arange(1, K + 1, dtype=np.float64) / K
    arm_noise = noise_stack(instance.profile, arm_costs)
    sampler = RoundSampler(instance)
    rng = episode_rng(seed)

    max_dev = np.zeros((trials, len(checkpoints)))
    kc_violated = np.zeros((trials, len(checkpoints)), dtype=bool)
    arm_violated = np.zeros(trials, dtype=bool)
    kc_widths = np.array([conf.kc_width(t) / t for t in checkpoints])

    for trial in range(trials):
        point_costs = rng.random(points)
        point_nus = uniform_ball(rng, points, d, instance.S)
        point_noise = noise_stack(instance.profile, point_costs)
        truth = expected_loss_batch(instance, point_costs, point_nus)
        arm_truth = np.stack(
            [expected_loss_batch(instance, np.full(points, c), point_nus) for c in arm_costs]
        )

        arms = rng.integers(0, K, size=t_max)
        batch = sampler.sample_many(arm_costs[arms], rng)
        x_hat, y = batch.x_hat, batch.y
        outer = np.einsum("si,sj->sij", x_hat, x_hat)

        A = np.zeros((d, d))
        b = np.zeros(d)
        q = 0.0
        A_arm = np.zeros((K, d, d))
        b_arm = np.zeros((K, d))
        q_arm = np.zeros(K)
        N_arm = np.zeros(K, dtype=np.int64)
        done = 0
        for j, t in enumerate(checkpoints):
            seg = slice(done, t)
            seg_arms = arms[seg]
            A += outer[seg].sum(axis=0) - arm_noise[seg_arms].sum(axis=0)
            b += x_hat[seg].T @ y[seg]
            q += float(y[seg] @ y[seg])
            np.add.at(A_arm, seg_arms, outer[seg])
            np.add.at(b_arm, seg_arms, x_hat[seg] * y[seg, None])
            np.add.at(q_arm, seg_arms, y[seg] ** 2)
            np.add.at(N_arm, seg_arms, 1)
            done = t

            estimate = _point_values(A[None] + t * point_noise, b, q + t * lam * point_costs, point_nus)
            deviation = np.abs(estimate / t - truth)
            max_dev[trial, j] = deviation.max()
            kc_violated[trial, j] = bool(np.any(deviation > kc_widths[j]))

            for k in np.flatnonzero(N_arm):
                n_k = int(N_arm[k])
                values = (
                    np.einsum("pi,ij,pj->p", point_nus, A_arm[k], point_nus)
                    - 2.0 * point_nus @ b_arm[k]
                    + q_arm[k]
                    + n_k * lam * arm_costs[k]
                )
                if np.any(np.abs(values / n_k - arm_truth[k]) > conf.arm_bonus(t, n_k)):
                    arm_violated[trial] = True

    any_frequency = float(kc_violated.any(axis=1).mean())
    logger.info(
        f"Loss concentration on {instance.name}: any-t violation frequency {any_frequency:.4f}"
    )
    return ViolationReport(
        kind="loss",
        trials=trials,
        checkpoints=checkpoints,
        violations_per_checkpoint=kc_violated.sum(axis=0).astype(int).tolist(),
        any_violation_frequency=any_frequency,
        nominal=min(1.0, 3.0 * delta),
        delta=delta,
        width_ratio=[
            float(np.median(safe_ratio(max_dev[:, j], float(kc_widths[j]))))
            for j in range(len(checkpoints))
        ],
        median_deviation=np.median(max_dev, axis=0).tolist(),
        decay_fraction=decay_fraction(max_dev, checkpoints),
        arm_any_violation_frequency=float(arm_violated.mean()),
        parameters={"t_max": t_max, "points": points, "K": K, "seed": seed},
    )
