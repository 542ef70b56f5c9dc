"""Monte-Carlo check of the matrix-martingale deviation bound.

For i.i.d. X_s ~ N(mu, R^2 I) with ||mu|| = S the bound states that, with probability at
least 1 - delta, ||sum_{s<=t} X_s X_s^T - t (R^2 I + mu mu^T)||_op stays below
sqrt(8 t beta_t^2 ln(3 d t (t + 1) / delta)) for every t.
"""

from __future__ import annotations

import numpy as np

from ..core.config import get_settings
from ..core.logging_config import get_logger
from ..environment.sampling import episode_rng
from ..estimators import ConfidenceParams
from ..models import ViolationReport
from .checkpoints import decay_fraction, geometric_checkpoints, safe_ratio

logger = get_logger()

_BLOCK_ELEMENTS = 2_000_000


def matrix_bound(t: int, d: int, R: float, delta: float, S: float = 0.0) -> float:
    return ConfidenceParams(d=d, R=R, S=S, delta=delta).deviation(t)


def mc_matrix_concentration(
    d: int,
    R: float,
    t_max: int,
    delta: float,
    trials: int,
    seed: int = 0,
    S: float = 0.0,
) -> ViolationReport:
    """Frequency of trials whose centered outer-product sum breaks the bound at a checkpoint.

    Args:
        d: Dimension.
        R: Per-coordinate standard deviation.
        t_max: Last checkpoint.
        delta: Confidence level; also the nominal violation frequency.
        trials: Number of independent trials.
        seed: Base seed.
        S: Norm of the mean vector, placed along the first axis.

    Returns:
        Report with a violation recorded when the norm strictly exceeds the bound.

    Raises:
        ValueError: If ``trials`` is below ``PAID_MIN_TRIALS``, or d, R or S is out of range.
    """
    min_trials = get_settings().min_trials
    if trials < min_trials:
        raise ValueError(f"trials must be at least {min_trials}, got {trials}")
    if d < 1 or R < 0 or S < 0:
        raise ValueError("Need d >= 1, R >= 0 and S >= 0")
    checkpoints = geometric_checkpoints(t_max)
    conf = ConfidenceParams(d=d, R=R, S=S, delta=delta)
    mean = np.zeros(d)
    mean[0] = S
    second_moment = R**2 * np.eye(d) + np.outer(mean, mean)

    rng = episode_rng(seed)
    acc = np.zeros((trials, d, d))
    norms = np.zeros((trials, len(checkpoints)))
    done = 0
    step = max(1, _BLOCK_ELEMENTS // (trials * d))
    for j, checkpoint in enumerate(checkpoints):
        while done < checkpoint:
            size = min(step, checkpoint - done)
            X = mean + R * rng.standard_normal((trials, size, d))
            acc += np.einsum("nsi,nsj->nij", X, X)
            done += size
        centered = acc - checkpoint * second_moment
        norms[:, j] = np.abs(np.linalg.eigvalsh(centered)).max(axis=1)

    bounds = np.array([conf.deviation(t) for t in checkpoints])
    violated = norms > bounds
    any_frequency = float(violated.any(axis=1).mean())
    logger.info(f"Matrix concentration d={d}: any-t violation frequency {any_frequency:.4f}")
    normalized = norms / np.asarray(checkpoints, dtype=np.float64)
    return ViolationReport(
        kind="matrix",
        trials=trials,
        checkpoints=checkpoints,
        violations_per_checkpoint=violated.sum(axis=0).astype(int).tolist(),
        any_violation_frequency=any_frequency,
        nominal=delta,
        delta=delta,
        width_ratio=[
            float(np.median(safe_ratio(norms[:, j], float(bounds[j])))) for j in range(len(checkpoints))
        ],
        median_deviation=np.median(normalized, axis=0).tolist(),
        decay_fraction=decay_fraction(normalized, checkpoints),
        parameters={"d": d, "R": R, "S": S, "t_max": t_max, "seed": seed},
    )
