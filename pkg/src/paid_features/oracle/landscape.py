"""Optimal-loss landscapes and payment regret."""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from ..core.errors import InstanceMismatchError
from ..models import Instance, LossLandscape
from .losses import optimal_predictors

DEFAULT_GRID = 10_000


def loss_landscape(instance: Instance, M: int = DEFAULT_GRID) -> LossLandscape:
    """Evaluate l*(c) and nu*(c) on {0, 1/M, ..., 1}.

    The reported global optimum is the grid minimum; by the one-sided Lipschitz property
    the continuous infimum is at most lambda / M below it.
    """
    if M < 2:
        raise ValueError(f"Grid size must be at least 2, got {M}")
    costs = np.arange(M + 1, dtype=np.float64) / M
    optimum = optimal_predictors(instance, costs)
    best = int(np.argmin(optimum.losses))
    return LossLandscape(
        instance_name=instance.name,
        instance_fingerprint=instance.fingerprint(),
        grid_size=M,
        costs=costs.tolist(),
        losses=optimum.losses.tolist(),
        predictors=optimum.predictors.tolist(),
        interior=optimum.interior.tolist(),
        optimal_loss=float(optimum.losses[best]),
        optimal_cost=float(costs[best]),
        slack=instance.lam / M,
    )


def cost_regret(
    instance: Instance, costs: Sequence[float], landscape: LossLandscape
) -> float:
    """Payment-only regret sum_t (l*(c_t) - l*): what even perfect predictors would lose.

    Raises:
        InstanceMismatchError: If ``landscape`` was built for another instance.
    """
    if landscape.instance_fingerprint != instance.fingerprint():
        raise InstanceMismatchError(
            f"Landscape belongs to '{landscape.instance_name}', not '{instance.name}'"
        )
    played = np.asarray(costs, dtype=np.float64)
    if played.size == 0:
        return 0.0
    unique, counts = np.unique(played, return_counts=True)
    per_cost = optimal_predictors(instance, unique).losses
    return float(np.sum(counts * (per_cost - landscape.optimal_loss)))


def lipschitz_excess(landscape: LossLandscape, lam: float) -> float:
    """Largest l*(c2) - l*(c1) - lambda (c2 - c1) over grid pairs c1 <= c2.

    Nonpositive (up to rounding) when l* is lambda-one-sided Lipschitz on the grid.
    """
    benefit = np.asarray(landscape.losses) - lam * np.asarray(landscape.costs)
    prefix_min = np.minimum.accumulate(benefit)
    return float(np.max(benefit - prefix_min))
