"""Exact expected losses and optimal predictors.

For a linear predictor nu and payment c the expected loss is

    l(c, nu) = nu^T Sigma_xhat(c) nu - 2 nu^T Sigma_x theta* + theta*^T Sigma_x theta* + lambda c
               + sigma_eta^2

with Sigma_xhat(c) = Sigma_x + Sigma_n(c). The optimal predictor at c minimizes it over
the ball ||nu|| <= S.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ..core.config import get_settings
from ..core.errors import SingularCovarianceError
from ..core.linalg import TRS_TOL, min_quadratic_on_ball_batch
from ..core.logging_config import get_logger
from ..environment.profiles import check_cost, noise_stack
from ..models import Instance

logger = get_logger()

EIGEN_FLOOR = 1e-12


def observed_covariance(instance: Instance, c: float) -> NDArray[np.float64]:
    """Sigma_xhat(c) = Sigma_x + Sigma_n(c)."""
    noise = instance.profile.matrix_at(check_cost(c))
    return instance.sigma_x + 0.5 * (noise + noise.T)


def expected_loss(instance: Instance, c: float, nu: ArrayLike) -> float:
    """Exact expected loss l(c, nu), output noise included."""
    vec = np.asarray(nu, dtype=np.float64).reshape(-1)
    if vec.shape[0] != instance.d:
        raise ValueError(f"Predictor of length {vec.shape[0]} does not match d={instance.d}")
    cov = observed_covariance(instance, c)
    cross = instance.sigma_x @ instance.theta
    return float(
        vec @ cov @ vec
        - 2.0 * vec @ cross
        + instance.theta @ cross
        + instance.lam * c
        + instance.output_noise_var
    )


def expected_loss_batch(
    instance: Instance, costs: ArrayLike, nus: ArrayLike, covs: NDArray[np.float64] | None = None
) -> NDArray[np.float64]:
    """Row-wise l(c_i, nu_i) for stacked costs and predictors."""
    c = np.asarray(costs, dtype=np.float64).reshape(-1)
    vecs = np.asarray(nus, dtype=np.float64).reshape(c.shape[0], instance.d)
    if covs is None:
        covs = instance.sigma_x + noise_stack(instance.profile, c)
    cross = instance.sigma_x @ instance.theta
    quad = np.einsum("mi,mij,mj->m", vecs, covs, vecs)
    return np.asarray(
        quad
        - 2.0 * vecs @ cross
        + instance.theta @ cross
        + instance.lam * c
        + instance.output_noise_var,
        dtype=np.float64,
    )


@dataclass(frozen=True)
class OptimalPredictors:
    """Optimal predictors for a batch of costs."""

    costs: NDArray[np.float64]
    predictors: NDArray[np.float64]
    interior: NDArray[np.bool_]
    losses: NDArray[np.float64]


def optimal_predictors(
    instance: Instance, costs: Sequence[float] | NDArray[np.float64], tol: float = TRS_TOL
) -> OptimalPredictors:
    """Batched :func:`optimal_predictor` with the matching optimal losses.

    Raises:
        SingularCovarianceError: If some Sigma_xhat(c) is not positive definite.
        ProfileError: If a cost lies outside [0, 1].
    """
    c = np.asarray(costs, dtype=np.float64).reshape(-1)
    covs = instance.sigma_x + noise_stack(instance.profile, c)
    eigenvalues, eigenvectors = np.linalg.eigh(covs)
    top = eigenvalues[:, -1]
    low = eigenvalues[:, 0]
    psd_tol = get_settings().psd_tol
    bad = (top <= 0.0) | (low < -psd_tol) | (low <= EIGEN_FLOOR * np.maximum(top, 0.0))
    if np.any(bad):
        first = int(np.flatnonzero(bad)[0])
        raise SingularCovarianceError(
            f"Sigma_xhat({c[first]:.6g}) is singular (eigenvalues {low[first]:.3g}..{top[first]:.3g})"
        )
    floored = np.maximum(eigenvalues, EIGEN_FLOOR * top[:, None])
    cross = instance.sigma_x @ instance.theta
    coef = np.einsum("mji,j->mi", eigenvectors, cross) / floored
    free = np.einsum("mij,mj->mi", eigenvectors, coef)
    interior = np.linalg.norm(free, axis=1) <= instance.S
    nus = free.copy()
    if not np.all(interior):
        outside = ~interior
        logger.debug(f"Projecting {int(outside.sum())} optimal predictors onto the S-ball")
        nus[outside] = min_quadratic_on_ball_batch(covs[outside], cross, instance.S, tol=tol)

    base = float(instance.theta @ cross) + instance.lam * c + instance.output_noise_var
    closed = base - np.einsum("mi,mi->m", coef * floored, coef)
    projected = expected_loss_batch(instance, c, nus, covs=covs)
    losses = np.where(interior, closed, projected)
    return OptimalPredictors(costs=c, predictors=nus, interior=interior, losses=losses)


def optimal_predictor(instance: Instance, c: float) -> NDArray[np.float64]:
    """nu*(c): Sigma_xhat(c)^{-1} Sigma_x theta* when inside the S-ball, else the ball-constrained minimizer.

    Raises:
        SingularCovarianceError: If Sigma_xhat(c) is singular beyond tolerance.
    """
    return optimal_predictors(instance, [c]).predictors[0]


def optimal_loss_at(instance: Instance, c: float) -> float:
    """l*(c) = min over the S-ball of l(c, nu).

    Interior optima use theta*^T Sigma_x theta* - h^T Sigma_xhat(c)^{-1} h + lambda c with
    h = Sigma_x theta*; projected optima evaluate the loss at the projected predictor.
    """
    return float(optimal_predictors(instance, [c]).losses[0])


def max_loss_bound(instance: Instance) -> float:
    """6 S^2 (R^2 d + S^2) + lambda + sigma_eta^2, a bound on l(c, nu) over feasible pairs."""
    S2 = instance.S**2
    return 6.0 * S2 * (instance.subgaussian**2 * instance.d + S2) + instance.lam + instance.output_noise_var


def uniform_ball(rng: np.random.Generator, count: int, d: int, S: float) -> NDArray[np.float64]:
    """``count`` points drawn uniformly from the radius-S ball in R^d."""
    direction = rng.standard_normal((count, d))
    direction /= np.maximum(np.linalg.norm(direction, axis=1, keepdims=True), 1e-300)
    radius = S * rng.random(count) ** (1.0 / d)
    return np.asarray(direction * radius[:, None], dtype=np.float64)


def check_max_loss_bound(instance: Instance, samples: int = 1000, seed: int = 0) -> bool:
    """Whether l(c, nu) stays below :func:`max_loss_bound` at random feasible (c, nu)."""
    if samples < 1:
        raise ValueError(f"samples must be positive, got {samples}")
    rng = np.random.default_rng(seed)
    costs = rng.random(samples)
    nus = uniform_ball(rng, samples, instance.d, instance.S)
    losses = expected_loss_batch(instance, costs, nus)
    bound = max_loss_bound(instance)
    worst = float(losses.max())
    if worst > bound:
        logger.warning(f"Loss {worst:.6g} exceeds the bound {bound:.6g} on {instance.name}")
    return worst <= bound
