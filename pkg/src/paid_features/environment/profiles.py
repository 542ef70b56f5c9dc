"""Profile evaluation and grid validation."""

from __future__ import annotations

import math
from collections.abc import Sequence

import numpy as np
from numpy.typing import NDArray

from ..core.config import get_settings
from ..core.errors import ProfileError
from ..core.linalg import SymMatrix
from ..core.logging_config import get_logger
from ..models import CovarianceProfile, ProfileValidationReport, ProfileViolation

logger = get_logger()

VALIDATION_GRID = 512
_PAIR_CHUNK = 4096


def check_cost(c: float) -> float:
    c = float(c)
    if not math.isfinite(c) or c < 0.0 or c > 1.0:
        raise ProfileError(f"Cost must lie in [0, 1], got {c}")
    return c


def sigma_n(profile: CovarianceProfile, c: float) -> SymMatrix:
    """Noise covariance Sigma_n(c) of ``profile``.

    Raises:
        ProfileError: If ``c`` lies outside [0, 1].
    """
    return SymMatrix(profile.matrix_at(check_cost(c)))


def noise_stack(profile: CovarianceProfile, costs: Sequence[float] | NDArray[np.float64]) -> NDArray[np.float64]:
    """Stack Sigma_n(c) for every cost into an array of shape (m, d, d)."""
    mats = np.stack([profile.matrix_at(check_cost(c)) for c in costs])
    return 0.5 * (mats + np.swapaxes(mats, 1, 2))


def validate_profile(
    profile: CovarianceProfile, grid_size: int = VALIDATION_GRID, tol: float | None = None
) -> ProfileValidationReport:
    """Check PSD and Loewner monotonicity of ``profile`` on an evenly spaced grid.

    Every pair c1 < c2 of grid costs is tested for Sigma_n(c2) <= Sigma_n(c1).

    Args:
        profile: Profile to check.
        grid_size: Number of grid costs in [0, 1], at least 2.
        tol: Eigenvalue tolerance; defaults to the configured ``psd_tol``.

    Returns:
        Report listing every violating cost or pair.
    """
    if grid_size < 2:
        raise ValueError(f"grid_size must be at least 2, got {grid_size}")
    if tol is None:
        tol = get_settings().psd_tol
    costs = np.linspace(0.0, 1.0, grid_size)
    mats = noise_stack(profile, costs)
    violations: list[ProfileViolation] = []

    own = np.linalg.eigvalsh(mats)[:, 0]
    for i in np.flatnonzero(own < -tol):
        violations.append(
            ProfileViolation(c_low=float(costs[i]), min_eigenvalue=float(own[i]), check="psd")
        )

    lo_idx, hi_idx = np.triu_indices(grid_size, k=1)
    for start in range(0, lo_idx.size, _PAIR_CHUNK):
        lo = lo_idx[start : start + _PAIR_CHUNK]
        hi = hi_idx[start : start + _PAIR_CHUNK]
        gaps = np.linalg.eigvalsh(mats[lo] - mats[hi])[:, 0]
        for j in np.flatnonzero(gaps < -tol):
            violations.append(
                ProfileViolation(
                    c_low=float(costs[lo[j]]),
                    c_high=float(costs[hi[j]]),
                    min_eigenvalue=float(gaps[j]),
                    check="monotone",
                )
            )

    if violations:
        logger.debug(f"Profile {profile.kind} has {len(violations)} violations on {grid_size} costs")
    return ProfileValidationReport(grid_size=grid_size, tolerance=tol, violations=violations)
