"""Log-log regret-rate fitting."""

from __future__ import annotations

import math
from collections.abc import Sequence

from scipy import stats

from ..core.errors import RateFitError
from ..core.logging_config import get_logger
from ..models import RateFit

logger = get_logger()

MIN_POINTS = 3


def fit_rate(points: Sequence[tuple[float, float]]) -> RateFit:
    """Least-squares slope of ln(regret) against ln(T).

    Points with nonpositive or non-finite coordinates are dropped with a warning.

    Raises:
        RateFitError: If fewer than three usable points remain.
    """
    usable = [
        (T, r) for T, r in points if T > 0 and r > 0 and math.isfinite(T) and math.isfinite(r)
    ]
    excluded = len(points) - len(usable)
    if excluded:
        logger.warning(f"Rate fit excluded {excluded} nonpositive or non-finite points")
    if len(usable) < MIN_POINTS:
        raise RateFitError(f"rate fit requires ≥ {MIN_POINTS} usable points, got {len(usable)}")

    log_T = [math.log(T) for T, _ in usable]
    log_r = [math.log(r) for _, r in usable]
    if max(log_T) - min(log_T) < 2 * math.log(10):
        logger.debug("Rate fit horizons span less than two decades")
    result = stats.linregress(log_T, log_r)
    stderr = float(result.stderr)
    if not math.isfinite(stderr):
        stderr = 0.0
    return RateFit(
        slope=float(result.slope),
        stderr=stderr,
        intercept=float(result.intercept),
        points=len(usable),
        excluded=excluded,
    )
