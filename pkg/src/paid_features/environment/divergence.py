"""Gaussian divergences used by the lower-bound constructions."""

import math


def kl_gaussian(v1: float, v2: float) -> float:
    """KL(N(0, v1) || N(0, v2)) = (v1/v2 - ln(v1/v2) - 1) / 2.

    Raises:
        ValueError: If either variance is not positive.
    """
    if not (v1 > 0.0 and v2 > 0.0):
        raise ValueError(f"Variances must be positive, got {v1} and {v2}")
    ratio = v1 / v2
    return 0.5 * (ratio - math.log(ratio) - 1.0)
