"""Confidence constants for the loss estimators."""

from __future__ import annotations

import math
from dataclasses import dataclass


def _check(t: int, d: int, delta: float) -> None:
    if t < 1:
        raise ValueError(f"t must be at least 1, got {t}")
    if d < 1:
        raise ValueError(f"d must be at least 1, got {d}")
    if not 0.0 < delta <= 1.0:
        raise ValueError(f"delta must lie in (0, 1], got {delta}")


def beta(t: int, d: int, R: float, S: float, delta: float) -> float:
    """Subgaussian norm envelope beta_t.

    With L = ln(3 t (t + 1) / delta):
    beta_t = R^2 (d + 2 sqrt(d L) + 2 L) + S^2 (1 + 2 sqrt(L / d)).

    Raises:
        ValueError: If t < 1, d < 1 or delta is outside (0, 1].
    """
    _check(t, d, delta)
    L = math.log(3.0 * t * (t + 1) / delta)
    return R**2 * (d + 2.0 * math.sqrt(d * L) + 2.0 * L) + S**2 * (1.0 + 2.0 * math.sqrt(L / d))


@dataclass(frozen=True)
class ConfidenceParams:
    """Constants (d, R, S, delta) and the widths derived from them."""

    d: int
    R: float
    S: float
    delta: float

    def __post_init__(self) -> None:
        _check(1, self.d, self.delta)
        if self.R < 0 or self.S < 0:
            raise ValueError("R and S must be nonnegative")

    def beta(self, t: int) -> float:
        return beta(t, self.d, self.R, self.S, self.delta)

    def log_term(self, t: int) -> float:
        """ln(3 d t (t + 1) / delta)."""
        _check(t, self.d, self.delta)
        return math.log(3.0 * self.d * t * (t + 1) / self.delta)

    def deviation(self, t: int) -> float:
        """Operator-norm envelope sqrt(8 t beta_t^2 ln(3 d t (t + 1) / delta))."""
        return math.sqrt(8.0 * t * self.beta(t) ** 2 * self.log_term(t))

    def gamma(self, t: int) -> float:
        """Ridge weight making the known-covariance loss estimate strictly convex."""
        return 2.0 * self.deviation(t)

    def kc_width(self, t: int) -> float:
        """Uniform width of the known-covariance estimate around t l(c, nu)."""
        return 9.0 * self.S**2 * self.deviation(t)

    def arm_bonus(self, t: int, visits: int) -> float:
        """Optimism bonus of an arm visited ``visits`` times, queried at round t."""
        if visits < 1:
            raise ValueError(f"visits must be at least 1, got {visits}")
        return 9.0 * self.S**2 * math.sqrt(8.0 * self.beta(t) ** 2 * self.log_term(t) / visits)


def kc_loss_width(t: int, conf: ConfidenceParams) -> float:
    """9 S^2 sqrt(8 t beta_t^2 ln(3 d t (t + 1) / delta))."""
    return conf.kc_width(t)
