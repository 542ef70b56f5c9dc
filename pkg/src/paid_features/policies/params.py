"""Horizon-dependent parameter schedules."""

from __future__ import annotations

import math

from ..models import Instance, PolicyConfig, PolicyOverrides, PolicyVariant

DELTA_CAP = 0.999


def _ceil(value: float) -> int:
    # absorb float noise such as 0.1 * 30 = 3.0000000000000004
    return math.ceil(value - 1e-9 * max(1.0, abs(value)))


def alg1_params(T: int, lam: float) -> tuple[float, int]:
    """Known-covariance schedule: delta = 1/T and K = ceil(lambda T)."""
    if T < 1 or lam <= 0:
        raise ValueError(f"Need T >= 1 and lambda > 0, got T={T}, lambda={lam}")
    return min(1.0 / T, DELTA_CAP), max(1, _ceil(lam * T))


def alg2_params(T: int, lam: float, S: float, R: float, d: int) -> tuple[float, int]:
    """Unknown-covariance schedule.

    K = ceil(T^{1/3} lambda^{2/3} / (S^2 (R^2 d + S^2))^{2/3}) and delta = 1/(K T).
    """
    if T < 1 or lam <= 0 or S <= 0 or R < 0 or d < 1:
        raise ValueError("Need T >= 1, lambda > 0, S > 0, R >= 0 and d >= 1")
    scale = (S**2 * (R**2 * d + S**2)) ** (2.0 / 3.0)
    K = max(1, _ceil(T ** (1.0 / 3.0) * lam ** (2.0 / 3.0) / scale))
    return min(1.0 / (K * T), DELTA_CAP), K


def make_policy_config(
    variant: PolicyVariant,
    instance: Instance,
    T: int,
    overrides: PolicyOverrides | None = None,
    record_diagnostics: bool = False,
) -> PolicyConfig:
    """Build the policy configuration for ``instance`` at horizon ``T``.

    Schedule values are used unless ``overrides`` supplies K or delta.
    """
    overrides = overrides or PolicyOverrides()
    if variant == "known":
        delta, K = alg1_params(T, instance.lam)
    else:
        delta, K = alg2_params(T, instance.lam, instance.S, instance.subgaussian, instance.d)
    return PolicyConfig(
        variant=variant,
        T=T,
        K=overrides.K if overrides.K is not None else K,
        delta=overrides.delta if overrides.delta is not None else delta,
        lambda_=instance.lam,
        S=instance.S,
        R=instance.subgaussian,
        d=instance.d,
        K_overridden=overrides.K is not None,
        delta_overridden=overrides.delta is not None,
        regularized=overrides.regularized,
        regularization_scale=overrides.regularization_scale,
        bonus_scale=overrides.bonus_scale,
        include_zero_arm=overrides.include_zero_arm,
        record_diagnostics=record_diagnostics,
    )
