"""Named instance checks: contract, profile regularity and oracle properties."""

from __future__ import annotations

import numpy as np

from ..core.errors import SingularCovarianceError
from ..environment import kl_gaussian, validate_profile
from ..models import (
    CheckResult,
    Instance,
    PerturbedFRatioProfile,
    contract_checks,
    f_ratio,
)
from .landscape import lipschitz_excess, loss_landscape
from .losses import check_max_loss_bound, max_loss_bound

LIPSCHITZ_TOL = 1e-9
KL_GRID = 10_000


def _kl(v1: float, v2: float) -> float:
    # both variances vanish at c = 1
    return 0.0 if v1 == v2 else kl_gaussian(v1, v2)


def perturbation_checks(profile: PerturbedFRatioProfile, landscape_min: float, slack: float) -> list[CheckResult]:
    """Divergence and optimum-depth checks of a perturbed ratio profile against its baseline."""
    costs = np.linspace(0.0, 1.0, KL_GRID + 1)
    left, right = profile.interval
    inside = (costs >= left) & (costs < right)
    kl = np.array([_kl(f_ratio(c), profile.variance_at(c)) for c in costs])
    cap = 1.0 / profile.K**2
    depth = 0.5 - 1.0 / (16.0 * profile.K) + slack
    return [
        CheckResult(
            name="kl_interval_bound",
            passed=bool(np.all(kl[inside] <= cap + 1e-12)),
            detail=f"max KL on [{left:.4g}, {right:.4g}) = {kl[inside].max(initial=0.0):.3g}, cap 1/K^2 = {cap:.3g}",
        ),
        CheckResult(
            name="kl_zero_outside",
            passed=bool(np.all(kl[~inside] == 0.0)),
            detail=f"max KL outside = {kl[~inside].max(initial=0.0):.3g}",
        ),
        CheckResult(
            name="perturbed_optimum_depth",
            passed=landscape_min <= depth,
            detail=f"grid min {landscape_min:.6g} <= {depth:.6g}",
        ),
    ]


def instance_checks(instance: Instance, grid_size: int = 512, seed: int = 0) -> list[CheckResult]:
    """Every check the validate command reports, in a fixed order."""
    results = [
        CheckResult(name=name, passed=ok, detail=detail)
        for name, ok, detail in contract_checks(instance)
    ]
    report = validate_profile(instance.profile, grid_size)
    results.append(
        CheckResult(
            name="profile_monotone_psd",
            passed=report.ok,
            detail=f"{len(report.violations)} violations on {grid_size} costs",
        )
    )
    if not all(r.passed for r in results if r.name == "observed_covariance_positive"):
        return results

    try:
        landscape = loss_landscape(instance, grid_size - 1)
    except SingularCovarianceError as e:
        results.append(CheckResult(name="one_sided_lipschitz", passed=False, detail=str(e)))
        return results
    excess = lipschitz_excess(landscape, instance.lam)
    results.append(
        CheckResult(
            name="one_sided_lipschitz",
            passed=excess <= LIPSCHITZ_TOL,
            detail=f"max excess {excess:.3g}",
        )
    )
    results.append(
        CheckResult(
            name="max_loss_bound",
            passed=check_max_loss_bound(instance, 1000, seed),
            detail=f"bound {max_loss_bound(instance):.6g}",
        )
    )
    profile = instance.profile
    if isinstance(profile, PerturbedFRatioProfile):
        fine = loss_landscape(instance, KL_GRID)
        results.extend(perturbation_checks(profile, fine.optimal_loss, fine.slack))
    return results
