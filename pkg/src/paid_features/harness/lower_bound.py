"""Lower-bound suites: do late plays settle on the hard instances' optimal costs?"""

from __future__ import annotations

from collections import Counter
from collections.abc import Sequence

from ..core.config import get_settings
from ..core.logging_config import get_logger, run_context
from ..environment import make_lower_bound_known, make_lower_bound_unknown
from ..models import (
    Instance,
    LowerBoundEntry,
    LowerBoundReport,
    LowerBoundSuite,
    PerturbedFRatioProfile,
    PolicyOverrides,
    RunLog,
)
from ..oracle import loss_landscape
from ..policies import make_policy_config
from .episode import run_episode

logger = get_logger()

_TOL = 1e-12


def modal_late_cost(log: RunLog, fraction: float = 0.25) -> float:
    """Most frequent cost over the final ``fraction`` of rounds, ties to the smallest."""
    if not log.rounds:
        raise ValueError("Empty run log has no modal cost")
    start = len(log.rounds) - max(1, int(len(log.rounds) * fraction))
    counts = Counter(record.cost for record in log.rounds[start:])
    top = max(counts.values())
    return min(cost for cost, count in counts.items() if count == top)


def in_target(cost: float, low: float, high: float) -> bool:
    """Membership in [low, high), or in {low} when the target is a single point."""
    if high <= low:
        return abs(cost - low) <= _TOL
    return low - _TOL <= cost < high - _TOL


def _nearest_grid(target: float, K: int, first: int = 1) -> float:
    k = min(max(round(target * K), first), K)
    return k / K


def _suite(
    suite: LowerBoundSuite, T: int, eps: float, K_env: int, overrides: PolicyOverrides
) -> list[tuple[Instance, float, float]]:
    if suite == "known":
        minus, plus = make_lower_bound_known(eps)
        K = overrides.K or make_policy_config("known", minus, T, overrides).K
        return [
            (minus, _nearest_grid(0.0, K), _nearest_grid(0.0, K)),
            (plus, _nearest_grid(0.5, K), _nearest_grid(0.5, K)),
        ]
    _, perturbed = make_lower_bound_unknown(K_env)
    entries = []
    for inst in perturbed:
        assert isinstance(inst.profile, PerturbedFRatioProfile)
        left, right = inst.profile.interval
        entries.append((inst, left, right))
    return entries


def run_lower_bound(
    suite: LowerBoundSuite,
    T: int,
    seeds: Sequence[int],
    *,
    eps: float = 0.3,
    K_env: int = 4,
    overrides: PolicyOverrides | None = None,
    oracle_grid: int | None = None,
) -> LowerBoundReport:
    """Run the suite's instances with the matching learner and check late modal costs.

    The known suite plays the two-variance step instances with the known-covariance
    learner; targets are the grid points nearest 0 and 1/2. The unknown suite plays each
    perturbed ratio instance with the optimistic learner; targets are the perturbed
    intervals [c_k, c_{k+1}).

    Raises:
        ValueError: For an out-of-range ``eps`` or ``K_env``, or an empty seed list.
    """
    if not seeds:
        raise ValueError("lower-bound suite needs at least one seed")
    overrides = overrides or PolicyOverrides()
    grid = oracle_grid or get_settings().oracle_grid
    report = LowerBoundReport(suite=suite, horizon=T)
    with run_context(suite=suite):
        for inst, low, high in _suite(suite, T, eps, K_env, overrides):
            landscape = loss_landscape(inst, grid)
            config = make_policy_config(suite, inst, T, overrides)
            regrets: list[float] = []
            modal: list[float] = []
            for seed in seeds:
                log = run_episode(inst, config, T, seed, landscape=landscape)
                regrets.append(log.summary.regret)
                modal.append(modal_late_cost(log))
            matches = sum(in_target(c, low, high) for c in modal)
            logger.info(f"{inst.name}: {matches}/{len(seeds)} seeds settle in the target")
            report.entries.append(
                LowerBoundEntry(
                    instance_name=inst.name,
                    target_low=low,
                    target_high=high,
                    mean_regret=sum(regrets) / len(regrets),
                    modal_costs=modal,
                    matches=matches,
                    seeds=len(seeds),
                )
            )
    return report
