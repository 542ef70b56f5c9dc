"""Multi-seed regret sweeps over horizons."""

from __future__ import annotations

import math
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor

from ..core.config import get_settings
from ..core.errors import RateFitError
from ..core.logging_config import get_logger, run_context
from ..models import (
    EpisodeOutcome,
    Instance,
    LossLandscape,
    PolicyOverrides,
    PolicyVariant,
    SweepResult,
    SweepRow,
)
from ..oracle import loss_landscape
from ..policies import make_policy_config
from .episode import run_episode
from .rates import MIN_POINTS, fit_rate

logger = get_logger()

_Task = tuple[Instance, LossLandscape, PolicyVariant, PolicyOverrides, int, int]


def _run_task(task: _Task) -> EpisodeOutcome:
    instance, landscape, variant, overrides, T, seed = task
    try:
        with run_context(sweep=variant):
            config = make_policy_config(variant, instance, T, overrides)
            log = run_episode(instance, config, T, seed, landscape=landscape)
    except Exception as e:
        return EpisodeOutcome(instance_name=instance.name, horizon=T, seed=seed, error=str(e))
    return EpisodeOutcome(
        instance_name=instance.name,
        horizon=T,
        seed=seed,
        regret=log.summary.regret,
        payment_regret=log.summary.payment_regret,
    )


def _aggregate(episodes: list[EpisodeOutcome]) -> list[SweepRow]:
    groups: dict[tuple[str, int], list[float]] = {}
    for episode in episodes:
        if episode.ok and episode.regret is not None:
            groups.setdefault((episode.instance_name, episode.horizon), []).append(episode.regret)
    rows = []
    for (name, T), values in sorted(groups.items()):
        n = len(values)
        mean = sum(values) / n
        var = sum((v - mean) ** 2 for v in values) / (n - 1) if n > 1 else 0.0
        rows.append(
            SweepRow(instance_name=name, horizon=T, mean=mean, stderr=math.sqrt(var / n), n_seeds=n)
        )
    return rows


def sweep(
    instances: Sequence[Instance],
    variant: PolicyVariant,
    horizons: Sequence[int],
    seeds: Sequence[int],
    *,
    overrides: PolicyOverrides | None = None,
    workers: int | None = None,
    oracle_grid: int | None = None,
    fit: bool = False,
) -> SweepResult:
    """Run every (instance, T, seed) episode and aggregate final regret per horizon.

    Episodes run in a process pool when ``workers`` > 1. Failed episodes are recorded on
    the result, not raised. Results are ordered by (instance, T, seed) whatever the
    scheduling order.

    Raises:
        ValueError: If instances, horizons or seeds are empty.
        RateFitError: If ``fit`` is set with fewer than three horizons.
    """
    if not instances:
        raise ValueError("sweep needs at least one instance")
    if not horizons:
        raise ValueError("sweep needs at least one horizon")
    if not seeds:
        raise ValueError("sweep needs at least one seed")
    if fit and len(set(horizons)) < MIN_POINTS:
        raise RateFitError(f"rate fit requires ≥ {MIN_POINTS} horizons")

    settings = get_settings()
    workers = workers or settings.workers
    grid = oracle_grid or settings.oracle_grid
    overrides = overrides or PolicyOverrides()
    landscapes = {id(inst): loss_landscape(inst, grid) for inst in instances}
    tasks: list[_Task] = [
        (inst, landscapes[id(inst)], variant, overrides, T, seed)
        for inst in instances
        for T in sorted(horizons)
        for seed in seeds
    ]
    with run_context(sweep=variant):
        logger.info(f"Sweep: {len(tasks)} {variant} episodes on {workers} worker(s)")

        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                episodes = list(pool.map(_run_task, tasks))
        else:
            episodes = []
            for i, task in enumerate(tasks, 1):
                episodes.append(_run_task(task))
                logger.debug(f"Sweep progress {i}/{len(tasks)}")

        for episode in episodes:
            if not episode.ok:
                logger.warning(
                    f"Episode {episode.instance_name} T={episode.horizon} seed={episode.seed} failed: {episode.error}"
                )
        order = {inst.name: i for i, inst in enumerate(instances)}
        episodes.sort(key=lambda e: (order.get(e.instance_name, 0), e.horizon, e.seed))

        result = SweepResult(
            variant=variant,
            horizons=sorted(horizons),
            seeds=list(seeds),
            episodes=episodes,
            rows=_aggregate(episodes),
        )
        if fit:
            result.fit = fit_rate(result.curve())
            logger.info(f"Fitted slope {result.fit.slope:.3f} ± {result.fit.stderr:.3f}")
        return result
