"""Checkpoint schedules and shared helpers for the Monte-Carlo experiments."""

from __future__ import annotations

import numpy as np
from numpy.typing import NDArray

FIRST_CHECKPOINT = 16
DECAY_REFERENCE = 128


def geometric_checkpoints(t_max: int, start: int = FIRST_CHECKPOINT) -> list[int]:
    """Powers of two from ``start`` up to ``t_max``, with ``t_max`` appended when missing."""
    if t_max < 1:
        raise ValueError(f"t_max must be positive, got {t_max}")
    points = []
    t = start
    while t <= t_max:
        points.append(t)
        t *= 2
    if not points or points[-1] != t_max:
        points.append(t_max)
    return points


def decay_fraction(per_checkpoint: NDArray[np.float64], checkpoints: list[int]) -> float | None:
    """Share of trials whose value at the last checkpoint is below the one at t = 128.

    ``per_checkpoint`` has shape (trials, checkpoints). None when t = 128 is not an
    earlier checkpoint.
    """
    if DECAY_REFERENCE not in checkpoints or checkpoints[-1] <= DECAY_REFERENCE:
        return None
    ref = checkpoints.index(DECAY_REFERENCE)
    return float(np.mean(per_checkpoint[:, -1] < per_checkpoint[:, ref]))


def safe_ratio(num: NDArray[np.float64], den: float) -> NDArray[np.float64]:
    if den <= 0:
        return np.zeros_like(num)
    return num / den
