"""Unknown-covariance per-arm loss estimator with optimistic indices."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np
from numpy.typing import NDArray

from ..core.linalg import SymMatrix, min_quadratic_on_ball, min_quadratic_on_ball_batch
from ..environment.sampling import RoundSample
from ..models.snapshot import SplitArray, UnknownCovSnapshot
from .confidence import ConfidenceParams
from .quadratic import LossQuadratic

ACC_DTYPE = np.longdouble


@dataclass
class UnknownCovState:
    """Per-arm statistics for arms k/K, k = 1..K (and k = 0 when ``include_zero``).

    Arrays are indexed by the arm number itself; row 0 stays empty unless the zero arm
    is enabled.
    """

    K: int
    d: int
    include_zero: bool = False
    A: NDArray[Any] = field(init=False)
    b: NDArray[Any] = field(init=False)
    q: NDArray[Any] = field(init=False)
    penalty: NDArray[Any] = field(init=False)
    N: NDArray[np.int64] = field(init=False)

    def __post_init__(self) -> None:
        if self.K < 1:
            raise ValueError(f"K must be at least 1, got {self.K}")
        size = self.K + 1
        self.A = np.zeros((size, self.d, self.d), dtype=ACC_DTYPE)
        self.b = np.zeros((size, self.d), dtype=ACC_DTYPE)
        self.q = np.zeros(size, dtype=ACC_DTYPE)
        self.penalty = np.zeros(size, dtype=ACC_DTYPE)
        self.N = np.zeros(size, dtype=np.int64)

    @property
    def first_arm(self) -> int:
        return 0 if self.include_zero else 1

    @property
    def arms(self) -> range:
        return range(self.first_arm, self.K + 1)

    @property
    def t(self) -> int:
        return int(self.N.sum())

    def check_arm(self, k: int) -> None:
        if not self.first_arm <= k <= self.K:
            raise ValueError(f"Arm {k} is outside [{self.first_arm}, {self.K}]")

    def snapshot(self) -> str:
        return UnknownCovSnapshot(
            K=self.K,
            d=self.d,
            include_zero=self.include_zero,
            A=SplitArray.from_array(self.A),
            b=SplitArray.from_array(self.b),
            q=SplitArray.from_array(self.q),
            penalty=SplitArray.from_array(self.penalty),
            N=self.N.tolist(),
        ).model_dump_json()

    @classmethod
    def from_snapshot(cls, payload: str) -> UnknownCovState:
        snap = UnknownCovSnapshot.model_validate_json(payload)
        state = cls(K=snap.K, d=snap.d, include_zero=snap.include_zero)
        state.A = snap.A.to_array()
        state.b = snap.b.to_array()
        state.q = snap.q.to_array()
        state.penalty = snap.penalty.to_array()
        state.N = np.asarray(snap.N, dtype=np.int64)
        return state


def uc_update(state: UnknownCovState, k: int, sample: RoundSample, lam: float) -> UnknownCovState:
    """Fold a round played on arm ``k`` into that arm's statistics only.

    Raises:
        ValueError: If ``k`` is not an arm of ``state``.
    """
    state.check_arm(k)
    x_hat = np.asarray(sample.x_hat, dtype=ACC_DTYPE)
    y = ACC_DTYPE(sample.y)
    state.A[k] += np.outer(x_hat, x_hat)
    state.b[k] += x_hat * y
    state.q[k] += y * y
    state.penalty[k] += ACC_DTYPE(lam) * ACC_DTYPE(k) / ACC_DTYPE(state.K)
    state.N[k] += 1
    return state


def uc_quadratic(state: UnknownCovState, k: int) -> LossQuadratic:
    """Arm ``k``'s loss sum_s ((x_hat_s^T nu - y_s)^2 + lambda k/K) over its own rounds."""
    state.check_arm(k)
    return LossQuadratic(
        SymMatrix(np.asarray(state.A[k], dtype=np.float64)),
        np.asarray(state.b[k], dtype=np.float64),
        float(state.q[k] + state.penalty[k]),
    )


def _arm_best(quadratic: LossQuadratic, S: float) -> NDArray[np.float64]:
    if S == 0:
        return np.zeros(quadratic.b.shape[0])
    return min_quadratic_on_ball(quadratic.A, quadratic.b, S)


def ucb_index(
    state: UnknownCovState,
    k: int,
    conf: ConfidenceParams,
    t: int,
    bonus_scale: float = 1.0,
) -> float:
    """Mean empirical loss of arm ``k`` at its best predictor, minus the optimism bonus.

    The predictor minimizes the arm's loss over the S-ball; the bonus is
    9 S^2 sqrt(8 beta_t^2 ln(3 d t (t + 1) / delta) / N_k).

    Raises:
        ValueError: If arm ``k`` has not been played yet.
    """
    state.check_arm(k)
    visits = int(state.N[k])
    if visits == 0:
        raise ValueError(f"Arm {k} has no observations; play every arm once first")
    quadratic = uc_quadratic(state, k)
    value = quadratic.value(_arm_best(quadratic, conf.S))
    return value / visits - bonus_scale * conf.arm_bonus(t, visits)


def ucb_indices(
    state: UnknownCovState,
    conf: ConfidenceParams,
    t: int,
    bonus_scale: float = 1.0,
    tol: float = 1e-10,
    max_iter: int = 200,
) -> tuple[NDArray[np.float64], NDArray[np.float64], NDArray[np.float64]]:
    """Indices of every arm at once: (indices, means, predictors) in arm order.

    Raises:
        ValueError: If some arm has no observations.
    """
    arms = np.arange(state.first_arm, state.K + 1)
    visits = state.N[arms]
    if np.any(visits == 0):
        raise ValueError(f"Arm {int(arms[visits == 0][0])} has no observations")
    A = np.asarray(state.A[arms], dtype=np.float64)
    b = np.asarray(state.b[arms], dtype=np.float64)
    const = np.asarray(state.q[arms] + state.penalty[arms], dtype=np.float64)
    if conf.S == 0:
        nus = np.zeros_like(b)
    else:
        nus = min_quadratic_on_ball_batch(A, b, conf.S, tol=tol, max_iter=max_iter)
    values = np.einsum("mi,mij,mj->m", nus, A, nus) - 2.0 * np.einsum("mi,mi->m", b, nus) + const
    means = values / visits
    bonus = np.array([conf.arm_bonus(t, int(n)) for n in visits])
    return means - bonus_scale * bonus, means, nus
