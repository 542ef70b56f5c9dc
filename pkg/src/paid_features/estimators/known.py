"""Known-covariance loss estimator.

After t rounds the estimate of t l(c, nu) is

    sum_s (x_hat_s^T nu - y_s)^2 + nu^T (Sigma_n(c) - Sigma_n(c_s)) nu + lambda c

which only needs A = sum_s (x_hat_s x_hat_s^T - Sigma_n(c_s)), b = sum_s x_hat_s y_s and
q = sum_s y_s^2.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np
from numpy.typing import NDArray

from ..core.linalg import SymMatrix
from ..environment.sampling import RoundSample
from ..models import CovarianceProfile
from ..models.snapshot import KnownCovSnapshot, SplitArray
from .confidence import ConfidenceParams
from .quadratic import LossQuadratic

ACC_DTYPE = np.longdouble


@dataclass
class KnownCovState:
    """Sufficient statistics of the known-covariance estimator. Single owner, mutable."""

    d: int
    t: int
    A_acc: NDArray[Any]
    b_acc: NDArray[Any]
    q_acc: Any

    @classmethod
    def empty(cls, d: int) -> KnownCovState:
        return cls(
            d=d,
            t=0,
            A_acc=np.zeros((d, d), dtype=ACC_DTYPE),
            b_acc=np.zeros(d, dtype=ACC_DTYPE),
            q_acc=ACC_DTYPE(0.0),
        )

    @property
    def A(self) -> NDArray[np.float64]:
        return np.asarray(self.A_acc, dtype=np.float64)

    @property
    def b(self) -> NDArray[np.float64]:
        return np.asarray(self.b_acc, dtype=np.float64)

    @property
    def q(self) -> float:
        return float(self.q_acc)

    def snapshot(self) -> str:
        """JSON checkpoint of the accumulators, exact in extended precision."""
        return KnownCovSnapshot(
            d=self.d,
            t=self.t,
            A=SplitArray.from_array(self.A_acc),
            b=SplitArray.from_array(self.b_acc),
            q=SplitArray.from_array(self.q_acc),
        ).model_dump_json()

    @classmethod
    def from_snapshot(cls, payload: str) -> KnownCovState:
        """Restore a state written by :meth:`snapshot`.

        Raises:
            pydantic.ValidationError: If the payload is malformed or its shapes disagree.
        """
        snap = KnownCovSnapshot.model_validate_json(payload)
        return cls(
            d=snap.d,
            t=snap.t,
            A_acc=snap.A.to_array(),
            b_acc=snap.b.to_array(),
            q_acc=ACC_DTYPE(snap.q.to_array()),
        )


def kc_update(
    state: KnownCovState,
    c_s: float,
    sample: RoundSample,
    profile: CovarianceProfile,
    noise_cov: NDArray[np.float64] | None = None,
) -> KnownCovState:
    """Fold one round played at cost ``c_s`` into ``state`` and return it.

    ``noise_cov`` may carry a precomputed Sigma_n(c_s).
    """
    if noise_cov is None:
        noise_cov = profile.matrix_at(c_s)
    x_hat = np.asarray(sample.x_hat, dtype=ACC_DTYPE)
    y = ACC_DTYPE(sample.y)
    update = np.outer(x_hat, x_hat) - np.asarray(noise_cov, dtype=ACC_DTYPE)
    state.A_acc += 0.5 * (update + update.T)
    state.b_acc += x_hat * y
    state.q_acc += y * y
    state.t += 1
    return state


def kc_quadratic(
    state: KnownCovState,
    c: float,
    lam: float,
    profile: CovarianceProfile,
    conf: ConfidenceParams,
    regularized: bool = True,
    gamma_scale: float = 1.0,
    noise_cov: NDArray[np.float64] | None = None,
) -> LossQuadratic:
    """Quadratic form of the (regularized) estimate at cost ``c``.

    A_eff = A_acc + t Sigma_n(c) (+ gamma_t I), b = b_acc and const = q_acc + t lambda c.
    An empty state gives the zero quadratic.
    """
    d = state.d
    t = state.t
    if t == 0:
        return LossQuadratic(SymMatrix.zeros(d), np.zeros(d), 0.0)
    if noise_cov is None:
        noise_cov = profile.matrix_at(c)
    A_eff = state.A + t * np.asarray(noise_cov, dtype=np.float64)
    if regularized:
        A_eff = A_eff + gamma_scale * conf.gamma(t) * np.eye(d)
    return LossQuadratic(SymMatrix(A_eff), state.b, state.q + t * lam * c)


def kc_quadratic_batch(
    state: KnownCovState,
    costs: NDArray[np.float64],
    noise_covs: NDArray[np.float64],
    lam: float,
    conf: ConfidenceParams,
    regularized: bool = True,
    gamma_scale: float = 1.0,
) -> tuple[NDArray[np.float64], NDArray[np.float64], NDArray[np.float64]]:
    """Stacked :func:`kc_quadratic` over a cost grid: (A of shape (m, d, d), b, consts)."""
    t = state.t
    m = costs.shape[0]
    d = state.d
    if t == 0:
        return np.zeros((m, d, d)), np.zeros(d), np.zeros(m)
    A = state.A[None] + t * noise_covs
    if regularized:
        A = A + gamma_scale * conf.gamma(t) * np.eye(d)[None]
    return A, state.b, state.q + t * lam * costs
