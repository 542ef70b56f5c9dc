"""Per-round Gaussian sampling of (x, n, x_hat, y)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from ..core.config import get_settings
from ..core.errors import ProfileError
from ..core.linalg import psd_factor
from ..models import Instance
from .profiles import check_cost


def episode_rng(seed: int, index: int = 0) -> np.random.Generator:
    """Counter-based stream for episode ``index`` of base seed ``seed``."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, index])))


@dataclass(frozen=True)
class RoundSample:
    """One round's true features, feature noise, observed features and label."""

    x: NDArray[np.float64]
    n: NDArray[np.float64]
    x_hat: NDArray[np.float64]
    y: float


@dataclass(frozen=True)
class RoundBatch:
    """Stacked samples, one row per round."""

    x: NDArray[np.float64]
    n: NDArray[np.float64]
    x_hat: NDArray[np.float64]
    y: NDArray[np.float64]

    def __len__(self) -> int:
        return int(self.y.shape[0])

    def row(self, i: int) -> RoundSample:
        return RoundSample(x=self.x[i], n=self.n[i], x_hat=self.x_hat[i], y=float(self.y[i]))


class RoundSampler:
    """Samples rounds of one instance, caching the noise factor per cost.

    Each round consumes, in order, d standard normals for the features, d for the
    feature noise and one for the output noise.
    """

    def __init__(self, instance: Instance, psd_tol: float | None = None):
        self.instance = instance
        self._psd_tol = get_settings().psd_tol if psd_tol is None else psd_tol
        self._theta = instance.theta
        self._mean = instance.mean
        self._x_factor = psd_factor(instance.x_cov)
        self._out_scale = float(np.sqrt(instance.output_noise_var))
        self._noise_factors: dict[float, NDArray[np.float64]] = {}

    def noise_factor(self, c: float) -> NDArray[np.float64]:
        """L with L L^T = Sigma_n(c).

        Raises:
            ProfileError: If ``c`` is outside [0, 1] or Sigma_n(c) is not PSD.
        """
        c = check_cost(c)
        factor = self._noise_factors.get(c)
        if factor is None:
            cov = self.instance.profile.matrix_at(c)
            cov = 0.5 * (cov + cov.T)
            low = float(np.linalg.eigvalsh(cov)[0])
            if low < -self._psd_tol:
                raise ProfileError(f"Sigma_n({c}) is not PSD (min eigenvalue {low:.3g})")
            factor = psd_factor(cov)
            self._noise_factors[c] = factor
        return factor

    def sample(self, c: float, rng: np.random.Generator) -> RoundSample:
        d = self.instance.d
        z = rng.standard_normal(2 * d + 1)
        x = self._mean + self._x_factor @ z[:d]
        n = self.noise_factor(c) @ z[d : 2 * d]
        y = float(x @ self._theta + self._out_scale * z[2 * d])
        return RoundSample(x=x, n=n, x_hat=x + n, y=y)

    def sample_many(self, costs: NDArray[np.float64], rng: np.random.Generator) -> RoundBatch:
        """Sample one round per entry of ``costs`` in a single draw.

        Rows consume normals in the same per-round layout as :meth:`sample`.
        """
        d = self.instance.d
        costs = np.asarray(costs, dtype=np.float64)
        z = rng.standard_normal((costs.shape[0], 2 * d + 1))
        x = self._mean + z[:, :d] @ self._x_factor.T
        n = np.zeros_like(x)
        for c in np.unique(costs):
            rows = costs == c
            n[rows] = z[rows, d : 2 * d] @ self.noise_factor(float(c)).T
        y = x @ self._theta + self._out_scale * z[:, 2 * d]
        return RoundBatch(x=x, n=n, x_hat=x + n, y=y)


def sample_round(instance: Instance, c: float, rng: np.random.Generator) -> RoundSample:
    """Draw x ~ N(x_mean, C_x), n ~ N(0, Sigma_n(c)) and y = x^T theta* + eta.

    Raises:
        ProfileError: If Sigma_n(c) fails the PSD tolerance or c is outside [0, 1].
    """
    return RoundSampler(instance).sample(c, rng)
