"""Quadratic loss estimates nu^T A nu - 2 b^T nu + const."""

from __future__ import annotations

from typing import NamedTuple

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ..core.linalg import SymMatrix


class LossQuadratic(NamedTuple):
    """Loss estimate as a quadratic in the predictor."""

    A: SymMatrix
    b: NDArray[np.float64]
    const: float

    def value(self, nu: ArrayLike) -> float:
        vec = np.asarray(nu, dtype=np.float64).reshape(-1)
        return float(vec @ self.A.entries @ vec - 2.0 * self.b @ vec + self.const)
