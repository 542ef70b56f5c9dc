"""Noise covariance profiles c -> Sigma_n(c)."""

from __future__ import annotations

from typing import Annotated, Literal, Union

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .types import Matrix


def f_ratio(c: float) -> float:
    """The decreasing ratio (1 - c) / (1 + c)."""
    return (1.0 - c) / (1.0 + c)


def check_square(matrix: Matrix, name: str = "matrix") -> Matrix:
    """Validate that ``matrix`` is a finite, non-empty square matrix."""
    arr = np.asarray(matrix, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
        raise ValueError(f"{name} must be a non-empty square matrix")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite entries")
    return matrix


def _scaled_base(base: Matrix | None, dim: int) -> NDArray[np.float64]:
    if base is None:
        return np.eye(dim)
    return np.asarray(base, dtype=np.float64)


class ConstantProfile(BaseModel):
    """Noise covariance independent of the payment."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["constant"] = "constant"
    matrix: Matrix

    @field_validator("matrix")
    @classmethod
    def _square(cls, v: Matrix) -> Matrix:
        return check_square(v)

    @property
    def dim(self) -> int:
        return len(self.matrix)

    def matrix_at(self, c: float) -> NDArray[np.float64]:
        return np.asarray(self.matrix, dtype=np.float64)


class StepProfile(BaseModel):
    """``high`` below the threshold cost, ``low`` from the threshold onward."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["step"] = "step"
    high: Matrix
    low: Matrix
    threshold: float = Field(default=0.5, ge=0.0, le=1.0)

    @field_validator("high", "low")
    @classmethod
    def _square(cls, v: Matrix) -> Matrix:
        return check_square(v, "step matrix")

    @model_validator(mode="after")
    def _same_dim(self) -> StepProfile:
        if len(self.high) != len(self.low):
            raise ValueError("step matrices must share a dimension")
        return self

    @property
    def dim(self) -> int:
        return len(self.high)

    def matrix_at(self, c: float) -> NDArray[np.float64]:
        return np.asarray(self.high if c < self.threshold else self.low, dtype=np.float64)


class FRatioProfile(BaseModel):
    """Sigma_n(c) = (1 - c)/(1 + c) * base, base defaulting to the identity."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["f_ratio"] = "f_ratio"
    dim: int = Field(default=1, ge=1)
    base: Matrix | None = None

    @model_validator(mode="after")
    def _base_dim(self) -> FRatioProfile:
        if self.base is not None and len(check_square(self.base, "base")) != self.dim:
            raise ValueError("base must match dim")
        return self

    def matrix_at(self, c: float) -> NDArray[np.float64]:
        return f_ratio(c) * _scaled_base(self.base, self.dim)


class PerturbedFRatioProfile(BaseModel):
    """The ratio profile with a dip hidden on the modified interval [c_k, c_{k+1}).

    With c_j = 1/2 + (j - 1)/(4K), the variance moves linearly from f(c_k) to f(c_{k+1})
    over the first half of the interval, stays at f(c_{k+1}) on the second half and
    equals f(c) everywhere else.
    """

    model_config = ConfigDict(frozen=True)

    kind: Literal["perturbed_f_ratio"] = "perturbed_f_ratio"
    k: int = Field(ge=1)
    K: int = Field(ge=1)
    dim: int = Field(default=1, ge=1)
    base: Matrix | None = None

    @model_validator(mode="after")
    def _index_range(self) -> PerturbedFRatioProfile:
        if self.k > self.K:
            raise ValueError(f"k={self.k} must not exceed K={self.K}")
        if self.base is not None and len(check_square(self.base, "base")) != self.dim:
            raise ValueError("base must match dim")
        return self

    def knot(self, j: int) -> float:
        return 0.5 + (j - 1) / (4.0 * self.K)

    @property
    def interval(self) -> tuple[float, float]:
        return self.knot(self.k), self.knot(self.k + 1)

    def variance_at(self, c: float) -> float:
        left, right = self.interval
        if not left <= c < right:
            return f_ratio(c)
        if c < 0.5 * (left + right):
            slope = 2.0 * (f_ratio(right) - f_ratio(left)) / (right - left)
            return f_ratio(left) + slope * (c - left)
        return f_ratio(right)

    def matrix_at(self, c: float) -> NDArray[np.float64]:
        return self.variance_at(c) * _scaled_base(self.base, self.dim)


class ProfileKnot(BaseModel):
    """One knot of a piecewise-linear profile."""

    model_config = ConfigDict(frozen=True)

    cost: float = Field(ge=0.0, le=1.0)
    matrix: Matrix

    @field_validator("matrix")
    @classmethod
    def _square(cls, v: Matrix) -> Matrix:
        return check_square(v, "knot matrix")


class PiecewiseLinearProfile(BaseModel):
    """Linear interpolation between knots, held constant outside the knot range."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["piecewise_linear"] = "piecewise_linear"
    knots: list[ProfileKnot] = Field(min_length=1)

    @model_validator(mode="after")
    def _ordered(self) -> PiecewiseLinearProfile:
        costs = [knot.cost for knot in self.knots]
        if any(b <= a for a, b in zip(costs, costs[1:])):
            raise ValueError("knot costs must be strictly increasing")
        if len({len(knot.matrix) for knot in self.knots}) != 1:
            raise ValueError("knot matrices must share a dimension")
        return self

    @property
    def dim(self) -> int:
        return len(self.knots[0].matrix)

    def matrix_at(self, c: float) -> NDArray[np.float64]:
        knots = self.knots
        if c <= knots[0].cost:
            return np.asarray(knots[0].matrix, dtype=np.float64)
        for left, right in zip(knots, knots[1:]):
            if c <= right.cost:
                weight = (c - left.cost) / (right.cost - left.cost)
                lo = np.asarray(left.matrix, dtype=np.float64)
                hi = np.asarray(right.matrix, dtype=np.float64)
                return (1.0 - weight) * lo + weight * hi
        return np.asarray(knots[-1].matrix, dtype=np.float64)


CovarianceProfile = Annotated[
    Union[
        ConstantProfile,
        StepProfile,
        FRatioProfile,
        PerturbedFRatioProfile,
        PiecewiseLinearProfile,
    ],
    Field(discriminator="kind"),
]
