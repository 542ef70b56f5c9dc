"""Checkpoint models for the estimator states."""

from __future__ import annotations

from typing import Any

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, Field, model_validator

# float64 parts per accumulator entry; three cover a 113-bit quad mantissa
MAX_PARTS = 3


class SplitArray(BaseModel):
    """Extended-precision array stored as a sum of float64 arrays.

    ``parts[0]`` is the float64 rounding of each entry and every later part is the
    rounding of what remains, so summing the parts in extended precision restores the
    original entries exactly.
    """

    shape: list[int]
    parts: list[list[float]] = Field(min_length=1)

    @model_validator(mode="after")
    def check_sizes(self) -> SplitArray:
        size = int(np.prod(self.shape)) if self.shape else 1
        if any(len(part) != size for part in self.parts):
            raise ValueError(f"every part must hold {size} entries")
        return self

    @classmethod
    def from_array(cls, values: Any) -> SplitArray:
        arr = np.asarray(values, dtype=np.longdouble)
        rest = arr.reshape(-1).copy()
        parts = []
        for _ in range(MAX_PARTS):
            head = rest.astype(np.float64)
            parts.append(head.tolist())
            rest = rest - head.astype(np.longdouble)
            if not np.any(rest):
                break
        return cls(shape=list(arr.shape), parts=parts)

    def to_array(self) -> NDArray[Any]:
        total = np.zeros(len(self.parts[0]), dtype=np.longdouble)
        for part in reversed(self.parts):
            total += np.asarray(part, dtype=np.float64).astype(np.longdouble)
        return total.reshape(self.shape)


class KnownCovSnapshot(BaseModel):
    """Accumulators (A, b, q) of the known-covariance estimator after ``t`` rounds."""

    d: int = Field(ge=1)
    t: int = Field(ge=0)
    A: SplitArray
    b: SplitArray
    q: SplitArray

    @model_validator(mode="after")
    def check_shapes(self) -> KnownCovSnapshot:
        if self.A.shape != [self.d, self.d] or self.b.shape != [self.d] or self.q.shape != []:
            raise ValueError(f"accumulator shapes do not match d={self.d}")
        return self


class UnknownCovSnapshot(BaseModel):
    """Per-arm statistics of the unknown-covariance estimator, rows indexed by arm number."""

    K: int = Field(ge=1)
    d: int = Field(ge=1)
    include_zero: bool = False
    A: SplitArray
    b: SplitArray
    q: SplitArray
    penalty: SplitArray
    N: list[int]

    @model_validator(mode="after")
    def check_shapes(self) -> UnknownCovSnapshot:
        rows = self.K + 1
        expected = {
            "A": [rows, self.d, self.d],
            "b": [rows, self.d],
            "q": [rows],
            "penalty": [rows],
        }
        for name, shape in expected.items():
            if getattr(self, name).shape != shape:
                raise ValueError(f"{name} must have shape {shape}")
        if len(self.N) != rows or any(n < 0 for n in self.N):
            raise ValueError(f"N must hold {rows} nonnegative counts")
        return self
