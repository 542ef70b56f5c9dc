"""Problem instance model."""

from __future__ import annotations

import hashlib
import math
from typing import Any

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, ValidationInfo, model_validator

from ..core.config import get_settings
from .profile import CovarianceProfile
from .types import Matrix, Vector

CONTRACT_TOL = 1e-12

_PROFILE_ADAPTER: TypeAdapter[CovarianceProfile] = TypeAdapter(CovarianceProfile)


def declared_subgaussian_scale(x_cov_centered: Matrix, noise_at_zero: NDArray[np.float64]) -> float:
    """sqrt(max(lambda_max(C_x), lambda_max(Sigma_n(0)))), the Gaussian subgaussian constant."""
    top_x = float(np.linalg.eigvalsh(np.asarray(x_cov_centered, dtype=np.float64))[-1])
    top_n = float(np.linalg.eigvalsh(0.5 * (noise_at_zero + noise_at_zero.T))[-1])
    return math.sqrt(max(top_x, top_n, 0.0))


class Instance(BaseModel):
    """Full environment: features, target, noise profile and payment weight.

    The feature autocorrelation is Sigma_x = C_x + x_mean x_mean^T. Instances are
    frozen once validated. Pass ``context={"check_contract": False}`` to
    ``model_validate`` to skip the norm and positivity contract (used by validation
    commands that report the failing checks instead of raising).
    """

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    name: str = "instance"
    d: int = Field(ge=1)
    theta_star: Vector
    x_mean: Vector
    x_cov_centered: Matrix
    profile: CovarianceProfile
    lambda_: float = Field(gt=0.0, alias="lambda")
    S: float = Field(gt=0.0)
    R: float | None = Field(default=None, gt=0.0)
    output_noise_var: float = Field(default=0.0, ge=0.0)

    @model_validator(mode="before")
    @classmethod
    def _derive_R(cls, data: Any) -> Any:
        """Fill R from C_x and Sigma_n(0) when the document leaves it out."""
        if not isinstance(data, dict) or data.get("R") is not None:
            return data
        try:
            profile = _PROFILE_ADAPTER.validate_python(data["profile"])
            scale = declared_subgaussian_scale(data["x_cov_centered"], profile.matrix_at(0.0))
        except (KeyError, TypeError, ValueError):
            return data
        return {**data, "R": scale} if scale > 0 else data

    @model_validator(mode="after")
    def _validate(self, info: ValidationInfo) -> Instance:
        d = self.d
        if len(self.theta_star) != d or len(self.x_mean) != d:
            raise ValueError(f"theta_star and x_mean must have length d={d}")
        cov = np.asarray(self.x_cov_centered, dtype=np.float64)
        if cov.shape != (d, d) or not np.all(np.isfinite(cov)):
            raise ValueError(f"x_cov_centered must be a finite {d}x{d} matrix")
        if self.profile.dim != d:
            raise ValueError(f"profile dimension {self.profile.dim} does not match d={d}")
        if float(np.linalg.eigvalsh(0.5 * (cov + cov.T))[0]) < -get_settings().psd_tol:
            raise ValueError("x_cov_centered must be positive semidefinite")
        if self.R is None:
            raise ValueError("R cannot be derived: features and noise are deterministic")

        context = info.context or {}
        if context.get("check_contract", True):
            failures = [name for name, ok, _ in contract_checks(self) if not ok]
            if failures:
                raise ValueError(f"instance violates contract: {', '.join(failures)}")
        return self

    @property
    def lam(self) -> float:
        return self.lambda_

    @property
    def subgaussian(self) -> float:
        assert self.R is not None
        return self.R

    @property
    def theta(self) -> NDArray[np.float64]:
        return np.asarray(self.theta_star, dtype=np.float64)

    @property
    def mean(self) -> NDArray[np.float64]:
        return np.asarray(self.x_mean, dtype=np.float64)

    @property
    def x_cov(self) -> NDArray[np.float64]:
        cov = np.asarray(self.x_cov_centered, dtype=np.float64)
        return 0.5 * (cov + cov.T)

    @property
    def sigma_x(self) -> NDArray[np.float64]:
        """Feature autocorrelation E[x x^T]."""
        mean = self.mean
        return self.x_cov + np.outer(mean, mean)

    def fingerprint(self) -> str:
        """Stable digest of the serialized instance."""
        payload = self.model_dump_json(by_alias=True)
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]


def contract_checks(instance: Instance) -> list[tuple[str, bool, str]]:
    """Evaluate the instance contract as (check name, passed, detail) triples."""
    theta_norm = float(np.linalg.norm(instance.theta))
    mean_norm = float(np.linalg.norm(instance.mean))
    observed = instance.sigma_x + instance.profile.matrix_at(1.0)
    observed_min = float(np.linalg.eigvalsh(0.5 * (observed + observed.T))[0])
    return [
        (
            "theta_norm",
            theta_norm <= instance.S + CONTRACT_TOL,
            f"||theta*|| = {theta_norm:.6g}, S = {instance.S:.6g}",
        ),
        (
            "mean_norm",
            mean_norm <= instance.S + CONTRACT_TOL,
            f"||x_mean|| = {mean_norm:.6g}, S = {instance.S:.6g}",
        ),
        (
            "observed_covariance_positive",
            observed_min > CONTRACT_TOL,
            f"lambda_min(Sigma_x + Sigma_n(1)) = {observed_min:.6g}",
        ),
    ]
