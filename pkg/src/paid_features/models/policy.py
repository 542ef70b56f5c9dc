"""Policy configuration model."""

from typing import Optional

from pydantic import BaseModel, ConfigDict, Field

from .types import PolicyVariant


class PolicyConfig(BaseModel):
    """Learner configuration for one episode.

    Use ``policies.make_policy_config`` to apply the horizon-dependent schedules.
    """

    model_config = ConfigDict(populate_by_name=True)

    variant: PolicyVariant
    T: int = Field(ge=1, description="Horizon")
    K: int = Field(ge=1, description="Grid size; arms are k/K")
    delta: float = Field(gt=0.0, lt=1.0)
    lambda_: float = Field(gt=0.0, alias="lambda")
    S: float = Field(gt=0.0)
    R: float = Field(gt=0.0)
    d: int = Field(ge=1)
    K_overridden: bool = False
    delta_overridden: bool = False

    # Experimentation knobs; the defaults follow the analysed algorithms.
    regularized: bool = True
    regularization_scale: float = Field(default=1.0, ge=0.0)
    bonus_scale: float = Field(default=1.0, ge=0.0)
    include_zero_arm: bool = False
    record_diagnostics: bool = False

    @property
    def lam(self) -> float:
        return self.lambda_

    @property
    def first_arm(self) -> int:
        return 0 if self.include_zero_arm and self.variant == "unknown" else 1

    def cost_of(self, k: int) -> float:
        return k / self.K

    def arm_costs(self) -> list[float]:
        return [k / self.K for k in range(self.first_arm, self.K + 1)]

    def describe(self) -> str:
        return f"{self.variant}(K={self.K}, delta={self.delta:.3g})"


class PolicyOverrides(BaseModel):
    """Optional overrides for the schedule-derived policy parameters."""

    K: Optional[int] = Field(default=None, ge=1)
    delta: Optional[float] = Field(default=None, gt=0.0, lt=1.0)
    regularized: bool = True
    regularization_scale: float = Field(default=1.0, ge=0.0)
    bonus_scale: float = Field(default=1.0, ge=0.0)
    include_zero_arm: bool = False
