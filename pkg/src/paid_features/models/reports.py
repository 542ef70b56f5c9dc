"""Validation, concentration and lower-bound report models."""

from typing import Optional

from pydantic import BaseModel, Field

from .types import ConcentrationKind, LowerBoundSuite


class ProfileViolation(BaseModel):
    """A grid pair breaking monotonicity, or a single cost breaking PSD (c_high is None)."""

    c_low: float
    c_high: Optional[float] = None
    min_eigenvalue: float
    check: str = Field(description="'monotone' or 'psd'")


class ProfileValidationReport(BaseModel):
    """Outcome of checking a profile on a cost grid."""

    grid_size: int
    tolerance: float
    violations: list[ProfileViolation] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


class CheckResult(BaseModel):
    """One named PASS/FAIL check."""

    name: str
    passed: bool
    detail: str = ""


class ViolationReport(BaseModel):
    """Monte-Carlo frequency of confidence-bound violations."""

    kind: ConcentrationKind
    trials: int = Field(ge=1)
    checkpoints: list[int]
    violations_per_checkpoint: list[int]
    any_violation_frequency: float = Field(ge=0.0, le=1.0)
    nominal: float = Field(description="delta for the matrix bound, 3 delta for the loss bound")
    delta: float
    width_ratio: list[float] = Field(
        default_factory=list, description="Median empirical-to-nominal deviation per checkpoint"
    )
    median_deviation: list[float] = Field(
        default_factory=list, description="Median normalized max deviation per checkpoint"
    )
    decay_fraction: Optional[float] = Field(
        default=None, description="Share of trials whose deviation shrank from t=128 to t_max"
    )
    arm_any_violation_frequency: Optional[float] = None
    parameters: dict[str, float] = Field(default_factory=dict)

    @property
    def slack(self) -> float:
        """Three binomial standard errors around the nominal level."""
        p = min(max(self.nominal, 0.0), 1.0)
        return 3.0 * (p * (1.0 - p) / self.trials) ** 0.5

    @property
    def within_nominal(self) -> bool:
        return self.any_violation_frequency <= self.nominal + self.slack


class LowerBoundEntry(BaseModel):
    """Per-instance result of a lower-bound suite."""

    instance_name: str
    target_low: float
    target_high: float
    mean_regret: float
    modal_costs: list[float]
    matches: int
    seeds: int


class LowerBoundReport(BaseModel):
    """Outcome of running a lower-bound suite."""

    suite: LowerBoundSuite
    horizon: int
    entries: list[LowerBoundEntry] = Field(default_factory=list)
