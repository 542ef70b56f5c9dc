"""Pydantic models for paid-features simulations."""

from .experiment import ExperimentConfig
from .instance import Instance, contract_checks, declared_subgaussian_scale
from .landscape import LossLandscape
from .policy import PolicyConfig, PolicyOverrides
from .profile import (
    ConstantProfile,
    CovarianceProfile,
    FRatioProfile,
    PerturbedFRatioProfile,
    PiecewiseLinearProfile,
    ProfileKnot,
    StepProfile,
    f_ratio,
)
from .reports import (
    CheckResult,
    LowerBoundEntry,
    LowerBoundReport,
    ProfileValidationReport,
    ProfileViolation,
    ViolationReport,
)
from .runlog import RoundRecord, RunLog, RunSummary
from .snapshot import KnownCovSnapshot, SplitArray, UnknownCovSnapshot
from .sweep import EpisodeOutcome, RateFit, SweepResult, SweepRow
from .types import ConcentrationKind, LowerBoundSuite, Matrix, PolicyVariant, ProfileKind, Vector

__all__ = [
    "Matrix",
    "Vector",
    "PolicyVariant",
    "ProfileKind",
    "LowerBoundSuite",
    "ConcentrationKind",
    "CovarianceProfile",
    "ConstantProfile",
    "StepProfile",
    "FRatioProfile",
    "PerturbedFRatioProfile",
    "PiecewiseLinearProfile",
    "ProfileKnot",
    "f_ratio",
    "Instance",
    "contract_checks",
    "declared_subgaussian_scale",
    "LossLandscape",
    "PolicyConfig",
    "PolicyOverrides",
    "RoundRecord",
    "RunLog",
    "RunSummary",
    "EpisodeOutcome",
    "RateFit",
    "SweepResult",
    "SweepRow",
    "CheckResult",
    "LowerBoundEntry",
    "LowerBoundReport",
    "ProfileValidationReport",
    "ProfileViolation",
    "ViolationReport",
    "ExperimentConfig",
    "SplitArray",
    "KnownCovSnapshot",
    "UnknownCovSnapshot",
]
