"""Grid policies and their parameter schedules."""

from .base import PolicyDecision, confidence_for
from .known_cov import KnownCovPolicy, alg1_step
from .params import alg1_params, alg2_params, make_policy_config
from .registry import PolicyRegistry
from .unknown_cov import UnknownCovPolicy, alg2_step

__all__ = [
    "PolicyDecision",
    "confidence_for",
    "alg1_params",
    "alg2_params",
    "make_policy_config",
    "alg1_step",
    "alg2_step",
    "KnownCovPolicy",
    "UnknownCovPolicy",
    "PolicyRegistry",
]
