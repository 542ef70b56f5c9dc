"""Paid Features - online linear regression with paid, noise-reducible features."""

__version__ = "0.1.0"

# Protocols
from .core.protocols import Policy

# Environment
from .environment import (
    RoundSampler,
    builtin_instance,
    builtin_names,
    load_instance,
    make_lower_bound_known,
    make_lower_bound_unknown,
    sample_round,
)

# Experiments
from .harness import run_episode, run_lower_bound, sweep

# Domain models
from .models import (
    ExperimentConfig,
    Instance,
    LossLandscape,
    PolicyConfig,
    PolicyOverrides,
    RunLog,
    SweepResult,
)

# Oracle
from .oracle import expected_loss, loss_landscape, optimal_predictor

# Learners
from .policies import KnownCovPolicy, PolicyRegistry, UnknownCovPolicy, make_policy_config

__all__ = [
    # Domain models
    "Instance",
    "PolicyConfig",
    "PolicyOverrides",
    "ExperimentConfig",
    "LossLandscape",
    "RunLog",
    "SweepResult",
    # Protocols
    "Policy",
    # Environment
    "RoundSampler",
    "sample_round",
    "builtin_instance",
    "builtin_names",
    "load_instance",
    "make_lower_bound_known",
    "make_lower_bound_unknown",
    # Oracle
    "expected_loss",
    "optimal_predictor",
    "loss_landscape",
    # Learners
    "KnownCovPolicy",
    "UnknownCovPolicy",
    "PolicyRegistry",
    "make_policy_config",
    # Experiments
    "run_episode",
    "sweep",
    "run_lower_bound",
]
