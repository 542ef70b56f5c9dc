"""Core infrastructure: configuration, logging, errors and linear algebra."""

from .config import SimulationSettings, get_settings
from .errors import (
    DimensionMismatchError,
    EpisodeError,
    InstanceMismatchError,
    NonFiniteInputError,
    PaidFeaturesError,
    ProfileError,
    RateFitError,
    SingularCovarianceError,
    SolverConvergenceError,
)
from .linalg import (
    EigenDecomp,
    SymMatrix,
    is_psd,
    loewner_leq,
    min_eigenvalue,
    min_quadratic_on_ball,
    min_quadratic_on_ball_batch,
    psd_factor,
    quad_form,
    quadratic_objective,
    sym_eigen,
)
from .logging_config import current_run, get_logger, run_context, set_logger, setup_logging
from .protocols import Policy

__all__ = [
    "SimulationSettings",
    "get_settings",
    "PaidFeaturesError",
    "DimensionMismatchError",
    "NonFiniteInputError",
    "SolverConvergenceError",
    "ProfileError",
    "SingularCovarianceError",
    "InstanceMismatchError",
    "RateFitError",
    "EpisodeError",
    "SymMatrix",
    "EigenDecomp",
    "quad_form",
    "sym_eigen",
    "min_eigenvalue",
    "is_psd",
    "loewner_leq",
    "psd_factor",
    "quadratic_objective",
    "min_quadratic_on_ball",
    "min_quadratic_on_ball_batch",
    "setup_logging",
    "get_logger",
    "set_logger",
    "run_context",
    "current_run",
    "Policy",
]
