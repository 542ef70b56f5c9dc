"""Environment: noise profiles, sampling and instance constructions."""

from .divergence import kl_gaussian
from .instances import (
    builtin_instance,
    builtin_names,
    load_instance,
    make_lower_bound_known,
    make_lower_bound_unknown,
    save_instance,
)
from .profiles import noise_stack, sigma_n, validate_profile
from .sampling import RoundBatch, RoundSample, RoundSampler, episode_rng, sample_round

__all__ = [
    "sigma_n",
    "noise_stack",
    "validate_profile",
    "RoundSample",
    "RoundBatch",
    "RoundSampler",
    "sample_round",
    "episode_rng",
    "make_lower_bound_known",
    "make_lower_bound_unknown",
    "builtin_instance",
    "builtin_names",
    "load_instance",
    "save_instance",
    "kl_gaussian",
]
