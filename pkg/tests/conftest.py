"""Shared pytest fixtures for paid-features tests."""

from pathlib import Path

import numpy as np
import pytest
from paid_features.environment import builtin_instance
from paid_features.models import (
    ConstantProfile,
    FRatioProfile,
    Instance,
    PiecewiseLinearProfile,
    ProfileKnot,
    StepProfile,
)
from paid_features.policies import PolicyRegistry

REPO_ROOT = Path(__file__).resolve().parent.parent


@pytest.fixture(autouse=True)
def reset_policy_registry():
    """Drop custom policy registrations between tests."""
    yield
    PolicyRegistry.reset()


@pytest.fixture
def rng() -> np.random.Generator:
    """Deterministic generator for randomized checks."""
    return np.random.default_rng(12345)


@pytest.fixture
def unit_instance() -> Instance:
    """1-D instance with unit feature variance and unit constant noise."""
    return Instance(
        name="unit",
        d=1,
        theta_star=[1.0],
        x_mean=[0.0],
        x_cov_centered=[[1.0]],
        profile=ConstantProfile(matrix=[[1.0]]),
        lambda_=1.0,
        S=1.0,
    )


@pytest.fixture
def fratio_base() -> Instance:
    """The flat baseline: every cost is optimal with loss 1/2."""
    return builtin_instance("lb-unknown-base")


@pytest.fixture
def fratio_2d() -> Instance:
    """2-D ratio-profile instance used by the rate experiments."""
    return builtin_instance("fratio-2d")


@pytest.fixture
def zero_noise_2d() -> Instance:
    """2-D instance whose features are observed without noise at every cost."""
    return builtin_instance("zero-noise-2d")


@pytest.fixture
def perturbed_p2() -> Instance:
    """Perturbed ratio instance k=2 of K=4."""
    return builtin_instance("lb-unknown-p2")


@pytest.fixture
def sensor_3d() -> Instance:
    """3-D instance with a piecewise-linear profile, a nonzero mean and output noise."""
    return Instance(
        name="sensor-3d",
        d=3,
        theta_star=[0.8, -0.4, 0.3],
        x_mean=[0.5, 0.0, -0.2],
        x_cov_centered=[[1.0, 0.2, 0.0], [0.2, 0.8, 0.1], [0.0, 0.1, 0.6]],
        profile=PiecewiseLinearProfile(
            knots=[
                ProfileKnot(cost=0.0, matrix=[[1.5, 0, 0], [0, 1.0, 0], [0, 0, 0.8]]),
                ProfileKnot(cost=0.4, matrix=[[0.6, 0, 0], [0, 0.7, 0], [0, 0, 0.5]]),
                ProfileKnot(cost=1.0, matrix=[[0.1, 0, 0], [0, 0.2, 0], [0, 0, 0.1]]),
            ]
        ),
        lambda_=0.8,
        S=1.5,
        output_noise_var=0.05,
    )


@pytest.fixture
def step_profile() -> StepProfile:
    """sigma_n^2(c) = 1{c < 1/2}."""
    return StepProfile(high=[[1.0]], low=[[0.0]], threshold=0.5)


@pytest.fixture
def fratio_profile() -> FRatioProfile:
    """sigma_n^2(c) = (1 - c)/(1 + c)."""
    return FRatioProfile()


@pytest.fixture
def instances_dir() -> Path:
    """Directory of the shipped instance files."""
    return REPO_ROOT / "instances"


@pytest.fixture
def temp_dir(tmp_path: Path) -> Path:
    """Provide a temporary directory for tests."""
    return tmp_path
