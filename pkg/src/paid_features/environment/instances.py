"""Instance factories: lower-bound constructions, built-in instances and loading."""

from __future__ import annotations

from collections.abc import Callable
from pathlib import Path

from ..core.logging_config import get_logger
from ..models import (
    ConstantProfile,
    FRatioProfile,
    Instance,
    PerturbedFRatioProfile,
    StepProfile,
)

logger = get_logger()

BUILTIN_PREFIX = "builtin:"


def make_lower_bound_known(eps: float) -> tuple[Instance, Instance]:
    """Two 1-D instances that differ only in the feature variance, 1 - eps and 1 + eps.

    Both use theta* = 1, lambda = 1 and the step profile sigma_n^2(c) = 1{c < 1/2}.
    Paying 1/2 removes all noise; it is worth it only in the higher-variance instance.

    Raises:
        ValueError: If ``eps`` is outside (0, 1/2].
    """
    if not 0.0 < eps <= 0.5:
        raise ValueError(f"eps must lie in (0, 1/2], got {eps}")
    profile = StepProfile(high=[[1.0]], low=[[0.0]], threshold=0.5)

    def build(name: str, variance: float) -> Instance:
        return Instance(
            name=name,
            d=1,
            theta_star=[1.0],
            x_mean=[0.0],
            x_cov_centered=[[variance]],
            profile=profile,
            lambda_=1.0,
            S=1.0,
        )

    return build("lb-known-minus", 1.0 - eps), build("lb-known-plus", 1.0 + eps)


def make_lower_bound_unknown(K: int) -> tuple[Instance, list[Instance]]:
    """The flat baseline instance and its K locally perturbed variants.

    The baseline has unit feature variance, theta* = 1, lambda = 1/2 and the ratio
    profile (1 - c)/(1 + c), which makes every cost optimal. Variant k lowers the noise
    on [c_k, c_{k+1}) so that its optimum lies strictly inside that interval.

    Raises:
        ValueError: If ``K`` < 1.
    """
    if K < 1:
        raise ValueError(f"K must be at least 1, got {K}")

    def build(name: str, profile: FRatioProfile | PerturbedFRatioProfile) -> Instance:
        return Instance(
            name=name,
            d=1,
            theta_star=[1.0],
            x_mean=[0.0],
            x_cov_centered=[[1.0]],
            profile=profile,
            lambda_=0.5,
            S=1.0,
        )

    baseline = build("lb-unknown-base", FRatioProfile())
    perturbed = [
        build(f"lb-unknown-p{k}", PerturbedFRatioProfile(k=k, K=K)) for k in range(1, K + 1)
    ]
    return baseline, perturbed


def _fratio() -> Instance:
    return Instance(
        name="fratio",
        d=1,
        theta_star=[1.0],
        x_mean=[0.0],
        x_cov_centered=[[1.0]],
        profile=FRatioProfile(),
        lambda_=0.25,
        S=1.0,
    )


def _fratio_2d() -> Instance:
    return Instance(
        name="fratio-2d",
        d=2,
        theta_star=[1.0, 0.5],
        x_mean=[0.0, 0.0],
        x_cov_centered=[[1.0, 0.0], [0.0, 1.0]],
        profile=FRatioProfile(dim=2),
        lambda_=0.5,
        S=2.0,
    )


def _zero_noise_2d() -> Instance:
    return Instance(
        name="zero-noise-2d",
        d=2,
        theta_star=[0.6, -0.8],
        x_mean=[0.2, 0.1],
        x_cov_centered=[[1.0, 0.0], [0.0, 0.5]],
        profile=ConstantProfile(matrix=[[0.0, 0.0], [0.0, 0.0]]),
        lambda_=1.0,
        S=1.0,
    )


_BUILTINS: dict[str, Callable[[], Instance]] = {
    "fratio": _fratio,
    "fratio-2d": _fratio_2d,
    "zero-noise-2d": _zero_noise_2d,
    "lb-known-minus": lambda: make_lower_bound_known(0.3)[0],
    "lb-known-plus": lambda: make_lower_bound_known(0.3)[1],
    "lb-unknown-base": lambda: make_lower_bound_unknown(4)[0],
    "lb-unknown-p2": lambda: make_lower_bound_unknown(4)[1][1],
}


def builtin_names() -> list[str]:
    return sorted(_BUILTINS)


def builtin_instance(name: str) -> Instance:
    """Return a named built-in instance.

    Raises:
        KeyError: If ``name`` is not a built-in.
    """
    if name not in _BUILTINS:
        available = ", ".join(builtin_names())
        raise KeyError(f"Unknown built-in instance '{name}'. Available: {available}")
    return _BUILTINS[name]()


def load_instance(source: str | Path, *, check_contract: bool = True) -> Instance:
    """Load an instance from a JSON file or a ``builtin:<name>`` reference.

    Args:
        source: File path or built-in reference.
        check_contract: Raise on norm and positivity contract failures.

    Raises:
        FileNotFoundError: If the file does not exist.
        KeyError: For an unknown built-in name.
        pydantic.ValidationError: If the document is malformed.
    """
    text = str(source)
    if text.startswith(BUILTIN_PREFIX):
        return builtin_instance(text[len(BUILTIN_PREFIX) :])
    path = Path(source)
    if not path.is_file():
        raise FileNotFoundError(f"Instance file not found: {path}")
    logger.debug(f"Loading instance from {path}")
    return Instance.model_validate_json(
        path.read_text(encoding="utf-8"), context={"check_contract": check_contract}
    )


def save_instance(instance: Instance, path: str | Path) -> Path:
    """Write ``instance`` as JSON using the serialized key names."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(instance.model_dump_json(by_alias=True, indent=2), encoding="utf-8")
    return path
