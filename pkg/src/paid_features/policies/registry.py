"""Policy registry with the built-in learners."""

from __future__ import annotations

from collections.abc import Callable

from ..core.logging_config import get_logger
from ..core.protocols import Policy
from ..models import Instance, PolicyConfig
from .known_cov import KnownCovPolicy
from .unknown_cov import UnknownCovPolicy

logger = get_logger()

PolicyFactory = Callable[[PolicyConfig, Instance], Policy]


def _known(config: PolicyConfig, instance: Instance) -> Policy:
    return KnownCovPolicy(config, instance.profile)


def _unknown(config: PolicyConfig, instance: Instance) -> Policy:
    return UnknownCovPolicy(config)


class PolicyRegistry:
    """Maps policy variant names to factories.

    Provides:
    - Built-in learners ("known", "unknown")
    - Runtime registration for custom learners
    """

    _factories: dict[str, PolicyFactory] = {}
    _builtins: dict[str, PolicyFactory] = {"known": _known, "unknown": _unknown}

    @classmethod
    def reset(cls) -> None:
        """Drop custom registrations. Intended for test isolation."""
        cls._factories.clear()

    @classmethod
    def register(cls, name: str, factory: PolicyFactory, *, override: bool = False) -> None:
        """Register a policy factory.

        Raises:
            ValueError: If ``name`` is taken and ``override`` is False.
        """
        if (name in cls._factories or name in cls._builtins) and not override:
            raise ValueError(f"Policy '{name}' is already registered")
        cls._factories[name] = factory

    @classmethod
    def get(cls, name: str) -> PolicyFactory:
        """Return the factory for ``name``.

        Raises:
            KeyError: If ``name`` is not registered.
        """
        if name in cls._factories:
            return cls._factories[name]
        if name in cls._builtins:
            return cls._builtins[name]
        available = ", ".join(cls.list_policies())
        raise KeyError(f"Unknown policy '{name}'. Available: {available}")

    @classmethod
    def list_policies(cls) -> list[str]:
        return sorted({*cls._builtins, *cls._factories})

    @classmethod
    def create(cls, config: PolicyConfig, instance: Instance) -> Policy:
        logger.debug(f"Creating {config.describe()} policy for {instance.name}")
        return cls.get(config.variant)(config, instance)
