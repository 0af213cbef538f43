"""Route delay functions.

Each route of a parallel network carries a strictly increasing delay
function of its own flow. Two families are supported: affine delays
a + b·x and BPR delays t0·(1 + α·(x/capacity)^β).
"""

from __future__ import annotations

from collections.abc import Callable, Mapping
from dataclasses import dataclass
from enum import StrEnum
from typing import Any

from fleetshare.errors import ConfigError

__all__ = [
    "DelayKind",
    "AffineDelay",
    "BPRDelay",
    "DelayFunction",
    "DELAY_REGISTRY",
    "BPR_DEFAULT_ALPHA",
    "BPR_DEFAULT_BETA",
    "delay_from_dict",
]

BPR_DEFAULT_ALPHA = 0.15
BPR_DEFAULT_BETA = 4.0


class DelayKind(StrEnum):
    """Supported delay function families."""

    AFFINE = "affine"
    BPR = "bpr"


@dataclass(frozen=True)
class AffineDelay:
    """Affine delay ``a + b·x``.

    Attributes
    ----------
    a : float
        Free-flow travel time (> 0).
    b : float
        Slope (> 0).
    """

    a: float
    b: float

    def __post_init__(self) -> None:
        """Validate parameters."""
        if self.a <= 0:
            raise ValueError(f"free-flow time a must be > 0, got {self.a}")
        if self.b <= 0:
            raise ValueError(f"slope b must be > 0, got {self.b}")

    @property
    def kind(self) -> DelayKind:
        """Delay family."""
        return DelayKind.AFFINE

    def __call__(self, flow: float) -> float:
        """Travel time at ``flow``."""
        return self.a + self.b * flow

    def marginal(self, flow: float) -> float:
        """Marginal social cost ``d/dx [x·t(x)] = a + 2·b·x``."""
        return self.a + 2.0 * self.b * flow

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary."""
        return {"kind": self.kind.value, "a": self.a, "b": self.b}


@dataclass(frozen=True)
class BPRDelay:
    """Bureau of Public Roads delay ``t0·(1 + α·(x/capacity)^β)``.

    Attributes
    ----------
    t0 : float
        Free-flow travel time (> 0).
    capacity : float
        Practical capacity (> 0).
    alpha : float
        Scale of the congestion term (> 0), default 0.15.
    beta : float
        Exponent of the congestion term (>= 1), default 4.
    """

    t0: float
    capacity: float
    alpha: float = BPR_DEFAULT_ALPHA
    beta: float = BPR_DEFAULT_BETA

    def __post_init__(self) -> None:
        """Validate parameters."""
        if self.t0 <= 0:
            raise ValueError(f"free-flow time t0 must be > 0, got {self.t0}")
        if self.capacity <= 0:
            raise ValueError(f"capacity must be > 0, got {self.capacity}")
        if self.alpha <= 0:
            raise ValueError(f"alpha must be > 0, got {self.alpha}")
        if self.beta < 1:
            raise ValueError(f"beta must be >= 1, got {self.beta}")

    @property
    def kind(self) -> DelayKind:
        """Delay family."""
        return DelayKind.BPR

    def __call__(self, flow: float) -> float:
        """Travel time at ``flow``."""
        return self.t0 * (1.0 + self.alpha * (flow / self.capacity) ** self.beta)

    def marginal(self, flow: float) -> float:
        """Marginal social cost ``t0·(1 + α·(1+β)·(x/capacity)^β)``."""
        ratio = flow / self.capacity
        return self.t0 * (1.0 + self.alpha * (1.0 + self.beta) * ratio**self.beta)

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary."""
        return {
            "kind": self.kind.value,
            "t0": self.t0,
            "capacity": self.capacity,
            "alpha": self.alpha,
            "beta": self.beta,
        }


DelayFunction = AffineDelay | BPRDelay


def _affine_from_dict(spec: Mapping[str, Any]) -> AffineDelay:
    return AffineDelay(a=float(spec["a"]), b=float(spec["b"]))


def _bpr_from_dict(spec: Mapping[str, Any]) -> BPRDelay:
    return BPRDelay(
        t0=float(spec["t0"]),
        capacity=float(spec["capacity"]),
        alpha=float(spec.get("alpha", BPR_DEFAULT_ALPHA)),
        beta=float(spec.get("beta", BPR_DEFAULT_BETA)),
    )


DELAY_REGISTRY: dict[str, Callable[[Mapping[str, Any]], DelayFunction]] = {
    DelayKind.AFFINE.value: _affine_from_dict,
    DelayKind.BPR.value: _bpr_from_dict,
}


def delay_from_dict(spec: Mapping[str, Any], path: str = "route") -> DelayFunction:
    """Create a delay function from a config mapping.

    Parameters
    ----------
    spec : Mapping[str, Any]
        Mapping with ``kind`` and the family's parameters.
    path : str, optional
        Field path used in error messages.

    Returns
    -------
    DelayFunction
        Configured delay function.

    Raises
    ------
    ConfigError
        If the kind is unknown or parameters are missing or invalid.

    Examples
    --------
    >>> delay_from_dict({"kind": "affine", "a": 1, "b": 2})(0.5)
    2.0
    """
    kind = spec.get("kind")
    factory = DELAY_REGISTRY.get(str(kind))
    if factory is None:
        available = ", ".join(sorted(DELAY_REGISTRY))
        raise ConfigError(f"unknown delay kind {kind!r}; available: {available}", f"{path}.kind")
    try:
        return factory(spec)
    except KeyError as exc:
        raise ConfigError(f"missing parameter {exc.args[0]!r}", path) from exc
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc), path) from exc
