"""Pytest configuration and fixtures for test suite."""

import sys
from collections.abc import Callable, Sequence
from pathlib import Path

import pytest

# Add src directory to path for imports
SRC_PATH = Path(__file__).parent.parent / "src"
sys.path.insert(0, str(SRC_PATH))

from fleetshare.feasibility import OfferProfile, Routing  # noqa: E402
from fleetshare.market import DiscountProfile  # noqa: E402

SCENARIOS_DIR = Path(__file__).parent.parent / "scenarios"


@pytest.fixture
def make_routing() -> Callable[..., Routing]:
    """Factory for routings; defaults to the two-route system optimum."""

    def _factory(
        flows: Sequence[float] = (0.5, 0.5),
        times: Sequence[float] = (2.0, 2.5),
    ) -> Routing:
        return Routing.of(flows, times)

    return _factory


@pytest.fixture
def make_profile() -> Callable[..., OfferProfile]:
    """Factory for offer profiles from ``(weight, offer)`` pairs.

    Drivers are numbered "1", "2", ... in the given order.
    """

    def _factory(entries: Sequence[tuple[float, float]]) -> OfferProfile:
        return OfferProfile.from_offers(
            [(str(i + 1), weight, offer) for i, (weight, offer) in enumerate(entries)]
        )

    return _factory


@pytest.fixture
def make_population() -> Callable[..., DiscountProfile]:
    """Factory for discount profiles from ``(name, weight, gamma)`` triples."""

    def _factory(entries: Sequence[tuple[str, float, float]]) -> DiscountProfile:
        return DiscountProfile.from_gammas(entries)

    return _factory


@pytest.fixture
def bundled_scenario() -> Callable[[str], Path]:
    """Path of a bundled scenario by stem."""

    def _factory(name: str) -> Path:
        path = SCENARIOS_DIR / f"{name}.toml"
        if not path.exists():
            pytest.skip(f"Scenario not found: {path}")
        return path

    return _factory
