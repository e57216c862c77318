"""Shared fixtures: small scenarios that run in well under a second."""

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent.parent))

from src.scenario import GroupConfig, ScenarioConfig


@pytest.fixture
def small_config() -> ScenarioConfig:
    """One group: UE 0 sends to UEs 1..10 for one second of traffic."""
    return ScenarioConfig(
        name="small",
        duration_ms=1000,
        n_ues=11,
        groups=(GroupConfig(source=0, receivers=tuple(range(1, 11)), flow=0),),
    )
