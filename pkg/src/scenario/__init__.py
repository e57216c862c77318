"""Scenario configuration and the cell run that executes it."""

from .config import (
    CellConfig,
    DynamicEventConfig,
    GroupConfig,
    Measurement,
    PolicyConfig,
    ScenarioConfig,
    TopologyConfig,
    config_to_dict,
    load_config,
    parse_config,
    resolve_config_path,
    validate,
)
from .cell import CellSimulator, RunResult, build_cell_state, run_scenario
from .report import summarize

__all__ = [
    "CellConfig",
    "CellSimulator",
    "DynamicEventConfig",
    "GroupConfig",
    "Measurement",
    "PolicyConfig",
    "RunResult",
    "ScenarioConfig",
    "TopologyConfig",
    "build_cell_state",
    "config_to_dict",
    "load_config",
    "parse_config",
    "resolve_config_path",
    "run_scenario",
    "summarize",
    "validate",
]
