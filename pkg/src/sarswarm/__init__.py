"""Discrete-time simulator for heterogeneous search-and-rescue swarms."""

from .heterogeneity import CompositionPoint, heterogeneity_measure
from .metrics import CostModel, aggregate_tau, efficiency, time_constant
from .simulation import TrialConfig, TrialRecord, advance, compiled_available, run_trial, step_world
from .world import ArenaConfig, ConfigError, SensorConfig, Strategy, World, build_world

__version__ = "0.1.0"

__all__ = [
    "ArenaConfig",
    "CompositionPoint",
    "ConfigError",
    "CostModel",
    "SensorConfig",
    "Strategy",
    "TrialConfig",
    "TrialRecord",
    "World",
    "advance",
    "aggregate_tau",
    "build_world",
    "compiled_available",
    "efficiency",
    "heterogeneity_measure",
    "run_trial",
    "step_world",
    "time_constant",
]
