"""Iterative LQ game solver: scenario loading, solves, Monte Carlo studies
and receding-horizon episodes."""

from ._ilqgame import (
    InvalidArgument,
    IoError,
    ParseError,
    Scenario,
    load_scenario,
    parse_scenario,
    run_monte_carlo,
    run_receding_horizon,
    sample_sinusoidal_strategy,
    serialize_scenario,
    solve,
)

__all__ = [
    "InvalidArgument",
    "IoError",
    "ParseError",
    "Scenario",
    "load_scenario",
    "parse_scenario",
    "run_monte_carlo",
    "run_receding_horizon",
    "sample_sinusoidal_strategy",
    "serialize_scenario",
    "solve",
]
