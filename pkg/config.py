# config.py

"""Runtime configuration and simulation config files."""

import os
from dataclasses import dataclass
from typing import List, Optional

from dotenv import dotenv_values, load_dotenv

from constants import (
    DEFAULT_SEED, DEFAULT_TRIALS, ENUMERATION_BUDGET, GRAPH_RETRIES,
    LAMBDA_FACTOR, ROUND_FACTOR, SIMULATION_MODES, TOWER_TRIALS,
)
from errors import ConfigError

load_dotenv()


class Config:
    LOG_LEVEL = os.environ.get('LOG_LEVEL', 'INFO')

    # Enumeration
    ENUMERATION_BUDGET = int(os.environ.get('ENUMERATION_BUDGET', ENUMERATION_BUDGET))

    # Construction
    LAMBDA_FACTOR = float(os.environ.get('LAMBDA_FACTOR', LAMBDA_FACTOR))
    GRAPH_RETRIES = int(os.environ.get('GRAPH_RETRIES', GRAPH_RETRIES))
    TOWER_TRIALS = int(os.environ.get('TOWER_TRIALS', TOWER_TRIALS))

    # Decoding and simulation
    ROUND_FACTOR = int(os.environ.get('ROUND_FACTOR', ROUND_FACTOR))
    DEFAULT_SEED = int(os.environ.get('DEFAULT_SEED', DEFAULT_SEED))
    DEFAULT_TRIALS = int(os.environ.get('DEFAULT_TRIALS', DEFAULT_TRIALS))
    OUTPUT_DIR = os.environ.get('OUTPUT_DIR', '.')


class TestingConfig(Config):
    TESTING = True
    LOG_LEVEL = 'DEBUG'
    GRAPH_RETRIES = 20
    TOWER_TRIALS = 500
    DEFAULT_TRIALS = 20


def get_config():
    if os.environ.get('TESTING'):
        return TestingConfig
    return Config


# =============================================================================
# Simulation config files
# =============================================================================

@dataclass
class SimulationConfig:
    """Parsed key=value simulation file."""
    code: str
    p_grid: List[float]
    trials: int
    seed: int
    mode: str
    out: str
    max_rounds: Optional[int] = None


REQUIRED_KEYS = ('code', 'p_grid', 'trials', 'seed', 'mode', 'out')


def _integer(values: dict, key: str, minimum: int) -> int:
    try:
        value = int(values[key])
    except (TypeError, ValueError):
        raise ConfigError(f"[config] {key} must be an integer, got {values[key]!r}")
    if value < minimum:
        raise ConfigError(f"[config] {key} must be >= {minimum}, got {value}")
    return value


def parse_simulation_config(values: dict) -> SimulationConfig:
    """Validate raw key/value pairs."""
    missing = [key for key in REQUIRED_KEYS if not values.get(key)]
    if missing:
        raise ConfigError(f"[config] missing keys: {', '.join(missing)}")
    unknown = sorted(set(values) - set(REQUIRED_KEYS) - {'max_rounds'})
    if unknown:
        raise ConfigError(f"[config] unknown keys: {', '.join(unknown)}")

    try:
        p_grid = [float(p) for p in values['p_grid'].split(',') if p.strip()]
    except ValueError:
        raise ConfigError(f"[config] p_grid must be a comma-separated list of numbers, got {values['p_grid']!r}")
    if not p_grid:
        raise ConfigError("[config] p_grid is empty")
    bad = [p for p in p_grid if not 0.0 <= p < 0.5]
    if bad:
        raise ConfigError(f"[config] p_grid values outside [0, 1/2): {bad}")

    mode = values['mode'].strip()
    if mode not in SIMULATION_MODES:
        raise ConfigError(f"[config] mode must be one of {SIMULATION_MODES}, got {mode!r}")

    max_rounds = None
    if values.get('max_rounds'):
        max_rounds = _integer(values, 'max_rounds', 1)

    return SimulationConfig(
        code=values['code'].strip(),
        p_grid=p_grid,
        trials=_integer(values, 'trials', 1),
        seed=_integer(values, 'seed', 0),
        mode=mode,
        out=values['out'].strip(),
        max_rounds=max_rounds,
    )


def load_simulation_config(path: str) -> SimulationConfig:
    if not os.path.exists(path):
        raise ConfigError(f"[config] no such file: {path}")
    return parse_simulation_config(dotenv_values(path))
