"""Python bindings for the lain UAV edge-computing simulator."""

import json

from ._core import (
    CSV_HEADER,
    ConfigError,
    ConstraintError,
    DomainError,
    derive_stream_seed,
    flight_energy,
    hover_power,
    local_energy,
    move_power,
    offload_completion,
    offload_energy,
    run_auction,
)
from . import _core


def _text(config):
    if config is None:
        return "{}"
    if isinstance(config, str):
        return config
    return json.dumps(config)


def validate_config(config=None):
    _core.validate_config(_text(config))


def run_episode(config=None, policy="gmsp", seed=1):
    """One episode; returns the result row as a dict."""
    return _core.run_episode(_text(config), policy, seed)


def run_sweep(config):
    """All sweep cells in values x policies x seeds order."""
    return _core.run_sweep(_text(config))


def sweep_csv(config):
    return _core.sweep_csv(_text(config))


__all__ = [
    "CSV_HEADER",
    "ConfigError",
    "ConstraintError",
    "DomainError",
    "derive_stream_seed",
    "flight_energy",
    "hover_power",
    "local_energy",
    "move_power",
    "offload_completion",
    "offload_energy",
    "run_auction",
    "run_episode",
    "run_sweep",
    "sweep_csv",
    "validate_config",
]
