"""Python front end for the trust-aware P2P overlay simulator."""

from ._core import (
    BloomFilter,
    Config,
    ConfigError,
    Simulator,
    fanout,
    merge_indirect,
    power_law_edges,
    run_experiment,
    run_simulation,
    trust_value,
)

__all__ = [
    "BloomFilter",
    "Config",
    "ConfigError",
    "Simulator",
    "fanout",
    "merge_indirect",
    "power_law_edges",
    "run_experiment",
    "run_simulation",
    "trust_value",
]
