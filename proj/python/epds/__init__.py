"""DC power distribution network simulator: plant, adaptive and baseline
controllers, and the analytic checks around them."""

from ._epds import (
    Config,
    ConfigError,
    NumericalAbort,
    compare,
    config_schema_version,
    equilibrium,
    simulate,
    summary_schema_version,
    verify,
)

__all__ = [
    "Config",
    "ConfigError",
    "NumericalAbort",
    "compare",
    "config_schema_version",
    "equilibrium",
    "simulate",
    "summary_schema_version",
    "verify",
]
