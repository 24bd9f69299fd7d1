"""Order-1.5 change-of-measure multilevel Monte Carlo for invariant measures."""

from ._core import (
    ConfigError,
    NumericalFailure,
    __version__,
    cli,
    moment_audit,
    presets,
    reference_value,
    run,
)

__all__ = [
    "ConfigError",
    "NumericalFailure",
    "__version__",
    "cli",
    "moment_audit",
    "presets",
    "reference_value",
    "run",
]
