"""Python bindings for the drlab C++ core."""

from ._drlab import (
    ConfigError,
    DomainError,
    ResourceError,
    __version__,
    evolve_csv,
    fit_exponent,
    fixture_counts,
    phase,
    presets,
    run_cli,
    simulate,
    verify_openpath,
    verify_pivotal,
)

__all__ = [
    "ConfigError",
    "DomainError",
    "ResourceError",
    "__version__",
    "evolve_csv",
    "fit_exponent",
    "fixture_counts",
    "phase",
    "presets",
    "run_cli",
    "simulate",
    "verify_openpath",
    "verify_pivotal",
]
