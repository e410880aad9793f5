"""Package de configuration."""

from .settings import (
    engine_config,
    fixture_config,
    report_config,
    logging_config,
    configure_logging,
)

__all__ = [
    "engine_config",
    "fixture_config",
    "report_config",
    "logging_config",
    "configure_logging",
]
