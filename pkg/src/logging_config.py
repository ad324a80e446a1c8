"""Logging configuration for the calibration workbench."""

import logging
import os
import sys
from typing import Any, TextIO

# Configure logging format
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"

NOISY_LOGGERS = ("matplotlib", "numexpr", "opentelemetry")


def resolve_level(level: int | str | None, default: int = logging.INFO) -> int:
    """
    Resolve a logging level from an int, a level name, or PREQ_LOG_LEVEL.

    Args:
        level: Explicit level (int or name such as "DEBUG"), or None
        default: Level used when neither argument nor environment sets one

    Returns:
        Numeric logging level
    """
    if level is None:
        level = os.getenv("PREQ_LOG_LEVEL")
    if level is None:
        return default
    if isinstance(level, int):
        return level
    resolved = logging.getLevelName(level.upper())
    return resolved if isinstance(resolved, int) else default


def setup_logging(
    level: int | str | None = None, stream: TextIO | None = None, **kwargs: Any
) -> None:
    """
    Configure logging for the workbench.

    Args:
        level: Logging level (default: PREQ_LOG_LEVEL or INFO)
        stream: Output stream (default: stdout; the CLI passes stderr)
        **kwargs: Additional logging configuration options
    """
    logging.basicConfig(
        level=resolve_level(level),
        format=kwargs.get("format", LOG_FORMAT),
        datefmt=kwargs.get("datefmt", DATE_FORMAT),
        stream=stream or sys.stdout,
        force=True,
    )

    for name in NOISY_LOGGERS:
        logging.getLogger(name).setLevel(logging.WARNING)


def get_logger(name: str) -> logging.Logger:
    """
    Get a logger instance for a specific module.

    Args:
        name: Logger name (typically __name__)

    Returns:
        Configured logger instance
    """
    return logging.getLogger(name)
