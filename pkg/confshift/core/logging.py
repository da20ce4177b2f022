#!/usr/bin/env python3
"""
Logging - Centralized Logger Configuration

Every confshift module logs through the same handler setup so progress
messages from the weight estimator, the KDE bandwidth search and the
simulation harness share one format on stderr.

FEATURE SET:
============
1. get_logger - Get a configured logger for a module
2. configure_logging - Set up logging level and format globally
3. LogLevel - Enum for log level constants
4. level_for_flags - Map CLI --verbose/--quiet flags to a level

USAGE:
======
    from confshift.core.logging import get_logger

    logger = get_logger(__name__)

    def fit(...):
        logger.info("Fitting %d bootstrap replicas", n_bootstrap)
        logger.debug("Replica %d sub-seed: %d", b, sub_seed)
        logger.warning("Bandwidth search collapsed; using h_min=%g", h_min)

DEPENDENCIES:
=============
- logging (stdlib)

NOTES:
======
- All modules should use get_logger(__name__) for consistent naming
- CLI output (print) is for results such as N_eff and rejection counts;
  logging is for progress, degenerate-case warnings and debug tracing
- Default level is INFO; use DEBUG for per-replica and per-trial tracing
"""

import logging
import sys
from enum import IntEnum
from typing import Optional, TextIO

# Default format: timestamp - module - level - message
DEFAULT_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
SHORT_FORMAT = "%(levelname)s: %(message)s"

_logging_configured = False


class LogLevel(IntEnum):
    """Log level constants matching Python's logging module."""

    DEBUG = logging.DEBUG
    INFO = logging.INFO
    WARNING = logging.WARNING
    ERROR = logging.ERROR
    CRITICAL = logging.CRITICAL


def configure_logging(
    level: int = logging.INFO,
    format_string: Optional[str] = None,
    stream: Optional[TextIO] = None,
) -> None:
    """
    Configure logging globally for the application.

    Called once by the CLI entry point; later calls replace the handlers, so
    tests can redirect output to a StringIO.

    Args:
        level: Logging level (use LogLevel enum or logging constants)
        format_string: Custom format string (default: SHORT_FORMAT)
        stream: Output stream (default: sys.stderr)
    """
    global _logging_configured

    root_logger = logging.getLogger()
    for handler in root_logger.handlers[:]:
        root_logger.removeHandler(handler)

    logging.basicConfig(
        level=level,
        format=format_string or SHORT_FORMAT,
        stream=stream or sys.stderr,
    )

    _logging_configured = True


def get_logger(name: str) -> logging.Logger:
    """
    Get a configured logger for a module.

    The dotted module path is shortened to its last component, e.g.
    ``confshift.weights.bagging`` logs as ``bagging``.

    Args:
        name: Module name (typically __name__)

    Returns:
        Configured Logger instance
    """
    if not _logging_configured:
        configure_logging()

    return logging.getLogger(name.rsplit(".", 1)[-1])


def level_for_flags(verbose: bool = False, quiet: bool = False) -> LogLevel:
    """Translate the CLI's ``--verbose``/``--quiet`` pair into a level.

    ``--verbose`` wins when both are given.
    """
    if verbose:
        return LogLevel.DEBUG
    if quiet:
        return LogLevel.WARNING
    return LogLevel.INFO
