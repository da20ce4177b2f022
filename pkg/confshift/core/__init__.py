#!/usr/bin/env python3
"""
Core abstractions for the conformal inference tools.

This package provides shared error types, constants, seeding and logging
used by every other confshift subpackage.

Contents:
    - constants: Numerical guards, defaults, method/pruning vocabularies
    - result: ReturnCodes enum and the ConfshiftError hierarchy
    - logging: Centralized logger configuration
    - seeding: Counter-based seed derivation
    - runtime: CONFSHIFT_THREADS handling

Usage:
    from confshift.core import ConfigurationError, get_logger
    from confshift.core.seeding import derive_seed
"""

from .logging import LogLevel, configure_logging, get_logger
from .result import (
    ConfigurationError,
    ConfshiftError,
    DomainError,
    NumericalError,
    ParseError,
    ReturnCodes,
    exit_code_for,
)
from .runtime import resolve_n_jobs
from .seeding import derive_seed, make_rng

__all__ = [
    # Result types
    "ReturnCodes",
    "ConfshiftError",
    "ConfigurationError",
    "DomainError",
    "NumericalError",
    "ParseError",
    "exit_code_for",
    # Logging
    "get_logger",
    "configure_logging",
    "LogLevel",
    # Randomness and runtime
    "derive_seed",
    "make_rng",
    "resolve_n_jobs",
]
