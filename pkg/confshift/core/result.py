#!/usr/bin/env python3
"""
Return codes and error types.

FEATURE SET:
============
1. ReturnCodes enum - Process exit codes for every CLI subcommand
2. ConfshiftError hierarchy - Typed failures raised by the library
3. exit_code_for - Map an exception to the exit code the CLI reports
4. csv_parse_error - Turn a pandas CSV failure into a located ParseError

USAGE:
======
    from confshift.core.result import ConfigurationError, ReturnCodes

    if n_bootstrap < 1:
        raise ConfigurationError(f"n_bootstrap must be >= 1, got {n_bootstrap}")

    try:
        run()
    except Exception as error:
        sys.exit(exit_code_for(error))

NOTES:
======
- Library code raises; only the CLI converts exceptions into exit codes
- 0 = success, 1 = validation error (bad input values, configs, files that
  parse but violate a contract), 2 = I/O error (missing or unreadable files)
- Every error type also subclasses the matching builtin (ValueError,
  ArithmeticError) so callers catching builtins keep working
"""

import re
from enum import IntEnum
from pathlib import Path
from typing import Optional

_CSV_LINE = re.compile(r"\bline (\d+)")


class ReturnCodes(IntEnum):
    """Exit codes shared by all confshift subcommands."""

    SUCCESS = 0
    VALIDATION_ERROR = 1
    IO_ERROR = 2


class ConfshiftError(Exception):
    """Base class for every error raised by confshift."""


class ConfigurationError(ConfshiftError, ValueError):
    """A parameter, config key or input shape is not acceptable."""


class DomainError(ConfshiftError, ValueError):
    """A mathematical precondition does not hold (e.g. empty calibration set)."""


class NumericalError(ConfshiftError, ArithmeticError):
    """A numerical routine failed (e.g. singular covariance without ridge)."""


class ParseError(ConfshiftError, ValueError):
    """An input file could not be parsed.

    Attributes:
        path: File being parsed, if known
        row: 1-based data row (header excluded) where parsing failed, if known
    """

    def __init__(
        self,
        message: str,
        *,
        path: Optional[Path | str] = None,
        row: Optional[int] = None,
    ) -> None:
        self.path = Path(path) if path is not None else None
        self.row = row
        location = ""
        if self.path is not None:
            location += f"{self.path.name}"
        if row is not None:
            location += f" row {row}" if location else f"row {row}"
        super().__init__(f"{location}: {message}" if location else message)


def csv_parse_error(error: ValueError, path: Path | str) -> ParseError:
    """Convert a CSV reader failure into a ParseError naming the data row.

    Tokenizer messages such as "Expected 2 fields in line 3, saw 3" count
    file lines with the header as line 1; the row reported excludes it.
    """
    if isinstance(error, UnicodeDecodeError):
        byte = error.object[error.start]
        return ParseError(
            f"not valid {error.encoding}: byte {byte:#04x} at offset {error.start}",
            path=path,
        )
    message = str(error).strip()
    message = message.split("C error: ", 1)[-1]
    match = _CSV_LINE.search(message)
    row = int(match.group(1)) - 1 if match else None
    return ParseError(message or type(error).__name__, path=path, row=row)


def exit_code_for(error: BaseException) -> ReturnCodes:
    """Return the exit code the CLI reports for ``error``."""
    if isinstance(error, ConfshiftError):
        return ReturnCodes.VALIDATION_ERROR
    if isinstance(error, OSError):
        return ReturnCodes.IO_ERROR
    return ReturnCodes.VALIDATION_ERROR
