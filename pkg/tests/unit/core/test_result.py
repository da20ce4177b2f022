#!/usr/bin/env python3
"""
Unit tests for confshift.core.result.
"""

import pytest

from confshift.core.result import (
    ConfigurationError,
    ConfshiftError,
    DomainError,
    NumericalError,
    ParseError,
    ReturnCodes,
    csv_parse_error,
    exit_code_for,
)


def test_return_codes_values():
    assert ReturnCodes.SUCCESS == 0
    assert ReturnCodes.VALIDATION_ERROR == 1
    assert ReturnCodes.IO_ERROR == 2


@pytest.mark.parametrize(
    "error_type, builtin",
    [
        (ConfigurationError, ValueError),
        (DomainError, ValueError),
        (ParseError, ValueError),
        (NumericalError, ArithmeticError),
    ],
)
def test_errors_subclass_builtins(error_type, builtin):
    error = error_type("boom")
    assert isinstance(error, ConfshiftError)
    assert isinstance(error, builtin)


def test_parse_error_names_file_and_row():
    error = ParseError("bad score", path="/tmp/data/scores.csv", row=3)
    assert str(error) == "scores.csv row 3: bad score"
    assert error.row == 3
    assert error.path.name == "scores.csv"


def test_parse_error_without_location():
    assert str(ParseError("bad")) == "bad"
    assert str(ParseError("bad", row=2)) == "row 2: bad"


def test_exit_code_for():
    assert exit_code_for(DomainError("x")) == ReturnCodes.VALIDATION_ERROR
    assert exit_code_for(FileNotFoundError("x")) == ReturnCodes.IO_ERROR
    assert exit_code_for(PermissionError("x")) == ReturnCodes.IO_ERROR


def test_csv_parse_error_reports_data_row():
    tokenizer = ValueError(
        "Error tokenizing data. C error: Expected 2 fields in line 3, saw 3\n"
    )

    error = csv_parse_error(tokenizer, "/tmp/scores.csv")
    assert isinstance(error, ParseError)
    assert error.row == 2
    assert str(error) == "scores.csv row 2: Expected 2 fields in line 3, saw 3"


def test_csv_parse_error_for_undecodable_bytes():
    decode = UnicodeDecodeError("utf-8", b"\xff\xfe", 0, 1, "invalid start byte")

    error = csv_parse_error(decode, "scores.csv")
    assert error.row is None
    assert "not valid utf-8: byte 0xff at offset 0" in str(error)
