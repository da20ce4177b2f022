#!/usr/bin/env python3
"""
Unit tests for confshift.core.runtime.
"""

import pytest

from confshift.core.result import ConfigurationError
from confshift.core.runtime import THREADS_ENV, resolve_n_jobs


def test_unset_means_all_cores(monkeypatch):
    monkeypatch.delenv(THREADS_ENV, raising=False)
    assert resolve_n_jobs() == -1


@pytest.mark.parametrize("value, expected", [("0", -1), ("1", 1), (" 4 ", 4)])
def test_environment_value(monkeypatch, value, expected):
    monkeypatch.setenv(THREADS_ENV, value)
    assert resolve_n_jobs() == expected


def test_explicit_overrides_environment(monkeypatch):
    monkeypatch.setenv(THREADS_ENV, "8")
    assert resolve_n_jobs(2) == 2
    assert resolve_n_jobs(0) == -1


def test_invalid_environment_value(monkeypatch):
    monkeypatch.setenv(THREADS_ENV, "many")
    with pytest.raises(ConfigurationError, match=THREADS_ENV):
        resolve_n_jobs()


def test_negative_count_rejected():
    with pytest.raises(ConfigurationError):
        resolve_n_jobs(-2)
