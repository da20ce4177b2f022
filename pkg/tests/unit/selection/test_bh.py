#!/usr/bin/env python3
"""
Unit tests for confshift.selection.bh.
"""

import itertools

import numpy as np
import pytest

from confshift.core.result import ConfigurationError, DomainError
from confshift.pvalues.vector import PValueVector
from confshift.selection.bh import benjamini_hochberg, self_consistent_count
from confshift.selection.report import Procedure


def brute_force_bh(values, alpha):
    m = len(values)
    best = 0
    for r in range(1, m + 1):
        if sum(p <= alpha * r / m for p in values) >= r:
            best = r
    return {j for j, p in enumerate(values) if best and p <= alpha * best / m}


def test_step_up_example():
    report = benjamini_hochberg([0.01, 0.02, 0.03, 0.5], alpha=0.1)

    assert report.rejected == (0, 1, 2)
    assert report.threshold == pytest.approx(0.075)
    assert report.procedure is Procedure.BH
    assert report.m == 4


def test_step_up_passes_over_failed_ranks():
    # Three p-values sit at or below alpha * 3 / m = 0.15; 0.9 misses 0.2.
    report = benjamini_hochberg([0.04, 0.001, 0.9, 0.06], alpha=0.2)

    assert report.rejected == (0, 1, 3)


def test_boundary_is_inclusive():
    assert benjamini_hochberg([0.05], alpha=0.05).rejected == (0,)


def test_no_rejections():
    report = benjamini_hochberg([0.9, 0.8], alpha=0.1)

    assert report.rejected == ()
    assert report.threshold == 0.0


def test_accepts_pvalue_vector():
    vector = PValueVector.from_values([0.001, 0.9], method="kde")

    assert benjamini_hochberg(vector, alpha=0.1).rejected == (0,)


def test_matches_brute_force_on_grid():
    grid = [0.0, 0.05, 0.1, 0.2, 0.5, 1.0]
    for m in range(1, 5):
        for values in itertools.product(grid, repeat=m):
            for alpha in (0.05, 0.2):
                expected = brute_force_bh(values, alpha)
                assert set(benjamini_hochberg(values, alpha).rejected) == expected


def test_rejection_set_is_self_consistent(rng):
    values = rng.uniform(size=50) ** 3
    report = benjamini_hochberg(values, alpha=0.2)

    assert report.n_rejected == self_consistent_count(values, 0.2)
    for j in report.rejected:
        assert values[j] <= 0.2 * report.n_rejected / values.size


@pytest.mark.parametrize("alpha", [0.0, 1.0, -0.1])
def test_alpha_outside_open_interval(alpha):
    with pytest.raises(ConfigurationError):
        benjamini_hochberg([0.1], alpha=alpha)


def test_invalid_pvalues():
    with pytest.raises(DomainError):
        benjamini_hochberg([0.1, 1.5], alpha=0.1)
