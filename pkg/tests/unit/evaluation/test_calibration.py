#!/usr/bin/env python3
"""
Unit tests for confshift.evaluation.calibration.
"""

import numpy as np
import pytest

from confshift.core.result import ConfigurationError, DomainError
from confshift.evaluation.calibration import (
    binomial_band,
    coefficient_of_variation,
    ks_uniform,
    max_excess,
    sup_deviation,
    superuniformity_curve,
    uniform_grid,
)


def test_uniform_grid():
    grid = uniform_grid()

    assert grid.size == 99
    assert grid[0] == pytest.approx(0.01)
    assert grid[-1] == pytest.approx(0.99)


def test_curve_counts_at_or_below():
    curve = superuniformity_curve([0.1, 0.5, 0.9], grid=[0.5])

    np.testing.assert_allclose(curve.ecdf, [2 / 3])
    assert list(curve.to_frame().columns) == ["u", "ecdf"]


def test_deviation_and_excess():
    values = [0.1, 0.5, 0.9]

    assert sup_deviation(values, grid=[0.5]) == pytest.approx(1 / 6)
    assert max_excess(values, grid=[0.5]) == pytest.approx(1 / 6)
    assert max_excess([0.95, 0.99], grid=[0.5]) == pytest.approx(-0.5)


def test_grid_must_be_interior():
    with pytest.raises(ConfigurationError):
        superuniformity_curve([0.5], grid=[0.0, 0.5])


def test_binomial_band():
    assert binomial_band(0.5, 100)[()] == pytest.approx(0.65)


def test_ks_uniform(rng):
    assert ks_uniform(rng.uniform(size=2000)).pvalue > 1e-3
    assert ks_uniform(np.linspace(0.0, 0.1, 200)).pvalue < 1e-6


def test_coefficient_of_variation():
    assert coefficient_of_variation([2, 2, 2]) == 0.0
    assert coefficient_of_variation([1, 3]) == pytest.approx(np.sqrt(2) / 2)


@pytest.mark.parametrize("counts", [[5], [-1, 1]])
def test_coefficient_of_variation_undefined(counts):
    with pytest.raises(DomainError):
        coefficient_of_variation(counts)


def test_invalid_pvalues():
    with pytest.raises(DomainError):
        sup_deviation([])
