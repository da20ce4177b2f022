#!/usr/bin/env python3
"""
Unit tests for confshift.simulation.probes.
"""

import numpy as np
import pytest

from confshift.simulation.probes import floor_inflation_probe, variance_probe


def test_floor_inflation(calib_scores):
    probe = floor_inflation_probe(calib_scores, None, np.array([5.0, 8.0]))

    assert probe.discrete_floor == pytest.approx(1 / 11)
    assert probe.discrete_min_before == pytest.approx(4 / 11)
    assert probe.discrete_min_after == pytest.approx(1 / 11)
    assert probe.kde_min_after < probe.kde_min_before
    assert probe.kde_min_after < probe.discrete_floor


def test_floor_follows_test_weight(calib_scores):
    probe = floor_inflation_probe(
        calib_scores, np.ones(10), np.array([5.0, 8.0]), np.array([1.0, 2.0])
    )

    assert probe.discrete_floor == pytest.approx(2 / 12)
    assert probe.discrete_min_after == pytest.approx(2 / 12)


def test_variance_probe_shapes():
    calib = np.arange(1.0, 101.0)
    test = np.concatenate([np.linspace(5.0, 95.0, 16), [150.0, 160.0, 170.0, 180.0]])
    probe = variance_probe(calib, None, test, None, n_draws=8, seed=4)

    assert probe.wedf_rand_counts.shape == (8,)
    assert probe.wkde_counts.shape == (8,)
    assert np.all(probe.wkde_counts == probe.wkde_counts[0])
    assert probe.coefficients_of_variation()["wkde"] == 0.0


def test_variance_probe_is_seeded():
    calib = np.arange(1.0, 51.0)
    test = np.array([10.0, 20.0, 70.0, 80.0])
    first = variance_probe(calib, None, test, None, n_draws=5, seed=2)
    second = variance_probe(calib, None, test, None, n_draws=5, seed=2)

    np.testing.assert_array_equal(first.wedf_rand_counts, second.wedf_rand_counts)
