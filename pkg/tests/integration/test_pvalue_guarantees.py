#!/usr/bin/env python3
"""
Monte Carlo checks of the conformal and KDE p-value guarantees.

Each test draws its own seeded randomness, so results are reproducible; run
them with ``pytest -m slow``.
"""

import numpy as np
import pytest

from confshift.evaluation.calibration import (
    binomial_band,
    ks_uniform,
    superuniformity_curve,
    sup_deviation,
    uniform_grid,
)
from confshift.pvalues.conformal import (
    discrete_pvalue,
    randomized_pvalue,
    tail_diagnostics,
    tail_masses,
)
from confshift.pvalues.kde import fit_weighted_kde, kde_pvalue_batch

pytestmark = pytest.mark.slow


def test_floor_is_exact_above_the_calibration_range():
    rng = np.random.default_rng(101)
    for _ in range(1000):
        n = int(rng.integers(1, 50))
        scores = rng.normal(size=n)
        weights = rng.lognormal(sigma=1.0, size=n)
        w_j = float(rng.lognormal())
        s_j = float(scores.max() + rng.exponential() + 1e-9)

        expected = w_j / (np.sum(weights) + w_j)
        observed = discrete_pvalue(scores, weights, s_j, w_j)

        assert abs(observed - expected) <= np.spacing(expected)


def test_randomized_variance_is_width_squared_over_twelve():
    rng = np.random.default_rng(202)
    n_draws = 100_000
    matches = 0
    for _ in range(100):
        n = int(rng.integers(5, 40))
        # Integer scores so the test point can tie with calibration mass.
        scores = rng.integers(0, 10, size=n).astype(float)
        weights = rng.lognormal(sigma=0.5, size=n)
        s_j = float(rng.integers(0, 10))
        w_j = float(rng.lognormal(sigma=0.5))

        masses = tail_masses(
            scores, weights, np.full(n_draws, s_j), np.full(n_draws, w_j)
        )
        draws = masses.randomized(rng.random(n_draws))
        expected = tail_diagnostics(scores, weights, s_j, w_j, 10, 0.1, [1])

        if abs(draws.var(ddof=1) / expected.cond_variance - 1.0) <= 0.02:
            matches += 1

    assert matches >= 99


def test_randomized_sweeps_the_tie_interval():
    scores = np.array([1.0, 2.0, 2.0, 3.0])
    weights = np.array([1.0, 2.0, 0.5, 1.0])
    diagnostics = tail_diagnostics(scores, weights, 2.0, 1.5, 4, 0.1, [1])

    low = randomized_pvalue(scores, weights, 2.0, 1.5, 0.0)
    high = randomized_pvalue(scores, weights, 2.0, 1.5, 1.0)

    assert high - low == pytest.approx(diagnostics.width)
    assert high == pytest.approx(discrete_pvalue(scores, weights, 2.0, 1.5))


def test_unweighted_randomized_pvalues_are_uniform():
    rng = np.random.default_rng(303)
    n_calib, n_points = 9, 2000
    passes = 0
    for _ in range(200):
        calib = rng.normal(size=(n_points, n_calib))
        test = rng.normal(size=n_points)
        u = rng.random(n_points)
        pvalues = [
            randomized_pvalue(calib[k], None, test[k], 1.0, u[k])
            for k in range(n_points)
        ]
        if ks_uniform(pvalues).pvalue > 0.01:
            passes += 1

    assert passes >= 190


def test_discrete_pvalues_with_true_weights_are_super_uniform():
    # Calibration from N(0, 1), test inliers from N(1, 1); dQ/dP = exp(x - 1/2).
    rng = np.random.default_rng(404)
    n_calib, n_reps = 20, 20_000
    pvalues = np.empty(n_reps)
    for k in range(n_reps):
        calib = rng.normal(size=n_calib)
        x_j = float(rng.normal(loc=1.0))
        pvalues[k] = discrete_pvalue(
            calib, np.exp(calib - 0.5), x_j, float(np.exp(x_j - 0.5))
        )

    curve = superuniformity_curve(pvalues, uniform_grid())

    assert np.all(curve.ecdf <= binomial_band(curve.u, n_reps))


def _kde_null_pvalues(n_calib: int, n_reps: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    batches = []
    for _ in range(n_reps):
        kde = fit_weighted_kde(rng.normal(size=n_calib), None)
        batches.append(kde_pvalue_batch(kde, rng.normal(size=200)).values)
    return np.concatenate(batches)


def test_kde_pvalues_approach_uniform_as_calibration_grows():
    deviations = {
        n: sup_deviation(_kde_null_pvalues(n, n_reps, seed=500 + n))
        for n, n_reps in ((50, 200), (200, 100), (800, 40))
    }

    assert deviations[200] <= deviations[50] + 0.01
    assert deviations[800] <= deviations[200] + 0.01
    assert deviations[800] <= 0.03


def test_kde_has_no_floor():
    rng = np.random.default_rng(606)
    kde = fit_weighted_kde(rng.normal(size=100), rng.lognormal(size=100))
    top = float(kde.support_scores.max())

    tail = kde_pvalue_batch(kde, top + kde.bandwidth * np.array([2.0, 5.0, 10.0]))

    assert np.all(np.diff(tail.values) < 0)
    assert tail.values[-1] < 1e-15
