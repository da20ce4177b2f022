#!/usr/bin/env python3
"""
Unit tests for confshift.pvalues.conformal.
"""

import numpy as np
import pytest

from confshift.core.result import ConfigurationError, DomainError
from confshift.pvalues.conformal import (
    discrete_pvalue,
    discrete_pvalues,
    floor_values,
    randomized_pvalue,
    randomized_pvalues,
    tail_diagnostics,
    tail_masses,
)
from confshift.pvalues.vector import PValueMethod


class TestDiscrete:
    def test_unit_weights_match_rank_formula(self, calib_scores, test_scores):
        pvalues = discrete_pvalues(calib_scores, None, test_scores)

        np.testing.assert_allclose(pvalues.values, [11 / 11, 7 / 11, 2 / 11, 1 / 11])
        assert pvalues.method is PValueMethod.DISCRETE
        assert pvalues.seed is None

    def test_batch_matches_single_point(self, calib_scores, test_scores, rng):
        calib_w = rng.uniform(0.5, 2.0, calib_scores.size)
        test_w = rng.uniform(0.5, 2.0, test_scores.size)

        batch = discrete_pvalues(calib_scores, calib_w, test_scores, test_w).values
        single = [
            discrete_pvalue(calib_scores, calib_w, s, w)
            for s, w in zip(test_scores, test_w)
        ]
        np.testing.assert_allclose(batch, single)

    def test_floor_is_exact_above_calibration_max(self, calib_scores):
        calib_w = np.full(calib_scores.size, 2.0)

        p = discrete_pvalue(calib_scores, calib_w, s_j=1e9, w_j=1.0)
        assert p == 1.0 / 21.0
        np.testing.assert_allclose(floor_values(calib_w, [1.0]), [1.0 / 21.0])

    def test_common_weight_scale_cancels(self, calib_scores, rng):
        calib_w = rng.uniform(0.5, 2.0, calib_scores.size)

        for s in (0.0, 3.5, 7.0, 12.0):
            base = discrete_pvalue(calib_scores, calib_w, s, 1.5)
            scaled = discrete_pvalue(calib_scores, 7.0 * calib_w, s, 7.0 * 1.5)
            assert scaled == pytest.approx(base)

    def test_nonincreasing_in_test_score(self, calib_scores, rng):
        calib_w = rng.uniform(0.5, 2.0, calib_scores.size)
        grid = np.linspace(-1.0, 12.0, 131)

        pvalues = [discrete_pvalue(calib_scores, calib_w, s, 0.8) for s in grid]
        assert (np.diff(pvalues) <= 0).all()

    def test_ties_count_as_exceedances(self):
        assert discrete_pvalue([1.0, 2.0, 2.0], None, 2.0) == pytest.approx(3 / 4)

    @pytest.mark.parametrize(
        "calib, weights",
        [
            ([], None),
            ([1.0, np.nan], None),
            ([1.0, 2.0], [1.0, 0.0]),
            ([1.0, 2.0], [1.0]),
        ],
    )
    def test_invalid_calibration(self, calib, weights):
        with pytest.raises(DomainError):
            discrete_pvalues(calib, weights, [1.0])

    def test_test_weight_length_mismatch(self, calib_scores):
        with pytest.raises(DomainError, match="test_weights"):
            discrete_pvalues(calib_scores, None, [1.0, 2.0], [1.0])


class TestRandomized:
    def test_u_interpolates_over_tied_mass(self, calib_scores):
        # s = 5: strict mass 5 (scores 6..10), tied mass 1 + 1.
        assert randomized_pvalue(calib_scores, None, 5.0, 1.0, u=0.0) == pytest.approx(
            5 / 11
        )
        assert randomized_pvalue(calib_scores, None, 5.0, 1.0, u=0.5) == pytest.approx(
            6 / 11
        )

    def test_u_one_recovers_discrete(self, calib_scores, test_scores):
        masses = tail_masses(calib_scores, None, test_scores)

        np.testing.assert_allclose(
            masses.randomized(np.ones(test_scores.size)), masses.discrete()
        )

    def test_never_exceeds_discrete(self, calib_scores, test_scores):
        discrete = discrete_pvalues(calib_scores, None, test_scores).values
        randomized = randomized_pvalues(calib_scores, None, test_scores, seed=3).values

        assert (randomized <= discrete + 1e-15).all()

    def test_seed_reproduces_and_is_recorded(self, calib_scores, test_scores):
        first = randomized_pvalues(calib_scores, None, test_scores, seed=8)
        second = randomized_pvalues(calib_scores, None, test_scores, seed=8)

        np.testing.assert_array_equal(first.values, second.values)
        assert first.seed == 8
        assert first.method is PValueMethod.RANDOMIZED

    @pytest.mark.parametrize("u", [-0.1, 1.1])
    def test_u_outside_unit_interval(self, calib_scores, u):
        with pytest.raises(DomainError):
            randomized_pvalue(calib_scores, None, 5.0, 1.0, u=u)

    def test_u_shape_must_match(self, calib_scores, test_scores):
        masses = tail_masses(calib_scores, None, test_scores)
        with pytest.raises(DomainError):
            masses.randomized([0.5])


class TestTailDiagnostics:
    def test_floor_width_and_detectability(self, calib_scores):
        diag = tail_diagnostics(
            calib_scores, None, s_j=5.0, w_j=1.0, m=20, alpha=0.1, r_set=[1, 10]
        )

        assert diag.floor == pytest.approx(1 / 11)
        assert diag.width == pytest.approx(2 / 11)
        assert diag.cond_variance == pytest.approx((2 / 11) ** 2 / 12)
        assert diag.detectability[1] == pytest.approx((1 / 11) / (0.1 / 20))
        assert diag.detectability[10] == pytest.approx((1 / 11) / 0.05)
        assert diag.to_dict()["detectability"]["10"] == diag.detectability[10]

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"m": 10, "alpha": 0.0, "r_set": [1]},
            {"m": 0, "alpha": 0.1, "r_set": []},
            {"m": 10, "alpha": 0.1, "r_set": [11]},
        ],
    )
    def test_invalid_arguments(self, calib_scores, kwargs):
        with pytest.raises(ConfigurationError):
            tail_diagnostics(calib_scores, None, 5.0, 1.0, **kwargs)
