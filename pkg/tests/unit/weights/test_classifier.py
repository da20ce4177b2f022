#!/usr/bin/env python3
"""
Unit tests for confshift.weights.classifier.
"""

import numpy as np
import pytest

from confshift.core.constants import P_MIN
from confshift.core.result import ConfigurationError
from confshift.weights.classifier import (
    ClassifierKind,
    estimate_weights,
    estimate_weights_single,
    fit_probabilistic_classifier,
    odds_weight,
)


@pytest.fixture
def shifted_pools(rng):
    return rng.normal(size=(150, 1)), rng.normal(loc=1.5, size=(150, 1))


def test_odds_weight_formula():
    np.testing.assert_allclose(odds_weight([0.5, 0.75], prior_ratio=2.0), [2.0, 6.0])


def test_odds_weight_clamps_probabilities():
    weights = odds_weight([0.0, 1.0])

    assert weights[0] == pytest.approx(P_MIN / (1 - P_MIN))
    assert np.isfinite(weights).all()


def test_odds_weight_rejects_nonpositive_prior():
    with pytest.raises(ConfigurationError):
        odds_weight([0.5], prior_ratio=0.0)


def test_logistic_weights_grow_toward_test_domain(shifted_pools):
    calib, test = shifted_pools
    model = fit_probabilistic_classifier(calib, test, kind="logistic", seed=0)

    weights = estimate_weights(model, np.array([[-2.0], [0.0], [3.0]]))
    assert model.kind is ClassifierKind.LOGISTIC
    assert model.prior_ratio == 1.0
    assert weights[0] < weights[1] < weights[2]


def test_forest_is_reproducible(shifted_pools):
    calib, test = shifted_pools
    first = fit_probabilistic_classifier(calib, test, kind="forest", seed=4)
    second = fit_probabilistic_classifier(calib, test, kind="forest", seed=4)

    np.testing.assert_array_equal(
        estimate_weights(first, calib), estimate_weights(second, calib)
    )


def test_single_point_matches_batch(shifted_pools):
    calib, test = shifted_pools
    model = fit_probabilistic_classifier(calib, test, kind="logistic", seed=0)

    batch = estimate_weights(model, np.array([[0.7]]), prior_ratio=1.0)
    assert estimate_weights_single(model, [0.7], prior_ratio=1.0) == pytest.approx(
        batch[0]
    )


def test_prior_ratio_from_pool_sizes(rng):
    model = fit_probabilistic_classifier(
        rng.normal(size=(40, 2)), rng.normal(size=(20, 2)), kind="logistic"
    )
    assert model.prior_ratio == 2.0


def test_identical_pools_recover_class_prior(rng):
    calib, test = rng.normal(size=(200, 2)), rng.normal(size=(100, 2))
    model = fit_probabilistic_classifier(calib, test, kind="logistic", seed=0)

    proba = model.predict_proba(np.vstack([calib, test]))
    assert proba.mean() == pytest.approx(1 / 3, abs=0.005)
    # prior_ratio 2 times odds 1/2: weights sit near 1.
    assert np.median(estimate_weights(model, calib)) == pytest.approx(1.0, abs=0.1)


def test_separated_pools_hit_probability_clamp(rng):
    calib = rng.normal(scale=0.5, size=(60, 1))
    test = rng.normal(loc=10.0, scale=0.5, size=(60, 1))
    model = fit_probabilistic_classifier(calib, test, kind="forest", seed=2)

    np.testing.assert_allclose(estimate_weights(model, calib), P_MIN / (1 - P_MIN))
    np.testing.assert_allclose(estimate_weights(model, test), (1 - P_MIN) / P_MIN)


def test_constant_features_give_unit_weights():
    calib, test = np.full((40, 2), 3.0), np.full((20, 2), 3.0)
    model = fit_probabilistic_classifier(calib, test, kind="logistic", seed=0)

    np.testing.assert_allclose(model.predict_proba(calib), 1 / 3, atol=1e-3)
    np.testing.assert_allclose(estimate_weights(model, test), 1.0, atol=1e-2)


@pytest.mark.parametrize(
    "calib, test, kind",
    [
        (np.zeros((0, 2)), np.ones((3, 2)), "logistic"),
        (np.zeros((3, 2)), np.ones((3, 3)), "logistic"),
        (np.zeros((3, 2)), np.ones((3, 2)), "svm"),
    ],
)
def test_invalid_inputs(calib, test, kind):
    with pytest.raises(ConfigurationError):
        fit_probabilistic_classifier(calib, test, kind=kind)
