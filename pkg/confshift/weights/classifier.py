#!/usr/bin/env python3
"""
Probabilistic domain classifiers for the density-ratio trick.

A classifier is trained to tell calibration rows (Y=0, drawn from P) from
test rows (Y=1, drawn from Q). Its clamped probability p = P(Y=1 | z) turns
into an importance weight through the odds:

    w(z) = prior_ratio * p / (1 - p),   prior_ratio = N_cal / N_test

USAGE:
======
    from confshift.weights.classifier import (
        fit_probabilistic_classifier,
        estimate_weights,
    )

    model = fit_probabilistic_classifier(calib, test, kind="logistic", seed=0)
    calib_w = estimate_weights(model, calib)

NOTES:
======
- Probabilities are clamped to [P_MIN, 1 - P_MIN] so every weight is finite
  and positive
- The forest is small on purpose (25 depth-4 Gini trees); logistic
  regression is the deterministic baseline used by most tests
"""

from dataclasses import dataclass
from enum import StrEnum
from typing import Any

import numpy as np
from numpy.typing import ArrayLike
from sklearn.ensemble import RandomForestClassifier
from sklearn.linear_model import LogisticRegression

from confshift.core.constants import FOREST_MAX_DEPTH, FOREST_N_ESTIMATORS, P_MIN
from confshift.core.result import ConfigurationError
from confshift.core.seeding import check_seed
from confshift.scoring.features import as_feature_matrix


class ClassifierKind(StrEnum):
    """Built-in domain classifiers."""

    LOGISTIC = "logistic"
    FOREST = "forest"


@dataclass(frozen=True, eq=False)
class ClassifierModel:
    """A fitted calibration-vs-test classifier.

    Attributes:
        kind: Which built-in classifier produced the estimator
        estimator: Any object with ``predict_proba`` over classes {0, 1}
        prior_ratio: N_cal / N_test of the training composition
        p_min: Probability clamp
    """

    kind: ClassifierKind
    estimator: Any
    prior_ratio: float
    p_min: float = P_MIN

    def predict_proba(self, features: ArrayLike) -> np.ndarray:
        """Return clamped P(Y=1 | z) for every row."""
        matrix = as_feature_matrix(features, name="features")
        classes = list(getattr(self.estimator, "classes_", [0, 1]))
        proba = np.asarray(self.estimator.predict_proba(matrix), dtype=np.float64)
        if 1 in classes:
            positive = proba[:, classes.index(1)]
        else:
            positive = np.zeros(matrix.shape[0])
        return np.clip(positive, self.p_min, 1.0 - self.p_min)


def make_estimator(kind: ClassifierKind | str, seed: int) -> Any:
    """Return an unfitted scikit-learn classifier for ``kind``."""
    try:
        kind = ClassifierKind(kind)
    except ValueError as error:
        raise ConfigurationError(
            f"unknown classifier {kind!r} (use logistic or forest)"
        ) from error
    if kind is ClassifierKind.LOGISTIC:
        return LogisticRegression(C=1.0, max_iter=1000, random_state=seed)
    return RandomForestClassifier(
        n_estimators=FOREST_N_ESTIMATORS,
        max_depth=FOREST_MAX_DEPTH,
        criterion="gini",
        random_state=seed,
        n_jobs=1,
    )


def fit_probabilistic_classifier(
    calib: ArrayLike,
    test: ArrayLike,
    kind: ClassifierKind | str = ClassifierKind.FOREST,
    seed: int = 0,
) -> ClassifierModel:
    """Fit a classifier separating calibration (Y=0) from test (Y=1) rows.

    Raises:
        ConfigurationError: empty inputs, column mismatch, unknown kind
    """
    calib = as_feature_matrix(calib, name="calib")
    test = as_feature_matrix(test, name="test")
    if calib.shape[0] == 0 or test.shape[0] == 0:
        raise ConfigurationError("calibration and test matrices must be nonempty")
    if calib.shape[1] != test.shape[1]:
        raise ConfigurationError(
            f"column mismatch: calib has {calib.shape[1]}, test has {test.shape[1]}"
        )

    estimator = make_estimator(kind, check_seed(seed))
    features = np.vstack([calib, test])
    labels = np.concatenate(
        [np.zeros(calib.shape[0], dtype=int), np.ones(test.shape[0], dtype=int)]
    )
    estimator.fit(features, labels)
    return ClassifierModel(
        kind=ClassifierKind(kind),
        estimator=estimator,
        prior_ratio=calib.shape[0] / test.shape[0],
    )


def odds_weight(probability: ArrayLike, prior_ratio: float = 1.0) -> np.ndarray:
    """Return ``prior_ratio * p / (1 - p)`` with p clamped to [P_MIN, 1 - P_MIN]."""
    if prior_ratio <= 0:
        raise ConfigurationError(f"prior_ratio must be positive, got {prior_ratio}")
    p = np.clip(np.asarray(probability, dtype=np.float64), P_MIN, 1.0 - P_MIN)
    return prior_ratio * p / (1.0 - p)


def estimate_weights(
    model: ClassifierModel,
    features: ArrayLike,
    prior_ratio: float | None = None,
) -> np.ndarray:
    """Importance weights for every row of ``features``.

    ``prior_ratio`` defaults to the model's training composition.
    """
    ratio = model.prior_ratio if prior_ratio is None else prior_ratio
    return odds_weight(model.predict_proba(features), ratio)


def estimate_weights_single(
    model: ClassifierModel, z: ArrayLike, prior_ratio: float
) -> float:
    """Importance weight of a single feature vector ``z``."""
    row = np.asarray(z, dtype=np.float64).reshape(1, -1)
    return float(estimate_weights(model, row, prior_ratio)[0])
