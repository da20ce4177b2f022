#!/usr/bin/env python3
"""
Synthetic shifted anomaly-detection problems.

DATA MODEL:
===========
Inliers (P)     equal-weight mixture of N(+c e1, I) and N(-c e1, I),
                c = data.mixture_separation
Test inliers    P shifted by the offset v of the [shift] section (Q = P + v)
Anomalies       N(a * u_a, s^2 I) with a = data.anomaly_shift,
                s = data.anomaly_scale, u_a = (1, ..., 1) / sqrt(d);
                test anomalies are shifted by v too

SPLITS:
=======
train        n_train inliers from P                       (scorer fitting)
validation   n_val rows from P, anomalies at rate pi      (phase 1 only)
calibration  n_cal inliers from P
test         n_test rows from Q, Binomial(n_test, pi) anomalies at random
             positions

Every split is standardized with a StandardScaler fitted on train. Oracle
weights are the exact inlier likelihood ratio q(x) / p(x) at the raw
covariates; they are identically 1 without a shift.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp
from scipy.stats import multivariate_normal

from confshift.core.constants import STREAM_DATA
from confshift.core.logging import get_logger
from confshift.core.seeding import derive_seed, make_rng
from confshift.scoring.features import fit_standardizer
from confshift.simulation.spec import ExperimentSpec

logger = get_logger(__name__)

# Clamp on log q/p before exponentiation.
MAX_LOG_RATIO = 700.0


@dataclass(frozen=True, eq=False)
class SyntheticProblem:
    """Standardized splits of one trial plus oracle weights."""

    train: np.ndarray
    validation: np.ndarray
    validation_labels: np.ndarray
    calib: np.ndarray
    test: np.ndarray
    test_labels: np.ndarray
    oracle_calib_weights: np.ndarray
    oracle_test_weights: np.ndarray

    @property
    def n_anomalies(self) -> int:
        return int(self.test_labels.sum())


def component_means(spec: ExperimentSpec) -> np.ndarray:
    """(2, d) means of the inlier mixture."""
    means = np.zeros((2, spec.n_features))
    means[0, 0] = spec.mixture_separation
    means[1, 0] = -spec.mixture_separation
    return means


def anomaly_direction(n_features: int) -> np.ndarray:
    """Unit diagonal; a localization shift moves test mass toward the anomalies."""
    return np.full(n_features, 1.0 / math.sqrt(n_features))


def sample_inliers(
    rng: np.random.Generator, spec: ExperimentSpec, n: int, offset: np.ndarray
) -> np.ndarray:
    means = component_means(spec)
    components = rng.integers(0, 2, size=n)
    noise = rng.standard_normal((n, spec.n_features))
    return means[components] + noise + offset


def sample_anomalies(
    rng: np.random.Generator, spec: ExperimentSpec, n: int, offset: np.ndarray
) -> np.ndarray:
    center = spec.anomaly_shift * anomaly_direction(spec.n_features)
    noise = spec.anomaly_scale * rng.standard_normal((n, spec.n_features))
    return center + noise + offset


def sample_contaminated(
    rng: np.random.Generator, spec: ExperimentSpec, n: int, offset: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """n rows with Binomial(n, pi) anomalies at uniformly random positions."""
    n_anomalies = int(rng.binomial(n, spec.anomaly_rate))
    labels = np.zeros(n, dtype=np.int8)
    labels[rng.permutation(n)[:n_anomalies]] = 1
    rows = np.empty((n, spec.n_features))
    rows[labels == 0] = sample_inliers(rng, spec, n - n_anomalies, offset)
    rows[labels == 1] = sample_anomalies(rng, spec, n_anomalies, offset)
    return rows, labels


def mixture_logpdf(x: np.ndarray, means: np.ndarray) -> np.ndarray:
    """log density of the equal-weight unit-covariance mixture at each row."""
    d = x.shape[1]
    per_component = np.stack(
        [multivariate_normal(mean=mean, cov=np.eye(d)).logpdf(x) for mean in means]
    ).reshape(len(means), -1)
    return logsumexp(per_component, axis=0) - math.log(len(means))


def oracle_weights(x: np.ndarray, spec: ExperimentSpec) -> np.ndarray:
    """True likelihood ratio q(x) / p(x) of shifted versus base inliers."""
    means = component_means(spec)
    offset = spec.shift.offset(spec.n_features)
    log_ratio = mixture_logpdf(x, means + offset) - mixture_logpdf(x, means)
    return np.exp(np.clip(log_ratio, -MAX_LOG_RATIO, MAX_LOG_RATIO))


def generate_problem(spec: ExperimentSpec, seed: int) -> SyntheticProblem:
    """Draw the four splits of one trial from ``seed``.

    The draw order is fixed (train, validation, calibration, test), so the
    same seed gives the same problem for any shift strength.
    """
    rng = make_rng(derive_seed(seed, STREAM_DATA))
    base = np.zeros(spec.n_features)
    offset = spec.shift.offset(spec.n_features)

    train = sample_inliers(rng, spec, spec.n_train, base)
    validation, validation_labels = sample_contaminated(rng, spec, spec.n_val, base)
    calib = sample_inliers(rng, spec, spec.n_cal, base)
    test, test_labels = sample_contaminated(rng, spec, spec.n_test, offset)

    scaler = fit_standardizer(train)
    problem = SyntheticProblem(
        train=scaler.transform(train),
        validation=scaler.transform(validation),
        validation_labels=validation_labels,
        calib=scaler.transform(calib),
        test=scaler.transform(test),
        test_labels=test_labels,
        oracle_calib_weights=oracle_weights(calib, spec),
        oracle_test_weights=oracle_weights(test, spec),
    )
    logger.debug(
        "Generated problem seed=%d: %d/%d test anomalies",
        seed,
        problem.n_anomalies,
        spec.n_test,
    )
    return problem
