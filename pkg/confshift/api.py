#!/usr/bin/env python3
"""Pure, side-effect-free detection API for confshift.

FEATURE SET:
============
1. estimate_weights - Bagged, winsorized importance weights for two feature
   matrices
2. detect_anomalies - Scores in, p-values and a rejection set out

USAGE:
======
    from confshift.api import detect_anomalies, estimate_weights

    profile = estimate_weights(calib_features, test_features, seed=7)
    detection = detect_anomalies(
        calib_scores,
        test_scores,
        calib_weights=profile.calib_weights,
        test_weights=profile.test_weights,
        method="kde",
        alpha=0.1,
    )
    print(detection.report.rejected)

NOTES:
======
- No printing, no argparse, and no sys.exit
- Errors surface as ConfshiftError subclasses; callers map them to exit codes
"""

from dataclasses import dataclass
from typing import Optional

from numpy.typing import ArrayLike

from confshift.core.constants import DEFAULT_ALPHA, DEFAULT_GAMMA, DEFAULT_N_BOOTSTRAP
from confshift.core.result import ConfigurationError
from confshift.pvalues.conformal import discrete_pvalues, randomized_pvalues
from confshift.pvalues.kde import WeightedKde, fit_weighted_kde, kde_pvalue_batch
from confshift.pvalues.vector import PValueMethod, PValueVector
from confshift.scoring.features import as_feature_matrix, fit_standardizer
from confshift.selection.bh import benjamini_hochberg
from confshift.selection.report import DecisionReport
from confshift.selection.wcs import parse_pruning, wcs
from confshift.weights.bagging import bagged_weights
from confshift.weights.classifier import ClassifierKind
from confshift.weights.profile import WeightProfile


@dataclass(frozen=True)
class Detection:
    """p-values of a test batch and the resulting decisions."""

    pvalues: PValueVector
    report: DecisionReport
    kde: Optional[WeightedKde] = None


def estimate_weights(
    calib: ArrayLike,
    test: ArrayLike,
    *,
    standardize: bool = False,
    n_bootstrap: int = DEFAULT_N_BOOTSTRAP,
    gamma: float = DEFAULT_GAMMA,
    classifier: ClassifierKind | str = ClassifierKind.FOREST,
    seed: int = 0,
    n_jobs: Optional[int] = None,
) -> WeightProfile:
    """Importance weights dQ/dP for calibration and test rows.

    With ``standardize`` both matrices are z-scored with calibration
    parameters before the classifier sees them.
    """
    calib = as_feature_matrix(calib, name="calib")
    test = as_feature_matrix(test, name="test")
    if standardize:
        if calib.shape[1] != test.shape[1]:
            raise ConfigurationError(
                f"column mismatch: calib has {calib.shape[1]}, "
                f"test has {test.shape[1]}"
            )
        scaler = fit_standardizer(calib)
        calib, test = scaler.transform(calib), scaler.transform(test)
    return bagged_weights(
        calib,
        test,
        n_bootstrap=n_bootstrap,
        gamma=gamma,
        kind=classifier,
        seed=seed,
        n_jobs=n_jobs,
    )


def detect_anomalies(
    calib_scores: ArrayLike,
    test_scores: ArrayLike,
    *,
    calib_weights: Optional[ArrayLike] = None,
    test_weights: Optional[ArrayLike] = None,
    method: PValueMethod | str = PValueMethod.KDE,
    alpha: float = DEFAULT_ALPHA,
    procedure: Optional[str] = None,
    pruning: str = "homogeneous",
    seed: Optional[int] = None,
) -> Detection:
    """Conformal p-values plus BH or WCS decisions.

    Args:
        calib_scores: Calibration anomaly scores (inliers)
        test_scores: Test anomaly scores
        calib_weights: Calibration importance weights (unit when None)
        test_weights: Test importance weights (unit when None)
        method: discrete, randomized or kde
        alpha: Target FDR level
        procedure: "bh" or "wcs"; by default WCS when weights are given,
            BH otherwise
        pruning: WCS pruning strategy
        seed: Required for randomized p-values and randomized pruning

    Raises:
        ConfigurationError: unknown method or procedure, missing seed
    """
    try:
        method = PValueMethod(method)
    except ValueError as error:
        raise ConfigurationError(f"unknown p-value method {method!r}") from error

    if (calib_weights is None) != (test_weights is None):
        raise ConfigurationError("give both calib_weights and test_weights, or neither")
    weighted = calib_weights is not None
    if procedure is None:
        procedure = "wcs" if weighted else "bh"
    if procedure not in ("bh", "wcs"):
        raise ConfigurationError(f"unknown procedure {procedure!r} (use bh or wcs)")

    kde = None
    if method is PValueMethod.KDE:
        kde = fit_weighted_kde(calib_scores, calib_weights)
        pvalues = kde_pvalue_batch(kde, test_scores)
    elif method is PValueMethod.RANDOMIZED:
        if seed is None:
            raise ConfigurationError("randomized p-values require a seed")
        pvalues = randomized_pvalues(
            calib_scores, calib_weights, test_scores, test_weights, seed=seed
        )
    else:
        pvalues = discrete_pvalues(
            calib_scores, calib_weights, test_scores, test_weights
        )

    if procedure == "bh":
        report = benjamini_hochberg(pvalues, alpha)
    else:
        report = wcs(pvalues, alpha, parse_pruning(pruning), seed)
    return Detection(pvalues=pvalues, report=report, kde=kde)
