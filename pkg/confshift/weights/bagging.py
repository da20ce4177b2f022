#!/usr/bin/env python3
"""
Stabilized importance weights via balanced bootstrap bagging.

PIPELINE:
=========
1. S = min(|calib|, |test|)
2. For b = 1..B: draw S rows with replacement from each pool, fit the domain
   classifier on that balanced set, evaluate the odds on the FULL pool
   Z = calib + test (not out-of-bag)
3. Aggregate per instance with the geometric mean exp(mean_b log w_b)
4. Winsorize to the empirical [gamma, 1 - gamma] quantiles over Z
   (linear interpolation between order statistics)
5. Split back into calibration and test weights

USAGE:
======
    from confshift.weights.bagging import bagged_weights

    profile = bagged_weights(calib, test, n_bootstrap=10, gamma=0.05, seed=7)
    print(profile.n_eff, profile.clip_lo, profile.clip_hi)

NOTES:
======
- Replica b uses sub-seed derive_seed(seed, b), so results do not depend on
  how joblib schedules the replicas
- A replica that is not exactly balanced gets the prior-ratio correction
  n_calib_b / n_test_b; with equal draws from each pool this factor is 1
"""

from typing import Optional

import numpy as np
from joblib import Parallel, delayed
from numpy.typing import ArrayLike

from confshift.core.constants import DEFAULT_GAMMA, DEFAULT_N_BOOTSTRAP
from confshift.core.logging import get_logger
from confshift.core.result import ConfigurationError, DomainError
from confshift.core.runtime import resolve_n_jobs
from confshift.core.seeding import check_seed, derive_seed, make_rng
from confshift.scoring.features import as_feature_matrix
from confshift.weights.classifier import (
    ClassifierKind,
    estimate_weights,
    fit_probabilistic_classifier,
)
from confshift.weights.profile import WeightProfile

logger = get_logger(__name__)


def geometric_aggregate(log_weights: ArrayLike) -> np.ndarray:
    """Geometric mean over replicas of a (B, n) matrix of log weights."""
    matrix = np.atleast_2d(np.asarray(log_weights, dtype=np.float64))
    if matrix.shape[0] == 1:
        return np.exp(matrix[0])
    return np.exp(matrix.mean(axis=0))


def winsor_bounds(weights: ArrayLike, gamma: float) -> tuple[float, float]:
    """Empirical ``gamma`` and ``1 - gamma`` quantiles (linear interpolation)."""
    _check_gamma(gamma)
    w = np.asarray(weights, dtype=np.float64).reshape(-1)
    if w.size == 0:
        raise DomainError("cannot winsorize an empty weight vector")
    low, high = np.quantile(w, [gamma, 1.0 - gamma], method="linear")
    return float(low), float(high)


def winsorize(weights: ArrayLike, clip_lo: float, clip_hi: float) -> np.ndarray:
    """Clip weights into ``[clip_lo, clip_hi]``; idempotent for fixed bounds."""
    if clip_lo > clip_hi:
        raise DomainError(f"clip_lo {clip_lo} exceeds clip_hi {clip_hi}")
    return np.clip(np.asarray(weights, dtype=np.float64), clip_lo, clip_hi)


def stabilize_weights(
    calib_weights: ArrayLike,
    test_weights: ArrayLike,
    gamma: float,
    *,
    n_bootstrap: int = 0,
    seed: Optional[int] = None,
    source: str = "estimated",
    classifier: Optional[str] = None,
) -> WeightProfile:
    """Winsorize raw calibration and test weights jointly into a profile.

    The clip bounds are quantiles over the pooled weights, so both splits are
    clipped to the same interval.
    """
    calib = np.asarray(calib_weights, dtype=np.float64).reshape(-1)
    test = np.asarray(test_weights, dtype=np.float64).reshape(-1)
    pool = np.concatenate([calib, test])
    if not np.isfinite(pool).all() or (pool <= 0).any():
        raise DomainError("raw weights must be finite and strictly positive")

    clip_lo, clip_hi = winsor_bounds(pool, gamma)
    clipped = winsorize(pool, clip_lo, clip_hi)
    return WeightProfile(
        calib_weights=clipped[: calib.size],
        test_weights=clipped[calib.size :],
        clip_lo=clip_lo,
        clip_hi=clip_hi,
        n_bootstrap=n_bootstrap,
        gamma=gamma,
        seed=seed,
        source=source,
        classifier=classifier,
    )


def bootstrap_log_weights(
    calib: np.ndarray,
    test: np.ndarray,
    kind: ClassifierKind | str,
    replica_seed: int,
) -> np.ndarray:
    """Log odds-weights of one balanced bootstrap replica on the full pool."""
    rng = make_rng(replica_seed)
    size = min(calib.shape[0], test.shape[0])
    calib_rows = calib[rng.integers(0, calib.shape[0], size=size)]
    test_rows = test[rng.integers(0, test.shape[0], size=size)]

    model = fit_probabilistic_classifier(
        calib_rows, test_rows, kind=kind, seed=replica_seed
    )
    pool = np.vstack([calib, test])
    # model.prior_ratio is n_calib_b / n_test_b: 1 for a balanced replica.
    return np.log(estimate_weights(model, pool))


def bagged_weights(
    calib: ArrayLike,
    test: ArrayLike,
    n_bootstrap: int = DEFAULT_N_BOOTSTRAP,
    gamma: float = DEFAULT_GAMMA,
    kind: ClassifierKind | str = ClassifierKind.FOREST,
    seed: int = 0,
    n_jobs: Optional[int] = None,
) -> WeightProfile:
    """Estimate a WeightProfile by balanced bootstrap bagging + winsorization.

    Args:
        calib: Calibration feature matrix (Y=0)
        test: Test feature matrix (Y=1)
        n_bootstrap: Number of replicas B (>= 1)
        gamma: Winsorization level in [0, 0.5)
        kind: "logistic" or "forest"
        seed: Master seed; replica b uses derive_seed(seed, b)
        n_jobs: Worker threads (None = CONFSHIFT_THREADS, 0 = all cores)

    Raises:
        ConfigurationError: B < 1, bad gamma, empty pool, column mismatch
    """
    if n_bootstrap < 1:
        raise ConfigurationError(f"n_bootstrap must be >= 1, got {n_bootstrap}")
    _check_gamma(gamma)
    seed = check_seed(seed)
    calib = as_feature_matrix(calib, name="calib")
    test = as_feature_matrix(test, name="test")
    if calib.shape[0] == 0 or test.shape[0] == 0:
        raise ConfigurationError("calibration and test pools must be nonempty")
    if calib.shape[1] != test.shape[1]:
        raise ConfigurationError(
            f"column mismatch: calib has {calib.shape[1]}, test has {test.shape[1]}"
        )

    logger.debug(
        "Bagging %d %s replicas on %d calibration / %d test rows",
        n_bootstrap,
        kind,
        calib.shape[0],
        test.shape[0],
    )
    jobs = resolve_n_jobs(n_jobs) if n_bootstrap > 1 else 1
    log_weights = Parallel(n_jobs=jobs, prefer="threads")(
        delayed(bootstrap_log_weights)(calib, test, kind, derive_seed(seed, b))
        for b in range(n_bootstrap)
    )

    aggregated = geometric_aggregate(np.vstack(log_weights))
    profile = stabilize_weights(
        aggregated[: calib.shape[0]],
        aggregated[calib.shape[0] :],
        gamma,
        n_bootstrap=n_bootstrap,
        seed=seed,
        source="estimated",
        classifier=str(ClassifierKind(kind)),
    )
    logger.debug(
        "Weights clipped to [%.4g, %.4g]; calibration N_eff=%.2f",
        profile.clip_lo,
        profile.clip_hi,
        profile.n_eff,
    )
    return profile


def _check_gamma(gamma: float) -> None:
    if not 0.0 <= gamma < 0.5:
        raise ConfigurationError(f"gamma must be in [0, 0.5), got {gamma}")
