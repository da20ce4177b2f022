#!/usr/bin/env python3
"""
Probes for the two failure modes of discrete weighted p-values.

variance_probe
    Fixed data, repeated runs. wedf_rand redraws its U_j each run and its
    rejection count moves; wkde is refitted each run and never moves.
floor_inflation_probe
    Push the largest test score further out. The discrete minimum p-value
    stops at its floor w_j / W_total; the KDE minimum keeps falling.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.typing import ArrayLike

from confshift.core.constants import DEFAULT_ALPHA, Pruning
from confshift.core.seeding import check_seed, derive_seed, make_rng
from confshift.evaluation.calibration import coefficient_of_variation
from confshift.pvalues.conformal import discrete_pvalues, tail_masses
from confshift.pvalues.kde import fit_weighted_kde, kde_pvalue_batch
from confshift.selection.wcs import wcs


@dataclass(frozen=True, eq=False)
class VarianceProbe:
    wedf_rand_counts: np.ndarray
    wkde_counts: np.ndarray

    def coefficients_of_variation(self) -> dict[str, float]:
        return {
            "wedf_rand": coefficient_of_variation(self.wedf_rand_counts),
            "wkde": coefficient_of_variation(self.wkde_counts),
        }


@dataclass(frozen=True)
class FloorProbe:
    kde_min_before: float
    kde_min_after: float
    discrete_min_before: float
    discrete_min_after: float
    discrete_floor: float


def variance_probe(
    calib_scores: ArrayLike,
    calib_weights: Optional[ArrayLike],
    test_scores: ArrayLike,
    test_weights: Optional[ArrayLike],
    alpha: float = DEFAULT_ALPHA,
    n_draws: int = 100,
    seed: int = 0,
    pruning: Pruning | str = Pruning.HOMOGENEOUS,
) -> VarianceProbe:
    """WCS rejection counts of wedf_rand and wkde over ``n_draws`` reruns.

    Run d draws its U_j from derive_seed(seed, d) and its pruning offset from
    derive_seed(seed, d, 1).
    """
    seed = check_seed(seed)
    masses = tail_masses(calib_scores, calib_weights, test_scores, test_weights)
    wedf_counts = np.empty(n_draws, dtype=np.int64)
    wkde_counts = np.empty(n_draws, dtype=np.int64)
    for draw in range(n_draws):
        u = make_rng(derive_seed(seed, draw)).random(masses.strict.size)
        prune_seed = derive_seed(seed, draw, 1)
        wedf_counts[draw] = wcs(
            masses.randomized(u), alpha, pruning, prune_seed
        ).n_rejected

        kde = fit_weighted_kde(calib_scores, calib_weights)
        wkde_counts[draw] = wcs(
            kde_pvalue_batch(kde, test_scores), alpha, pruning, prune_seed
        ).n_rejected
    return VarianceProbe(wedf_rand_counts=wedf_counts, wkde_counts=wkde_counts)


def floor_inflation_probe(
    calib_scores: ArrayLike,
    calib_weights: Optional[ArrayLike],
    test_scores: ArrayLike,
    test_weights: Optional[ArrayLike] = None,
    inflation: float = 10.0,
) -> FloorProbe:
    """Minimum p-values before and after moving the top test score out.

    The top test score is raised by ``inflation`` times the calibration score
    range (at least 1) above the larger of the two maxima.
    """
    calib = np.asarray(calib_scores, dtype=np.float64)
    test = np.asarray(test_scores, dtype=np.float64).copy()
    kde = fit_weighted_kde(calib, calib_weights)

    def minima(scores: np.ndarray) -> tuple[float, float]:
        kde_min = float(kde_pvalue_batch(kde, scores).values.min())
        discrete = discrete_pvalues(calib, calib_weights, scores, test_weights)
        return kde_min, float(discrete.values.min())

    kde_before, discrete_before = minima(test)
    top = int(np.argmax(test))
    span = max(1.0, float(calib.max() - calib.min()))
    test[top] = max(test.max(), calib.max()) + inflation * span
    kde_after, discrete_after = minima(test)

    w_top = 1.0 if test_weights is None else float(np.asarray(test_weights)[top])
    w_calib = (
        float(calib.size) if calib_weights is None else float(np.sum(calib_weights))
    )
    return FloorProbe(
        kde_min_before=kde_before,
        kde_min_after=kde_after,
        discrete_min_before=discrete_before,
        discrete_min_after=discrete_after,
        discrete_floor=w_top / (w_calib + w_top),
    )
