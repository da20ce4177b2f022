#!/usr/bin/env python3
"""
Benjamini-Hochberg step-up procedure.

    k = max{ r : p_(r) <= alpha * r / m }      (k = 0 if no such r)
    reject every j with p_j <= alpha * k / m

Boundaries are inclusive. With k >= 1 the rejection set has exactly k
members and satisfies p_j <= alpha * |R| / m for every j in R.
"""

import numpy as np
from numpy.typing import ArrayLike

from confshift.core.logging import get_logger
from confshift.pvalues.vector import PValueVector
from confshift.selection.report import (
    DecisionReport,
    Procedure,
    check_alpha,
    pvalue_array,
)

logger = get_logger(__name__)


def step_up_thresholds(m: int, alpha: float) -> np.ndarray:
    """alpha * r / m for r = 1..m."""
    return alpha * np.arange(1, m + 1) / m


def self_consistent_count(values: np.ndarray, alpha: float) -> int:
    """Largest r with at least r p-values at or below alpha * r / m."""
    m = values.size
    if m == 0:
        return 0
    thresholds = step_up_thresholds(m, alpha)
    counts = np.searchsorted(np.sort(values), thresholds, side="right")
    supported = np.flatnonzero(counts >= np.arange(1, m + 1))
    return int(supported[-1] + 1) if supported.size else 0


def benjamini_hochberg(p: PValueVector | ArrayLike, alpha: float) -> DecisionReport:
    """Run BH at level ``alpha``.

    Raises:
        ConfigurationError: alpha outside (0, 1)
    """
    alpha = check_alpha(alpha)
    values = pvalue_array(p)
    m = values.size
    k = self_consistent_count(values, alpha)
    threshold = float(step_up_thresholds(m, alpha)[k - 1]) if k else 0.0
    rejected = np.flatnonzero(values <= threshold) if k else np.array([], dtype=int)
    logger.debug("BH at alpha=%.3g: %d of %d rejected", alpha, rejected.size, m)
    return DecisionReport(
        rejected=tuple(rejected.tolist()),
        procedure=Procedure.BH,
        alpha=alpha,
        threshold=threshold,
        m=m,
    )
