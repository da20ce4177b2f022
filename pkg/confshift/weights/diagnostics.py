#!/usr/bin/env python3
"""Weight-concentration diagnostics (Kish effective sample size)."""

import numpy as np
from numpy.typing import ArrayLike

from confshift.core.result import DomainError


def effective_sample_size(weights: ArrayLike) -> float:
    """Kish effective sample size ``(sum w)^2 / sum w^2``.

    Raises:
        DomainError: negative or non-finite weights, or no positive weight
    """
    w = np.asarray(weights, dtype=np.float64).reshape(-1)
    if not np.isfinite(w).all() or (w < 0).any():
        raise DomainError("weights must be finite and nonnegative")
    if not (w > 0).any():
        raise DomainError("effective sample size needs at least one positive weight")
    # Rescale first so large weights cannot overflow the squares.
    w = w / w.max()
    return float(w.sum() ** 2 / np.square(w).sum())


def max_weight_share(weights: ArrayLike) -> float:
    """Largest normalized weight ``max w / sum w``."""
    w = np.asarray(weights, dtype=np.float64).reshape(-1)
    total = w.sum()
    if total <= 0:
        raise DomainError("weights must have a positive sum")
    return float(w.max() / total)
