#!/usr/bin/env python3
"""
Weighted kernel density p-values (continuous surrogate of the weighted EDF).

FEATURE SET:
============
1. fit_weighted_kde: Gaussian KDE over calibration scores with normalized
   importance weights
       f(s) = (1 / h) * sum_i v_i * phi((s - s_i) / h),   v_i = w_i / sum_k w_k
2. select_bandwidth_loo: maximize the weighted leave-one-out log-likelihood
       sum_i v_i * log f_{-i}(s_i)
   where f_{-i} drops point i and renormalizes the remaining weights
3. kde_pvalue / kde_pvalue_batch: right-tail mass
       p(s) = sum_i v_i * (1 - Phi((s - s_i) / h))
4. JSON persistence of the fitted model

USAGE:
======
    from confshift.pvalues.kde import fit_weighted_kde, kde_pvalue_batch

    kde = fit_weighted_kde(calib_scores, calib_weights)   # LOO bandwidth
    pv = kde_pvalue_batch(kde, test_scores)

NOTES:
======
- Only calibration weights enter the density; test weights are not used
- The Gaussian kernel has full support, so p(s) > 0 for every s and there
  is no floor: p decreases strictly and goes to 0 as s grows
- h_min = max(1e-6, 1e-4 * score range). With fewer than two distinct
  scores the LOO likelihood is unbounded as h -> 0; the fit then uses h_min
  and sets ``degenerate``
"""

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional

import numpy as np
from joblib import Parallel, delayed
from numpy.typing import ArrayLike
from scipy.special import logsumexp
from scipy.stats import norm

from confshift.core.constants import (
    EVAL_BLOCK,
    GRID_SIZE,
    GRID_SPAN,
    H_MIN_ABS,
    H_MIN_REL,
    SILVERMAN_FACTOR,
)
from confshift.core.logging import get_logger
from confshift.core.result import ConfigurationError, DomainError, ParseError
from confshift.pvalues.vector import PValueMethod, PValueVector
from confshift.weights.diagnostics import effective_sample_size

logger = get_logger(__name__)

GAUSSIAN = "gaussian"
NORM_TOLERANCE = 1e-12


@dataclass(frozen=True, eq=False)
class WeightedKde:
    """A fitted one-dimensional weighted Gaussian KDE."""

    support_scores: np.ndarray
    norm_weights: np.ndarray
    bandwidth: float
    kernel: str = GAUSSIAN
    degenerate: bool = False

    def __post_init__(self) -> None:
        scores = np.asarray(self.support_scores, dtype=np.float64).reshape(-1)
        weights = np.asarray(self.norm_weights, dtype=np.float64).reshape(-1)
        if scores.size == 0:
            raise DomainError("KDE needs at least one support score")
        if weights.shape != scores.shape:
            raise DomainError("support_scores and norm_weights differ in length")
        if not np.isfinite(scores).all():
            raise DomainError("support scores must be finite")
        if not np.isfinite(weights).all() or (weights <= 0).any():
            raise DomainError("KDE weights must be finite and strictly positive")
        if abs(weights.sum() - 1.0) > NORM_TOLERANCE:
            raise DomainError(f"KDE weights sum to {weights.sum()!r}, not 1")
        if not np.isfinite(self.bandwidth) or self.bandwidth <= 0:
            raise DomainError(f"bandwidth must be positive, got {self.bandwidth}")
        if self.kernel != GAUSSIAN:
            raise ConfigurationError(f"unsupported kernel {self.kernel!r}")
        object.__setattr__(self, "support_scores", scores)
        object.__setattr__(self, "norm_weights", weights)
        object.__setattr__(self, "bandwidth", float(self.bandwidth))

    def density(self, scores: ArrayLike) -> np.ndarray:
        """Evaluate f at each score."""
        return self._kernel_sum(scores, norm.pdf) / self.bandwidth

    def survival(self, scores: ArrayLike) -> np.ndarray:
        """Right-tail mass of f beyond each score, clamped to [0, 1]."""
        return np.clip(self._kernel_sum(scores, norm.sf), 0.0, 1.0)

    def _kernel_sum(self, scores: ArrayLike, kernel) -> np.ndarray:
        points = np.asarray(scores, dtype=np.float64).reshape(-1)
        out = np.empty(points.size)
        for start in range(0, points.size, EVAL_BLOCK):
            block = points[start : start + EVAL_BLOCK]
            z = (block[:, None] - self.support_scores[None, :]) / self.bandwidth
            out[start : start + EVAL_BLOCK] = (kernel(z) * self.norm_weights).sum(
                axis=1
            )
        return out

    # -------------------------------------------------------------------------
    # Serialization
    # -------------------------------------------------------------------------

    def to_dict(self) -> dict[str, Any]:
        return {
            "support_scores": self.support_scores.tolist(),
            "norm_weights": self.norm_weights.tolist(),
            "bandwidth": self.bandwidth,
            "kernel": self.kernel,
            "degenerate_flag": self.degenerate,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "WeightedKde":
        try:
            return cls(
                support_scores=np.asarray(data["support_scores"], dtype=np.float64),
                norm_weights=np.asarray(data["norm_weights"], dtype=np.float64),
                bandwidth=float(data["bandwidth"]),
                kernel=data.get("kernel", GAUSSIAN),
                degenerate=bool(data.get("degenerate_flag", False)),
            )
        except KeyError as error:
            raise ParseError(f"KDE model is missing {error.args[0]!r}") from error

    def write_json(self, path: Path | str) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2), encoding="utf-8")

    @classmethod
    def read_json(cls, path: Path | str) -> "WeightedKde":
        path = Path(path)
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as error:
            raise ParseError(f"invalid JSON: {error.msg}", path=path) from error
        return cls.from_dict(data)


@dataclass(frozen=True)
class BandwidthSelection:
    """Result of the leave-one-out bandwidth search.

    ``grid`` is ascending and ``chosen`` is the first (smallest) candidate
    attaining the maximum of ``loo_loglik``.
    """

    chosen: float
    grid: tuple[float, ...]
    loo_loglik: tuple[float, ...]
    degenerate: bool = False


# =============================================================================
# Bandwidth
# =============================================================================


def bandwidth_floor(scores: ArrayLike) -> float:
    """h_min = max(1e-6, 1e-4 * (max score - min score))."""
    s = np.asarray(scores, dtype=np.float64)
    return max(H_MIN_ABS, H_MIN_REL * float(s.max() - s.min()))


def silverman_reference(
    scores: ArrayLike, weights: Optional[ArrayLike] = None
) -> float:
    """1.06 * weighted sd * N_eff^(-1/5)."""
    s, v = _support(scores, weights)
    mean = float(np.sum(v * s))
    sd = float(np.sqrt(np.sum(v * (s - mean) ** 2)))
    return SILVERMAN_FACTOR * sd * effective_sample_size(v) ** (-0.2)


def default_grid(scores: ArrayLike, weights: Optional[ArrayLike] = None) -> np.ndarray:
    """25 log-spaced multiples in [0.1, 10] of the Silverman reference.

    Candidates below h_min are raised to h_min; duplicates are dropped.
    """
    reference = silverman_reference(scores, weights)
    low, high = GRID_SPAN
    grid = reference * np.logspace(np.log10(low), np.log10(high), GRID_SIZE)
    return np.unique(np.maximum(grid, bandwidth_floor(scores)))


def loo_log_likelihood(scores: np.ndarray, norm_weights: np.ndarray, h: float) -> float:
    """Weighted leave-one-out log-likelihood of bandwidth ``h``."""
    n = scores.size
    log_v = np.log(norm_weights)
    total = 0.0
    for start in range(0, n, EVAL_BLOCK):
        rows = np.arange(start, min(start + EVAL_BLOCK, n))
        z = (scores[rows, None] - scores[None, :]) / h
        log_terms = norm.logpdf(z) + log_v[None, :]
        log_terms[np.arange(rows.size), rows] = -np.inf
        # Remaining weights of f_{-i} sum to 1 - v_i.
        log_f = logsumexp(log_terms, axis=1) - np.log(h) - np.log1p(-norm_weights[rows])
        total += float(np.sum(norm_weights[rows] * log_f))
    return total


def select_bandwidth_loo(
    scores: ArrayLike,
    weights: Optional[ArrayLike] = None,
    grid: Optional[ArrayLike] = None,
    n_jobs: int = 1,
) -> BandwidthSelection:
    """Pick the grid bandwidth maximizing the weighted LOO log-likelihood.

    Args:
        scores: Calibration scores
        weights: Positive weights (unit weights when None)
        grid: Candidate bandwidths, each >= h_min (default: :func:`default_grid`)
        n_jobs: Threads evaluating grid candidates

    Raises:
        ConfigurationError: empty grid or a candidate below h_min
    """
    s, v = _support(scores, weights)
    h_min = bandwidth_floor(s)
    if np.unique(s).size < 2:
        logger.warning(
            "Fewer than two distinct calibration scores; "
            "using the bandwidth floor h_min=%.3g",
            h_min,
        )
        return BandwidthSelection(
            chosen=h_min, grid=(h_min,), loo_loglik=(float("inf"),), degenerate=True
        )

    candidates = default_grid(s, v) if grid is None else np.asarray(grid, dtype=float)
    candidates = np.sort(candidates.reshape(-1))
    if candidates.size == 0:
        raise ConfigurationError("bandwidth grid is empty")
    if candidates[0] < h_min:
        raise ConfigurationError(
            f"bandwidth candidate {candidates[0]:.3g} is below h_min={h_min:.3g}"
        )

    loglik = Parallel(n_jobs=n_jobs, prefer="threads")(
        delayed(loo_log_likelihood)(s, v, float(h)) for h in candidates
    )
    best = int(np.argmax(loglik))
    logger.debug(
        "LOO bandwidth %.4g chosen from %d candidates",
        candidates[best],
        candidates.size,
    )
    return BandwidthSelection(
        chosen=float(candidates[best]),
        grid=tuple(float(h) for h in candidates),
        loo_loglik=tuple(float(value) for value in loglik),
    )


# =============================================================================
# Fitting and evaluation
# =============================================================================


def fit_weighted_kde(
    scores: ArrayLike,
    weights: Optional[ArrayLike] = None,
    bandwidth: Optional[float] = None,
    grid: Optional[ArrayLike] = None,
) -> WeightedKde:
    """Fit a weighted Gaussian KDE.

    With ``bandwidth=None`` the bandwidth is chosen by
    :func:`select_bandwidth_loo` over ``grid``.

    Raises:
        DomainError: nonpositive bandwidth, empty or non-finite scores,
            nonpositive weights
    """
    s, v = _support(scores, weights)
    if bandwidth is not None:
        if not np.isfinite(bandwidth) or bandwidth <= 0:
            raise DomainError(f"bandwidth must be positive, got {bandwidth}")
        return WeightedKde(support_scores=s, norm_weights=v, bandwidth=bandwidth)

    selection = select_bandwidth_loo(s, v, grid)
    return WeightedKde(
        support_scores=s,
        norm_weights=v,
        bandwidth=selection.chosen,
        degenerate=selection.degenerate,
    )


def kde_pvalue(kde: WeightedKde, s_j: float) -> float:
    """Right-tail KDE p-value of a single score."""
    return float(kde.survival(np.array([s_j]))[0])


def kde_pvalue_batch(kde: WeightedKde, test_scores: ArrayLike) -> PValueVector:
    """KDE p-values of a test batch; deterministic given the fitted model."""
    scores = np.asarray(test_scores, dtype=np.float64).reshape(-1)
    if not np.isfinite(scores).all():
        raise DomainError("test scores must be finite")
    return PValueVector(values=kde.survival(scores), method=PValueMethod.KDE)


def _support(
    scores: ArrayLike, weights: Optional[ArrayLike]
) -> tuple[np.ndarray, np.ndarray]:
    s = np.asarray(scores, dtype=np.float64).reshape(-1)
    if s.size == 0:
        raise DomainError("KDE needs at least one calibration score")
    if not np.isfinite(s).all():
        raise DomainError("calibration scores must be finite")
    if weights is None:
        return s, np.full(s.size, 1.0 / s.size)
    w = np.asarray(weights, dtype=np.float64).reshape(-1)
    if w.shape != s.shape:
        raise DomainError(
            f"weights has length {w.size}, scores has length {s.size}"
        )
    if not np.isfinite(w).all() or (w <= 0).any():
        raise DomainError("KDE weights must be finite and strictly positive")
    return s, w / w.sum()
