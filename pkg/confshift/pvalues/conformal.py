#!/usr/bin/env python3
"""
Weighted conformal p-values from the weighted empirical distribution.

FEATURE SET:
============
1. discrete_pvalue: (sum_i w_i 1[s_i >= s_j] + w_j) / (sum_i w_i + w_j)
2. randomized_pvalue: strict exceedance mass plus u times the tied mass
   (test point weight included), over the same total
3. Batch versions over a whole test set (sorted suffix sums, no n x m matrix)
4. tail_diagnostics: floor, interval width, conditional variance and the
   detectability ratio of a single test point

USAGE:
======
    from confshift.pvalues.conformal import discrete_pvalues, tail_diagnostics

    pv = discrete_pvalues(calib_scores, calib_w, test_scores, test_w)
    diag = tail_diagnostics(calib_scores, calib_w, s_j, w_j, m=200, alpha=0.1,
                            r_set=[1, 5, 10])

NOTES:
======
- Only right-tail scores are supported: larger score = more anomalous
- Ties use exact floating-point equality. Scores that differ by one ulp are
  not tied, and the width of the randomized interval reflects that
- The smallest attainable discrete p-value is w_j / W_total, reached when s_j
  exceeds every calibration score; this is exact, not rounded
"""

from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np
from numpy.typing import ArrayLike

from confshift.core.result import ConfigurationError, DomainError
from confshift.core.seeding import check_seed, make_rng
from confshift.pvalues.vector import PValueMethod, PValueVector


@dataclass(frozen=True)
class TailDiagnostics:
    """Failure-mode diagnostics of one test point.

    Attributes:
        floor: w_j / W_total, the minimum attainable discrete p-value
        width: (w_j + tied calibration mass) / W_total, the length of the
            interval the randomized p-value sweeps over u
        cond_variance: width^2 / 12, the variance of the randomized p-value
            given the data
        detectability: putative rejection count r -> floor / ((r / m) * alpha);
            a ratio above 1 means the point cannot clear that BH cutoff
    """

    floor: float
    width: float
    cond_variance: float
    detectability: dict[int, float] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "floor": self.floor,
            "width": self.width,
            "cond_variance": self.cond_variance,
            "detectability": {str(r): d for r, d in self.detectability.items()},
        }


# =============================================================================
# Single test point
# =============================================================================


def discrete_pvalue(
    calib_scores: ArrayLike,
    calib_weights: Optional[ArrayLike],
    s_j: float,
    w_j: float = 1.0,
) -> float:
    """Deterministic weighted conformal p-value of one test score.

    Ties count as exceedances (``>=``). With unit weights this is the classic
    (#{i : s_i >= s_j} + 1) / (N + 1).

    Raises:
        DomainError: empty calibration set, non-finite scores, nonpositive
            or non-finite weights
    """
    scores, weights = _calibration(calib_scores, calib_weights)
    s_j, w_j = _test_point(s_j, w_j)
    exceed = np.sum(weights[scores >= s_j])
    return float((exceed + w_j) / (np.sum(weights) + w_j))


def randomized_pvalue(
    calib_scores: ArrayLike,
    calib_weights: Optional[ArrayLike],
    s_j: float,
    w_j: float,
    u: float,
) -> float:
    """Randomized weighted conformal p-value for an explicit ``u`` in [0, 1].

    ``u = 1`` recovers :func:`discrete_pvalue` up to rounding.

    Raises:
        DomainError: u outside [0, 1], plus everything discrete_pvalue raises
    """
    _check_u(u)
    scores, weights = _calibration(calib_scores, calib_weights)
    s_j, w_j = _test_point(s_j, w_j)
    strict = np.sum(weights[scores > s_j])
    tied = w_j + np.sum(weights[scores == s_j])
    return float((strict + u * tied) / (np.sum(weights) + w_j))


def tail_diagnostics(
    calib_scores: ArrayLike,
    calib_weights: Optional[ArrayLike],
    s_j: float,
    w_j: float,
    m: int,
    alpha: float,
    r_set: Iterable[int],
) -> TailDiagnostics:
    """Floor, width, conditional variance and detectability of one test point.

    Raises:
        ConfigurationError: alpha outside (0, 1), m < 1, or r outside [1, m]
    """
    if not 0.0 < alpha < 1.0:
        raise ConfigurationError(f"alpha must be in (0, 1), got {alpha}")
    if m < 1:
        raise ConfigurationError(f"m must be >= 1, got {m}")
    r_values = sorted({int(r) for r in r_set})
    out_of_range = [r for r in r_values if not 1 <= r <= m]
    if out_of_range:
        raise ConfigurationError(f"putative counts {out_of_range} not in [1, {m}]")

    scores, weights = _calibration(calib_scores, calib_weights)
    s_j, w_j = _test_point(s_j, w_j)
    total = np.sum(weights) + w_j
    floor = float(w_j / total)
    width = float((w_j + np.sum(weights[scores == s_j])) / total)
    return TailDiagnostics(
        floor=floor,
        width=width,
        cond_variance=width**2 / 12.0,
        detectability={r: floor / ((r / m) * alpha) for r in r_values},
    )


# =============================================================================
# Test batches
# =============================================================================


@dataclass(frozen=True, eq=False)
class TailMasses:
    """Per-test-point weighted masses shared by both EDF constructions.

    Attributes:
        strict: sum of calibration weights with s_i > s_j
        tied: w_j plus calibration weights with s_i == s_j
        total: sum of all calibration weights plus w_j
        own: the test weights w_j
    """

    strict: np.ndarray
    tied: np.ndarray
    total: np.ndarray
    own: np.ndarray

    def discrete(self) -> np.ndarray:
        return (self.strict + self.tied) / self.total

    def randomized(self, u: ArrayLike) -> np.ndarray:
        u = np.asarray(u, dtype=np.float64)
        if u.shape != self.strict.shape:
            raise DomainError(f"need {self.strict.size} u draws, got {u.size}")
        if (u < 0).any() or (u > 1).any() or np.isnan(u).any():
            raise DomainError("u must lie in [0, 1]")
        return np.clip((self.strict + u * self.tied) / self.total, 0.0, 1.0)

    def floors(self) -> np.ndarray:
        return self.own / self.total


def tail_masses(
    calib_scores: ArrayLike,
    calib_weights: Optional[ArrayLike],
    test_scores: ArrayLike,
    test_weights: Optional[ArrayLike] = None,
) -> TailMasses:
    """Strict, tied and total weighted masses for every test score."""
    scores, weights = _calibration(calib_scores, calib_weights)
    test = _finite(test_scores, "test_scores")
    test_w = _test_weights(test_weights, test.size)

    order = np.argsort(scores, kind="stable")
    sorted_scores = scores[order]
    # suffix[k] = weight of sorted_scores[k:]; suffix[n] is exactly 0.
    suffix = np.append(np.cumsum(weights[order][::-1])[::-1], 0.0)
    at_least = suffix[np.searchsorted(sorted_scores, test, side="left")]
    above = suffix[np.searchsorted(sorted_scores, test, side="right")]

    return TailMasses(
        strict=above,
        tied=test_w + (at_least - above),
        total=np.sum(weights) + test_w,
        own=test_w,
    )


def discrete_pvalues(
    calib_scores: ArrayLike,
    calib_weights: Optional[ArrayLike],
    test_scores: ArrayLike,
    test_weights: Optional[ArrayLike] = None,
) -> PValueVector:
    """:func:`discrete_pvalue` for every test score (unit weights when None)."""
    masses = tail_masses(calib_scores, calib_weights, test_scores, test_weights)
    values = np.clip(masses.discrete(), 0.0, 1.0)
    return PValueVector(values=values, method=PValueMethod.DISCRETE)


def randomized_pvalues(
    calib_scores: ArrayLike,
    calib_weights: Optional[ArrayLike],
    test_scores: ArrayLike,
    test_weights: Optional[ArrayLike] = None,
    *,
    seed: int,
) -> PValueVector:
    """Randomized p-values with one U(0, 1) draw per test point from ``seed``."""
    seed = check_seed(seed)
    masses = tail_masses(calib_scores, calib_weights, test_scores, test_weights)
    u = make_rng(seed).random(masses.strict.size)
    return PValueVector(
        values=masses.randomized(u), method=PValueMethod.RANDOMIZED, seed=seed
    )


def floor_values(calib_weights: ArrayLike, test_weights: ArrayLike) -> np.ndarray:
    """w_j / (sum_i w_i + w_j) for every test point."""
    calib = _positive(calib_weights, "calib_weights")
    test = _positive(test_weights, "test_weights")
    if calib.size == 0:
        raise DomainError("calibration set is empty")
    return test / (np.sum(calib) + test)


# =============================================================================
# Input checks
# =============================================================================


def _finite(values: ArrayLike, name: str) -> np.ndarray:
    array = np.asarray(values, dtype=np.float64).reshape(-1)
    if not np.isfinite(array).all():
        raise DomainError(f"{name} must be finite")
    return array


def _positive(values: ArrayLike, name: str) -> np.ndarray:
    array = np.asarray(values, dtype=np.float64).reshape(-1)
    if not np.isfinite(array).all() or (array <= 0).any():
        raise DomainError(f"{name} must be finite and strictly positive")
    return array


def _calibration(
    scores: ArrayLike, weights: Optional[ArrayLike]
) -> tuple[np.ndarray, np.ndarray]:
    scores = _finite(scores, "calib_scores")
    if scores.size == 0:
        raise DomainError("calibration set is empty")
    if weights is None:
        return scores, np.ones_like(scores)
    weights = _positive(weights, "calib_weights")
    if weights.shape != scores.shape:
        raise DomainError(
            f"calib_weights has length {weights.size}, "
            f"calib_scores has length {scores.size}"
        )
    return scores, weights


def _test_weights(weights: Optional[ArrayLike], size: int) -> np.ndarray:
    if weights is None:
        return np.ones(size)
    weights = _positive(weights, "test_weights")
    if weights.size != size:
        raise DomainError(
            f"test_weights has length {weights.size}, test_scores has length {size}"
        )
    return weights


def _test_point(s_j: float, w_j: float) -> tuple[float, float]:
    if not np.isfinite(s_j):
        raise DomainError(f"test score must be finite, got {s_j}")
    if not np.isfinite(w_j) or w_j <= 0:
        raise DomainError(f"test weight must be finite and positive, got {w_j}")
    return float(s_j), float(w_j)


def _check_u(u: float) -> None:
    if not 0.0 <= u <= 1.0:
        raise DomainError(f"u must lie in [0, 1], got {u}")
