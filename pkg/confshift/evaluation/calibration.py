#!/usr/bin/env python3
"""
Distributional checks on null p-values and rejection counts.

USAGE:
======
    from confshift.evaluation.calibration import superuniformity_curve, sup_deviation

    curve = superuniformity_curve(null_pvalues, uniform_grid())
    curve.to_frame().to_csv("curve.csv", index=False)
    print(sup_deviation(null_pvalues))
"""

from typing import NamedTuple, Optional

import numpy as np
import pandas as pd
from numpy.typing import ArrayLike
from scipy.stats import kstest

from confshift.core.result import ConfigurationError, DomainError


class SuperUniformityCurve(NamedTuple):
    u: np.ndarray
    ecdf: np.ndarray

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"u": self.u, "ecdf": self.ecdf})


class KsResult(NamedTuple):
    statistic: float
    pvalue: float


def uniform_grid(size: int = 99) -> np.ndarray:
    """``size`` equally spaced points strictly inside (0, 1): 0.01..0.99 for 99."""
    return np.arange(1, size + 1) / (size + 1)


def _null_pvalues(pvalues: ArrayLike) -> np.ndarray:
    values = np.asarray(pvalues, dtype=np.float64).reshape(-1)
    if values.size == 0:
        raise DomainError("need at least one p-value")
    if np.isnan(values).any() or (values < 0).any() or (values > 1).any():
        raise DomainError("p-values must lie in [0, 1]")
    return values


def superuniformity_curve(
    pvalues_null: ArrayLike, grid: Optional[ArrayLike] = None
) -> SuperUniformityCurve:
    """Empirical P(p <= u) at each grid point.

    Raises:
        ConfigurationError: a grid point outside (0, 1)
    """
    values = np.sort(_null_pvalues(pvalues_null))
    u = uniform_grid() if grid is None else np.asarray(grid, dtype=np.float64)
    if (u <= 0).any() or (u >= 1).any():
        raise ConfigurationError("grid points must lie strictly inside (0, 1)")
    ecdf = np.searchsorted(values, u, side="right") / values.size
    return SuperUniformityCurve(u=u, ecdf=ecdf)


def sup_deviation(pvalues_null: ArrayLike, grid: Optional[ArrayLike] = None) -> float:
    """max_u |P(p <= u) - u| over the grid."""
    curve = superuniformity_curve(pvalues_null, grid)
    return float(np.max(np.abs(curve.ecdf - curve.u)))


def max_excess(pvalues_null: ArrayLike, grid: Optional[ArrayLike] = None) -> float:
    """max_u (P(p <= u) - u); positive values violate super-uniformity."""
    curve = superuniformity_curve(pvalues_null, grid)
    return float(np.max(curve.ecdf - curve.u))


def binomial_band(u: ArrayLike, n: int, n_se: float = 3.0) -> np.ndarray:
    """u + n_se * sqrt(u (1 - u) / n), the tolerance for an ECDF of n draws."""
    u = np.asarray(u, dtype=np.float64)
    return u + n_se * np.sqrt(u * (1.0 - u) / n)


def ks_uniform(pvalues: ArrayLike) -> KsResult:
    """Kolmogorov-Smirnov test of p-values against Unif[0, 1]."""
    result = kstest(_null_pvalues(pvalues), "uniform")
    return KsResult(statistic=float(result.statistic), pvalue=float(result.pvalue))


def coefficient_of_variation(counts: ArrayLike) -> float:
    """Sample sd (ddof=1) over mean; 0 when every count is equal."""
    values = np.asarray(counts, dtype=np.float64).reshape(-1)
    if values.size < 2:
        raise DomainError("coefficient of variation needs at least 2 values")
    sd = float(values.std(ddof=1))
    if sd == 0.0:
        return 0.0
    mean = float(values.mean())
    if mean == 0.0:
        raise DomainError("coefficient of variation is undefined for zero mean")
    return sd / abs(mean)
