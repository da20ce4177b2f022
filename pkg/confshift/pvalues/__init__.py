"""Weighted conformal p-values: discrete, randomized and KDE."""

from .conformal import (
    TailDiagnostics,
    TailMasses,
    discrete_pvalue,
    discrete_pvalues,
    floor_values,
    randomized_pvalue,
    randomized_pvalues,
    tail_diagnostics,
    tail_masses,
)
from .kde import (
    BandwidthSelection,
    WeightedKde,
    bandwidth_floor,
    default_grid,
    fit_weighted_kde,
    kde_pvalue,
    kde_pvalue_batch,
    select_bandwidth_loo,
)
from .vector import PValueMethod, PValueVector

__all__ = [
    "TailDiagnostics",
    "TailMasses",
    "discrete_pvalue",
    "discrete_pvalues",
    "floor_values",
    "randomized_pvalue",
    "randomized_pvalues",
    "tail_diagnostics",
    "tail_masses",
    "BandwidthSelection",
    "WeightedKde",
    "bandwidth_floor",
    "default_grid",
    "fit_weighted_kde",
    "kde_pvalue",
    "kde_pvalue_batch",
    "select_bandwidth_loo",
    "PValueMethod",
    "PValueVector",
]
