"""FDP, power, validity rule, detector-selection metrics and null checks."""

from .calibration import (
    KsResult,
    SuperUniformityCurve,
    binomial_band,
    coefficient_of_variation,
    ks_uniform,
    max_excess,
    sup_deviation,
    superuniformity_curve,
    uniform_grid,
)
from .metrics import (
    ClassificationMetrics,
    TrialMetrics,
    classification_metrics,
    fdp,
    lexicographic_select,
    power,
    roc_auc,
    trial_metrics,
)
from .validity import ValiditySummary, t_quantile, validity

__all__ = [
    "KsResult",
    "SuperUniformityCurve",
    "binomial_band",
    "coefficient_of_variation",
    "ks_uniform",
    "max_excess",
    "sup_deviation",
    "superuniformity_curve",
    "uniform_grid",
    "ClassificationMetrics",
    "TrialMetrics",
    "classification_metrics",
    "fdp",
    "lexicographic_select",
    "power",
    "roc_auc",
    "trial_metrics",
    "ValiditySummary",
    "t_quantile",
    "validity",
]
