"""Importance weights w(z) = dQ/dP(z) via the density-ratio trick."""

from .bagging import (
    bagged_weights,
    bootstrap_log_weights,
    geometric_aggregate,
    stabilize_weights,
    winsor_bounds,
    winsorize,
)
from .classifier import (
    ClassifierKind,
    ClassifierModel,
    estimate_weights,
    estimate_weights_single,
    fit_probabilistic_classifier,
    odds_weight,
)
from .diagnostics import effective_sample_size, max_weight_share
from .profile import WeightProfile

__all__ = [
    "bagged_weights",
    "bootstrap_log_weights",
    "geometric_aggregate",
    "stabilize_weights",
    "winsor_bounds",
    "winsorize",
    "ClassifierKind",
    "ClassifierModel",
    "estimate_weights",
    "estimate_weights_single",
    "fit_probabilistic_classifier",
    "odds_weight",
    "effective_sample_size",
    "max_weight_share",
    "WeightProfile",
]
