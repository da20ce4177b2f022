#!/usr/bin/env python3
"""
FDR validity verdict over repeated trials.

A method is valid at level alpha when

    mean(FDP) <= alpha + t_{0.995, n-1} * sd(FDP) / sqrt(n)

with the sample standard deviation (ddof=1). The plain comparison
mean(FDP) <= alpha is reported next to it as ``valid_raw``.
"""

import math
from dataclasses import asdict, dataclass
from typing import Any, Sequence

import numpy as np
from scipy.stats import t as student_t

from confshift.core.constants import T_995_DF19, VALIDITY_QUANTILE
from confshift.core.result import ConfigurationError, DomainError


@dataclass(frozen=True)
class ValiditySummary:
    mean_fdp: float
    sd_fdp: float
    n_trials: int
    alpha: float
    t_quantile: float
    bound: float
    valid: bool
    valid_raw: bool

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def t_quantile(n_trials: int) -> float:
    """One-sided 99.5% Student t quantile at n_trials - 1 degrees of freedom."""
    if n_trials < 2:
        raise DomainError(f"need at least 2 trials, got {n_trials}")
    if n_trials == 20:
        return T_995_DF19
    return float(student_t.ppf(VALIDITY_QUANTILE, n_trials - 1))


def validity(fdps: Sequence[float], alpha: float) -> ValiditySummary:
    """Apply the one-sided t-interval rule to per-trial FDPs.

    Raises:
        DomainError: fewer than 2 trials or FDPs outside [0, 1]
        ConfigurationError: alpha outside (0, 1)
    """
    if not 0.0 < alpha < 1.0:
        raise ConfigurationError(f"alpha must be in (0, 1), got {alpha}")
    values = np.asarray(fdps, dtype=np.float64).reshape(-1)
    quantile = t_quantile(values.size)
    if np.isnan(values).any() or (values < 0).any() or (values > 1).any():
        raise DomainError("FDP values must lie in [0, 1]")

    mean = float(values.mean())
    sd = float(values.std(ddof=1))
    bound = alpha + quantile * sd / math.sqrt(values.size)
    return ValiditySummary(
        mean_fdp=mean,
        sd_fdp=sd,
        n_trials=int(values.size),
        alpha=float(alpha),
        t_quantile=quantile,
        bound=bound,
        valid=mean <= bound,
        valid_raw=mean <= alpha,
    )
