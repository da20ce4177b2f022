#!/usr/bin/env python3
"""
Shared constants for the conformal inference tools.

FEATURE SET:
============
1. Numerical guards (probability clamp, log-density epsilon, bandwidth floors)
2. Statistical defaults (alpha, winsorization gamma, bootstrap replicas)
3. Method, pruning and procedure vocabularies with stable stream ids

USAGE:
======
    from confshift.core.constants import P_MIN, WEIGHTED_METHODS

    p = np.clip(p, P_MIN, 1.0 - P_MIN)
    if method in WEIGHTED_METHODS:
        ...

NOTES:
======
- Stream ids feed seed derivation; they must never be renumbered, or every
  recorded experiment stops being reproducible
"""

from enum import StrEnum

# Classifier probabilities are clamped to [P_MIN, 1 - P_MIN] before odds.
P_MIN = 1e-6

# Added to histogram densities before taking -log.
HIST_EPS = 1e-12

# Bandwidth floor: max(H_MIN_ABS, H_MIN_REL * score range).
H_MIN_ABS = 1e-6
H_MIN_REL = 1e-4

# Default LOO bandwidth grid: GRID_SIZE log-spaced multiples of the
# Silverman reference over GRID_SPAN.
GRID_SIZE = 25
GRID_SPAN = (0.1, 10.0)
SILVERMAN_FACTOR = 1.06

# One-sided 99.5% t quantile at 19 degrees of freedom (20 trials).
T_995_DF19 = 2.861
VALIDITY_QUANTILE = 0.995

DEFAULT_ALPHA = 0.1
DEFAULT_GAMMA = 0.05
DEFAULT_N_BOOTSTRAP = 10
DEFAULT_N_SEEDS = 20
DEFAULT_VAL_FRACTION = 0.3

# Built-in random forest for density-ratio classification.
FOREST_N_ESTIMATORS = 25
FOREST_MAX_DEPTH = 4

# Test points evaluated per block in batched KDE / p-value kernels.
EVAL_BLOCK = 2048


class Methods(StrEnum):
    """p-value construction labels used by the simulation harness."""

    EDF = "edf"
    WEDF = "wedf"
    EDF_RAND = "edf_rand"
    WEDF_RAND = "wedf_rand"
    KDE = "kde"
    WKDE = "wkde"


WEIGHTED_METHODS = frozenset({Methods.WEDF, Methods.WEDF_RAND, Methods.WKDE})
RANDOMIZED_METHODS = frozenset({Methods.EDF_RAND, Methods.WEDF_RAND})
SMOOTH_METHODS = frozenset({Methods.KDE, Methods.WKDE})

# Canonical output order and seed stream ids.
METHOD_ORDER = tuple(Methods)
METHOD_STREAM = {method: 10 + index for index, method in enumerate(METHOD_ORDER)}


class Pruning(StrEnum):
    """WCS pruning strategies."""

    DETERMINISTIC = "deterministic"
    HOMOGENEOUS = "homogeneous"
    HETEROGENEOUS = "heterogeneous"


PRUNING_ORDER = tuple(Pruning)
PRUNING_STREAM = {pruning: 100 + index for index, pruning in enumerate(PRUNING_ORDER)}

# CLI short names for pruning strategies.
PRUNING_ALIASES = {
    "det": Pruning.DETERMINISTIC,
    "hom": Pruning.HOMOGENEOUS,
    "het": Pruning.HETEROGENEOUS,
}

# Pruning label for unweighted rows, which go through BH.
NO_PRUNING = "none"

# Seed streams for the remaining per-trial randomness.
STREAM_DATA = 1
STREAM_WEIGHTS = 2
