#!/usr/bin/env python3
"""
Two-stage weighted conformalized selection (WCS).

STAGES:
=======
1. wcs_select: self-consistency fixed point
       R* = max{ r : #{j : p_j <= alpha * r / m} >= r }
       S  = { j : p_j <= alpha * R* / m }
2. wcs_prune: trim S to R* members using the within-S p-value rank r_j
   (1 = smallest p, ties by index)
       deterministic   keep r_j <= R*
       homogeneous     keep r_j - xi < R*,   one xi ~ U[0, 1] for the batch
       heterogeneous   keep r_j - xi_j < R*, one xi_j ~ U[0, 1] per member

USAGE:
======
    from confshift.selection.wcs import wcs

    report = wcs(pvalues, alpha=0.1, strategy="homogeneous", seed=11)

NOTES:
======
- This is the fixed-point variant of WCS, not the construction with
  candidate-dependent leave-one-out auxiliary p-values; reports carry
  ``wcs_approx = True``
- On the stage-1 output |S| = R* always holds, so pruning only changes
  candidate sets supplied from elsewhere
- Randomized strategies require a seed even when nothing would be pruned
- For xi in (0, 1) the offset rules keep exactly the ranks <= R*, so the
  randomized strategies only depart from deterministic pruning when a draw
  lands on 0 exactly
"""

from typing import Iterable, NamedTuple, Optional

import numpy as np
from numpy.typing import ArrayLike

from confshift.core.constants import PRUNING_ALIASES, Pruning
from confshift.core.logging import get_logger
from confshift.core.result import ConfigurationError
from confshift.core.seeding import check_seed, make_rng
from confshift.pvalues.vector import PValueVector
from confshift.selection.bh import self_consistent_count, step_up_thresholds
from confshift.selection.report import (
    WCS_PROCEDURE,
    DecisionReport,
    check_alpha,
    check_indices,
    pvalue_array,
)

logger = get_logger(__name__)


class WcsCandidates(NamedTuple):
    indices: tuple[int, ...]
    r_star: int


def parse_pruning(strategy: Pruning | str) -> Pruning:
    """Accept full names (``homogeneous``) or short ones (``hom``)."""
    if isinstance(strategy, str) and strategy in PRUNING_ALIASES:
        return PRUNING_ALIASES[strategy]
    try:
        return Pruning(strategy)
    except ValueError as error:
        raise ConfigurationError(
            f"unknown pruning strategy {strategy!r} "
            "(use deterministic, homogeneous or heterogeneous)"
        ) from error


def wcs_select(p: PValueVector | ArrayLike, alpha: float) -> WcsCandidates:
    """First-stage candidate set S and its self-consistent count R*."""
    alpha = check_alpha(alpha)
    values = pvalue_array(p)
    r_star = self_consistent_count(values, alpha)
    if r_star == 0:
        return WcsCandidates(indices=(), r_star=0)
    cutoff = step_up_thresholds(values.size, alpha)[r_star - 1]
    return WcsCandidates(
        indices=tuple(np.flatnonzero(values <= cutoff).tolist()), r_star=r_star
    )


def within_set_ranks(indices: np.ndarray, values: np.ndarray) -> np.ndarray:
    """1-based rank of each candidate by (p-value, index)."""
    order = np.lexsort((indices, values[indices]))
    ranks = np.empty(indices.size, dtype=np.int64)
    ranks[order] = np.arange(1, indices.size + 1)
    return ranks


def rank_offset_keep(
    ranks: ArrayLike, r_star: int, offsets: ArrayLike | float
) -> np.ndarray:
    """Mask of candidates with ``rank - offset < r_star``."""
    return np.asarray(ranks) - np.asarray(offsets, dtype=np.float64) < r_star


def wcs_prune(
    candidates: Iterable[int],
    p: PValueVector | ArrayLike,
    r_star: int,
    strategy: Pruning | str,
    seed: Optional[int] = None,
    *,
    alpha: float,
) -> DecisionReport:
    """Second-stage pruning of a WCS candidate set.

    Raises:
        ConfigurationError: homogeneous or heterogeneous without a seed,
            negative R*, unknown strategy
        DomainError: candidate index outside [0, m)
    """
    alpha = check_alpha(alpha)
    strategy = parse_pruning(strategy)
    randomized = strategy is not Pruning.DETERMINISTIC
    if randomized and seed is None:
        raise ConfigurationError(f"{strategy} pruning requires a seed")
    if r_star < 0:
        raise ConfigurationError(f"R* must be nonnegative, got {r_star}")

    values = pvalue_array(p)
    m = values.size
    indices = check_indices(candidates, m)

    if indices.size <= r_star:
        kept = indices
    else:
        ranks = within_set_ranks(indices, values)
        if strategy is Pruning.DETERMINISTIC:
            keep = ranks <= r_star
        elif strategy is Pruning.HOMOGENEOUS:
            keep = rank_offset_keep(ranks, r_star, make_rng(seed).random())
        else:
            keep = rank_offset_keep(ranks, r_star, make_rng(seed).random(indices.size))
        kept = indices[keep]
        logger.debug(
            "%s pruning kept %d of %d candidates (R*=%d)",
            strategy,
            kept.size,
            indices.size,
            r_star,
        )

    return DecisionReport(
        rejected=tuple(kept.tolist()),
        procedure=WCS_PROCEDURE[strategy],
        alpha=alpha,
        threshold=alpha * kept.size / m if m else 0.0,
        m=m,
        prune_seed=check_seed(seed, "prune seed") if randomized else None,
        r_star=r_star,
        n_candidates=int(indices.size),
        wcs_approx=True,
    )


def wcs(
    p: PValueVector | ArrayLike,
    alpha: float,
    strategy: Pruning | str = Pruning.HOMOGENEOUS,
    seed: Optional[int] = None,
) -> DecisionReport:
    """Run both WCS stages."""
    selected = wcs_select(p, alpha)
    return wcs_prune(
        selected.indices, p, selected.r_star, strategy, seed, alpha=alpha
    )
