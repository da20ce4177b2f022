"""Multiple testing: Benjamini-Hochberg and weighted conformalized selection."""

from .bh import benjamini_hochberg, self_consistent_count
from .report import DecisionReport, Procedure
from .wcs import (
    WcsCandidates,
    parse_pruning,
    rank_offset_keep,
    wcs,
    wcs_prune,
    wcs_select,
    within_set_ranks,
)

__all__ = [
    "benjamini_hochberg",
    "self_consistent_count",
    "DecisionReport",
    "Procedure",
    "WcsCandidates",
    "parse_pruning",
    "rank_offset_keep",
    "wcs",
    "wcs_prune",
    "wcs_select",
    "within_set_ranks",
]
