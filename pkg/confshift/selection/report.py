#!/usr/bin/env python3
"""
DecisionReport: the outcome of a multiple-testing procedure.

JSON LAYOUT:
============
    {
      "rejected": [0, 4, 17],        sorted, 0-based test indices
      "procedure": "wcs_hom",        bh | wcs_det | wcs_hom | wcs_het
      "alpha": 0.1,
      "threshold": 0.015,            final p-value cutoff
      "prune_seed": 3,               randomized pruning only
      "m": 200,
      "r_star": 3,                   WCS only
      "n_candidates": 3,             WCS only
      "wcs_approx": true             WCS uses the self-consistency fixed point
    }
"""

import json
from dataclasses import dataclass
from enum import StrEnum
from pathlib import Path
from typing import Any, Iterable, Optional

import numpy as np
from numpy.typing import ArrayLike

from confshift.core.constants import Pruning
from confshift.core.result import ConfigurationError, DomainError, ParseError
from confshift.pvalues.vector import PValueVector


class Procedure(StrEnum):
    BH = "bh"
    WCS_DET = "wcs_det"
    WCS_HOM = "wcs_hom"
    WCS_HET = "wcs_het"


WCS_PROCEDURE = {
    Pruning.DETERMINISTIC: Procedure.WCS_DET,
    Pruning.HOMOGENEOUS: Procedure.WCS_HOM,
    Pruning.HETEROGENEOUS: Procedure.WCS_HET,
}

RANDOMIZED_PROCEDURES = frozenset({Procedure.WCS_HOM, Procedure.WCS_HET})


@dataclass(frozen=True)
class DecisionReport:
    """Rejection set plus the parameters that produced it."""

    rejected: tuple[int, ...]
    procedure: Procedure
    alpha: float
    threshold: float
    m: int
    prune_seed: Optional[int] = None
    r_star: Optional[int] = None
    n_candidates: Optional[int] = None
    wcs_approx: bool = False

    def __post_init__(self) -> None:
        rejected = tuple(sorted(int(index) for index in self.rejected))
        if len(set(rejected)) != len(rejected):
            raise DomainError("rejected indices must be unique")
        if rejected and (rejected[0] < 0 or rejected[-1] >= self.m):
            raise DomainError(f"rejected indices must lie in [0, {self.m})")
        procedure = Procedure(self.procedure)
        if procedure in RANDOMIZED_PROCEDURES and self.prune_seed is None:
            raise ConfigurationError(f"{procedure} must record its pruning seed")
        object.__setattr__(self, "rejected", rejected)
        object.__setattr__(self, "procedure", procedure)

    @property
    def n_rejected(self) -> int:
        return len(self.rejected)

    def rejection_mask(self) -> np.ndarray:
        mask = np.zeros(self.m, dtype=bool)
        mask[list(self.rejected)] = True
        return mask

    def to_dict(self) -> dict[str, Any]:
        return {
            "rejected": list(self.rejected),
            "procedure": str(self.procedure),
            "alpha": self.alpha,
            "threshold": self.threshold,
            "prune_seed": self.prune_seed,
            "m": self.m,
            "r_star": self.r_star,
            "n_candidates": self.n_candidates,
            "wcs_approx": self.wcs_approx,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "DecisionReport":
        try:
            return cls(
                rejected=tuple(data["rejected"]),
                procedure=data["procedure"],
                alpha=float(data["alpha"]),
                threshold=float(data["threshold"]),
                m=int(data["m"]),
                prune_seed=data.get("prune_seed"),
                r_star=data.get("r_star"),
                n_candidates=data.get("n_candidates"),
                wcs_approx=bool(data.get("wcs_approx", False)),
            )
        except KeyError as error:
            raise ParseError(f"decision report is missing {error.args[0]!r}") from error

    def write_json(self, path: Path | str) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2), encoding="utf-8")


def check_alpha(alpha: float) -> float:
    if not 0.0 < alpha < 1.0:
        raise ConfigurationError(f"alpha must be in (0, 1), got {alpha}")
    return float(alpha)


def pvalue_array(p: PValueVector | ArrayLike) -> np.ndarray:
    """Plain float array from a PValueVector or any sequence of p-values."""
    if isinstance(p, PValueVector):
        return p.values
    values = np.asarray(p, dtype=np.float64).reshape(-1)
    if np.isnan(values).any() or (values < 0).any() or (values > 1).any():
        raise DomainError("p-values must lie in [0, 1]")
    return values


def check_indices(indices: Iterable[int], m: int) -> np.ndarray:
    array = np.asarray(sorted(int(i) for i in indices), dtype=np.int64)
    if array.size and (array[0] < 0 or array[-1] >= m):
        raise DomainError(f"candidate indices must lie in [0, {m})")
    if np.unique(array).size != array.size:
        raise DomainError("candidate indices must be unique")
    return array
