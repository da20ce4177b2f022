#!/usr/bin/env python3
"""
Per-trial detection metrics and detector-selection metrics.

FEATURE SET:
============
1. fdp / power / trial_metrics: false discovery proportion and power of one
   rejection set against ground-truth labels (1 = anomaly, 0 = inlier)
2. classification_metrics: PR-AUC, ROC-AUC and Brier score of raw anomaly
   scores, used to pick a detector on the validation split
3. lexicographic_select: maximize PR-AUC, then ROC-AUC, then minimize Brier

NOTES:
======
- Power is None when the batch holds no anomalies; averages skip it
- ROC-AUC is the Mann-Whitney statistic U / (n_pos * n_neg) with ties
  counted one half
- Brier is computed on min-max normalized scores (0.5 for constant scores)
"""

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional, Sequence

import numpy as np
from numpy.typing import ArrayLike
from scipy.stats import rankdata
from sklearn.metrics import average_precision_score, brier_score_loss

from confshift.core.result import ConfigurationError, DomainError


@dataclass(frozen=True)
class TrialMetrics:
    fdp: float
    power: Optional[float]
    n_rejected: int
    n_anomalies: int


class ClassificationMetrics(NamedTuple):
    pr_auc: float
    roc_auc: float
    brier: float


def _labels(labels: ArrayLike) -> np.ndarray:
    array = np.asarray(labels).reshape(-1)
    if not np.isin(array, (0, 1)).all():
        raise DomainError("labels must contain only 0 and 1")
    return array.astype(bool)


def _rejection_mask(rejected: Iterable[int], m: int) -> np.ndarray:
    indices = np.asarray(list(rejected), dtype=np.int64)
    if indices.size and (indices.min() < 0 or indices.max() >= m):
        raise DomainError(f"rejected index out of range [0, {m})")
    mask = np.zeros(m, dtype=bool)
    mask[indices] = True
    return mask


def fdp(rejected: Iterable[int], labels: ArrayLike) -> float:
    """|R intersect H0| / max(1, |R|)."""
    anomalous = _labels(labels)
    mask = _rejection_mask(rejected, anomalous.size)
    false_discoveries = int(np.count_nonzero(mask & ~anomalous))
    return false_discoveries / max(1, int(mask.sum()))


def power(rejected: Iterable[int], labels: ArrayLike) -> Optional[float]:
    """|R intersect H1| / |H1|, or None when there are no anomalies."""
    anomalous = _labels(labels)
    mask = _rejection_mask(rejected, anomalous.size)
    n_anomalies = int(anomalous.sum())
    if n_anomalies == 0:
        return None
    return int(np.count_nonzero(mask & anomalous)) / n_anomalies


def trial_metrics(rejected: Iterable[int], labels: ArrayLike) -> TrialMetrics:
    rejected = list(rejected)
    anomalous = _labels(labels)
    return TrialMetrics(
        fdp=fdp(rejected, anomalous.astype(int)),
        power=power(rejected, anomalous.astype(int)),
        n_rejected=len(set(rejected)),
        n_anomalies=int(anomalous.sum()),
    )


def roc_auc(scores: ArrayLike, labels: ArrayLike) -> float:
    """Mann-Whitney ROC-AUC: P(score_pos > score_neg) + 0.5 P(tie)."""
    s, positive = _scored(scores, labels)
    n_pos = int(positive.sum())
    n_neg = positive.size - n_pos
    ranks = rankdata(s, method="average")
    u_stat = ranks[positive].sum() - n_pos * (n_pos + 1) / 2.0
    return float(u_stat / (n_pos * n_neg))


def minmax_normalize(scores: ArrayLike) -> np.ndarray:
    s = np.asarray(scores, dtype=np.float64)
    span = s.max() - s.min()
    if span == 0:
        return np.full(s.shape, 0.5)
    return (s - s.min()) / span


def classification_metrics(
    scores: ArrayLike, labels: ArrayLike
) -> ClassificationMetrics:
    """PR-AUC, ROC-AUC and Brier score of anomaly scores against labels.

    Raises:
        DomainError: labels hold a single class, or lengths differ
    """
    s, positive = _scored(scores, labels)
    target = positive.astype(int)
    return ClassificationMetrics(
        pr_auc=float(average_precision_score(target, s)),
        roc_auc=roc_auc(s, target),
        brier=float(brier_score_loss(target, minmax_normalize(s))),
    )


def lexicographic_select(
    candidates: Sequence[tuple[str, float, float, float]],
) -> str:
    """Name maximizing (pr_auc, roc_auc, -brier); ties go to the smaller name.

    Raises:
        ConfigurationError: empty candidate list
    """
    if not candidates:
        raise ConfigurationError("no candidates to select from")
    best = min(
        candidates,
        key=lambda row: (-row[1], -row[2], row[3], row[0]),
    )
    return best[0]


def _scored(scores: ArrayLike, labels: ArrayLike) -> tuple[np.ndarray, np.ndarray]:
    s = np.asarray(scores, dtype=np.float64).reshape(-1)
    positive = _labels(labels)
    if s.size != positive.size:
        raise DomainError(
            f"scores has length {s.size}, labels has length {positive.size}"
        )
    if not np.isfinite(s).all():
        raise DomainError("scores must be finite")
    if positive.all() or not positive.any():
        raise DomainError("classification metrics need both classes present")
    return s, positive
