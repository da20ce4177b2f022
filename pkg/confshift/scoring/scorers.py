#!/usr/bin/env python3
"""
Built-in anomaly scorers.

Three simple detectors turn feature vectors into anomaly scores s(z), where
larger means more anomalous. Downstream modules only ever see scores, so any
external detector can replace these via score ingestion.

FEATURE SET:
============
1. fit_knn_scorer - mean Euclidean distance to the k nearest training rows
2. fit_histogram_scorer - HBOS-style sum of per-feature -log densities
3. fit_mahalanobis_scorer - Mahalanobis distance to the training mean
4. fit_scorer - name-based dispatch used by phase-1 model selection

USAGE:
======
    from confshift.scoring.scorers import fit_knn_scorer

    scorer = fit_knn_scorer(train, k=5)
    scores = scorer.score(test)

NOTES:
======
- Fitted scorers are frozen dataclasses; scoring is read-only and safe to
  share across threads
- Histogram queries outside the training range fall into the nearest edge bin
"""

from dataclasses import dataclass, field
from typing import Callable, Protocol

import numpy as np
from numpy.typing import ArrayLike
from scipy import linalg
from sklearn.neighbors import NearestNeighbors

from confshift.core.constants import HIST_EPS
from confshift.core.result import ConfigurationError, NumericalError
from confshift.scoring.features import as_feature_matrix


class Scorer(Protocol):
    """Anything that maps a feature matrix to one finite score per row."""

    name: str

    def score(self, features: ArrayLike) -> np.ndarray: ...


@dataclass(frozen=True, eq=False)
class KnnScorer:
    """Mean distance to the ``k`` nearest training rows."""

    k: int
    index: NearestNeighbors
    n_features: int
    name: str = "knn"

    def score(self, features: ArrayLike) -> np.ndarray:
        query = _check_query(features, self.n_features)
        distances, _ = self.index.kneighbors(query, n_neighbors=self.k)
        return distances.mean(axis=1)


@dataclass(frozen=True, eq=False)
class HistogramScorer:
    """Per-feature equal-width histograms; score = sum of -log(density + eps).

    ``edges[f]`` and ``densities[f]`` describe feature ``f``; a constant
    training feature has ``densities[f] is None`` and contributes 0.
    """

    edges: tuple[np.ndarray, ...]
    densities: tuple[np.ndarray | None, ...]
    name: str = "histogram"

    @property
    def n_features(self) -> int:
        return len(self.edges)

    def feature_scores(self, features: ArrayLike) -> np.ndarray:
        """Return the (rows, features) matrix of per-feature scores."""
        query = _check_query(features, self.n_features)
        out = np.zeros_like(query)
        for column, (edges, density) in enumerate(zip(self.edges, self.densities)):
            if density is None:
                continue
            # Interior edges only: out-of-range values land in the edge bins.
            bins = np.searchsorted(edges[1:-1], query[:, column], side="right")
            out[:, column] = -np.log(density[bins] + HIST_EPS)
        return out

    def score(self, features: ArrayLike) -> np.ndarray:
        return self.feature_scores(features).sum(axis=1)


@dataclass(frozen=True, eq=False)
class MahalanobisScorer:
    """Mahalanobis distance under a fixed mean and precision matrix."""

    mean: np.ndarray
    precision: np.ndarray
    name: str = field(default="mahalanobis")

    def score(self, features: ArrayLike) -> np.ndarray:
        query = _check_query(features, self.mean.shape[0])
        centered = query - self.mean
        squared = np.einsum("ij,jk,ik->i", centered, self.precision, centered)
        return np.sqrt(np.maximum(squared, 0.0))


def fit_knn_scorer(train: ArrayLike, k: int) -> KnnScorer:
    """Fit a kNN-distance scorer.

    Raises:
        ConfigurationError: ``k < 1`` or ``k`` exceeds the training rows
    """
    matrix = as_feature_matrix(train, name="train")
    if k < 1:
        raise ConfigurationError(f"k must be positive, got {k}")
    if k > matrix.shape[0]:
        raise ConfigurationError(
            f"k={k} exceeds the number of training rows ({matrix.shape[0]})"
        )
    index = NearestNeighbors(n_neighbors=k, algorithm="auto").fit(matrix)
    return KnnScorer(k=k, index=index, n_features=matrix.shape[1])


def fit_histogram_scorer(train: ArrayLike, bins: int) -> HistogramScorer:
    """Fit per-feature equal-width histograms over the training range.

    Raises:
        ConfigurationError: ``bins < 2``
    """
    matrix = as_feature_matrix(train, name="train")
    if bins < 2:
        raise ConfigurationError(f"bins must be >= 2, got {bins}")

    n_rows = matrix.shape[0]
    edges_list, densities = [], []
    for column in matrix.T:
        low, high = float(column.min()), float(column.max())
        if low == high:
            edges_list.append(np.array([low, high]))
            densities.append(None)
            continue
        counts, edges = np.histogram(column, bins=bins, range=(low, high))
        widths = np.diff(edges)
        edges_list.append(edges)
        densities.append(counts / (n_rows * widths))
    return HistogramScorer(edges=tuple(edges_list), densities=tuple(densities))


def fit_mahalanobis_scorer(train: ArrayLike, ridge: float = 0.0) -> MahalanobisScorer:
    """Fit a Mahalanobis scorer with covariance ``cov + ridge * I``.

    Raises:
        ConfigurationError: negative ridge, or fewer than two training rows
        NumericalError: the regularized covariance is singular
    """
    matrix = as_feature_matrix(train, name="train")
    if ridge < 0:
        raise ConfigurationError(f"ridge must be nonnegative, got {ridge}")
    n_rows, n_cols = matrix.shape
    if n_rows < 2:
        raise ConfigurationError("Mahalanobis scorer needs at least two training rows")

    covariance = np.atleast_2d(np.cov(matrix, rowvar=False))
    covariance = covariance + ridge * np.eye(n_cols)
    try:
        factor = linalg.cho_factor(covariance, lower=True, check_finite=True)
    except linalg.LinAlgError as error:
        raise NumericalError(
            f"training covariance is singular (n_train={n_rows}, cols={n_cols}, "
            f"ridge={ridge}); use ridge > 0"
        ) from error
    precision = linalg.cho_solve(factor, np.eye(n_cols))
    return MahalanobisScorer(mean=matrix.mean(axis=0), precision=precision)


SCORER_FACTORIES: dict[str, Callable[..., Scorer]] = {
    "knn": fit_knn_scorer,
    "histogram": fit_histogram_scorer,
    "mahalanobis": fit_mahalanobis_scorer,
}


def fit_scorer(name: str, train: ArrayLike, **params) -> Scorer:
    """Fit the built-in scorer registered under ``name``."""
    try:
        factory = SCORER_FACTORIES[name]
    except KeyError as error:
        known = ", ".join(sorted(SCORER_FACTORIES))
        raise ConfigurationError(
            f"unknown scorer {name!r} (known: {known})"
        ) from error
    return factory(train, **params)


def _check_query(features: ArrayLike, n_features: int) -> np.ndarray:
    # A flat vector is one row when the scorer has several features.
    if np.ndim(features) == 1 and n_features > 1:
        features = np.reshape(features, (1, -1))
    query = as_feature_matrix(features, name="query")
    if query.shape[1] != n_features:
        raise ConfigurationError(
            f"query has {query.shape[1]} columns, scorer was fitted on {n_features}"
        )
    return query
