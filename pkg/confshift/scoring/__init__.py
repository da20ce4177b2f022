"""Anomaly scoring: built-in detectors, feature handling and score ingestion."""

from .features import as_feature_matrix, fit_standardizer, read_feature_csv
from .ingest import ScoreBatch, ingest_scores
from .scorers import (
    HistogramScorer,
    KnnScorer,
    MahalanobisScorer,
    Scorer,
    fit_histogram_scorer,
    fit_knn_scorer,
    fit_mahalanobis_scorer,
    fit_scorer,
)

__all__ = [
    "as_feature_matrix",
    "fit_standardizer",
    "read_feature_csv",
    "ScoreBatch",
    "ingest_scores",
    "Scorer",
    "KnnScorer",
    "HistogramScorer",
    "MahalanobisScorer",
    "fit_knn_scorer",
    "fit_histogram_scorer",
    "fit_mahalanobis_scorer",
    "fit_scorer",
]
