#!/usr/bin/env python3
"""
Feature matrices: validation, standardization and CSV reading.

A feature matrix is a 2-D float array (rows = instances, cols = features)
with finite entries only. One-dimensional input is read as a single feature
column. Standardization parameters are always fitted on the training split
and then applied unchanged to every other split.

USAGE:
======
    from confshift.scoring.features import as_feature_matrix, fit_standardizer

    train = as_feature_matrix(train_values, name="train")
    scaler = fit_standardizer(train)
    calib, test = scaler.transform(calib), scaler.transform(test)
"""

from pathlib import Path

import numpy as np
import pandas as pd
from numpy.typing import ArrayLike
from sklearn.preprocessing import StandardScaler

from confshift.core.result import DomainError, ParseError, csv_parse_error


def as_feature_matrix(values: ArrayLike, name: str = "features") -> np.ndarray:
    """Return ``values`` as a validated float64 feature matrix."""
    matrix = np.asarray(values, dtype=np.float64)
    if matrix.ndim == 1:
        matrix = matrix.reshape(-1, 1)
    if matrix.ndim != 2:
        raise DomainError(f"{name} must be 2-D, got shape {matrix.shape}")
    if matrix.shape[1] < 1:
        raise DomainError(f"{name} must have at least one column")
    if not np.isfinite(matrix).all():
        bad_row = int(np.argwhere(~np.isfinite(matrix))[0][0])
        raise DomainError(f"{name} contains a non-finite value in row {bad_row}")
    return matrix


def fit_standardizer(train: ArrayLike) -> StandardScaler:
    """Fit z-score parameters on the training split only.

    Constant columns keep unit scale (StandardScaler's zero-variance rule), so
    they map to 0 instead of dividing by zero.
    """
    return StandardScaler().fit(as_feature_matrix(train, name="train"))


def read_feature_csv(path: Path | str) -> tuple[np.ndarray, list[str]]:
    """Read a feature CSV: header row of feature names, all-numeric body.

    Returns:
        (matrix, column_names)

    Raises:
        ParseError: missing header, empty body, or a non-numeric/non-finite
            cell (the error names the 1-based data row)
        OSError: the file cannot be read
    """
    path = Path(path)
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, encoding="utf-8")
    except (pd.errors.ParserError, UnicodeDecodeError, ValueError) as error:
        raise csv_parse_error(error, path) from error
    columns = [str(column).strip() for column in frame.columns]

    if all(_looks_numeric(column) for column in columns):
        raise ParseError("header row of feature names is required", path=path)
    if frame.empty:
        raise ParseError("no data rows", path=path)

    numeric = frame.apply(lambda column: pd.to_numeric(column, errors="coerce"))
    values = numeric.to_numpy(dtype=np.float64)
    bad = ~np.isfinite(values)
    if bad.any():
        row, col = np.argwhere(bad)[0]
        raise ParseError(
            f"column {columns[col]!r} is not a finite number: "
            f"{frame.iat[row, col]!r}",
            path=path,
            row=int(row) + 1,
        )
    return values, columns


def _looks_numeric(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True
