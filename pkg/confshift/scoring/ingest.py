#!/usr/bin/env python3
"""
Score ingestion: externally computed anomaly scores as a ScoreBatch.

SUPPORTED FORMATS:
==================
csv   UTF-8, header row mandatory.
      score  (required) real number, larger = more anomalous
      label  (optional) 1 = anomaly, 0 = inlier; required on every test row
             when the column exists, ignored on calibration rows
      split  (optional) "calib" or "test"; rows default to "test"

json  {"calib_scores": [...], "test_scores": [...], "test_labels": [...]|null}

USAGE:
======
    from confshift.scoring.ingest import ingest_scores

    batch = ingest_scores("scores.csv")
    print(len(batch), batch.has_labels)

NOTES:
======
- NaN and +/-inf are rejected; the error names the 1-based data row
"""

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional

import numpy as np
import pandas as pd
from numpy.typing import ArrayLike

from confshift.core.logging import get_logger
from confshift.core.result import (
    ConfigurationError,
    DomainError,
    ParseError,
    csv_parse_error,
)

logger = get_logger(__name__)

SPLITS = ("calib", "test")


@dataclass(frozen=True, eq=False)
class ScoreBatch:
    """Calibration and test anomaly scores, optionally with test labels."""

    calib_scores: np.ndarray
    test_scores: np.ndarray
    test_labels: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        calib = _finite_vector(self.calib_scores, "calib_scores")
        test = _finite_vector(self.test_scores, "test_scores")
        object.__setattr__(self, "calib_scores", calib)
        object.__setattr__(self, "test_scores", test)
        if self.test_labels is not None:
            labels = np.asarray(self.test_labels)
            if labels.shape != test.shape:
                raise DomainError(
                    f"test_labels has length {labels.size}, "
                    f"test_scores has length {test.size}"
                )
            if not np.isin(labels, (0, 1)).all():
                raise DomainError("test_labels must contain only 0 and 1")
            object.__setattr__(self, "test_labels", labels.astype(np.int8))

    def __len__(self) -> int:
        return int(self.test_scores.size)

    @property
    def has_labels(self) -> bool:
        return self.test_labels is not None

    def to_dict(self) -> dict[str, Any]:
        return {
            "calib_scores": self.calib_scores.tolist(),
            "test_scores": self.test_scores.tolist(),
            "test_labels": (
                None if self.test_labels is None else self.test_labels.tolist()
            ),
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ScoreBatch":
        try:
            return cls(
                calib_scores=np.asarray(data.get("calib_scores", []), dtype=float),
                test_scores=np.asarray(data["test_scores"], dtype=float),
                test_labels=data.get("test_labels"),
            )
        except KeyError as error:
            raise ParseError(f"missing key {error.args[0]!r}") from error

    def to_frame(self) -> pd.DataFrame:
        """Long CSV-ready frame with ``score``, ``split`` and ``label`` columns."""
        calib = pd.DataFrame({"score": self.calib_scores, "split": "calib"})
        test = pd.DataFrame({"score": self.test_scores, "split": "test"})
        if self.test_labels is not None:
            calib["label"] = pd.NA
            test["label"] = self.test_labels
        return pd.concat([calib, test], ignore_index=True)


def ingest_scores(path: Path | str, format: str = "csv") -> ScoreBatch:
    """Read a score file into a validated ScoreBatch.

    Args:
        path: Score file
        format: "csv" or "json"

    Raises:
        ParseError: malformed rows, non-finite scores, label problems
        ConfigurationError: unknown format
        OSError: the file cannot be read
    """
    path = Path(path)
    if format == "csv":
        return _read_csv(path)
    if format == "json":
        with open(path, "r", encoding="utf-8") as handle:
            try:
                data = json.load(handle)
            except json.JSONDecodeError as error:
                raise ParseError(f"invalid JSON: {error.msg}", path=path) from error
        try:
            return ScoreBatch.from_dict(data)
        except ParseError:
            raise
        except (TypeError, ValueError) as error:
            raise ParseError(str(error), path=path) from error
    raise ConfigurationError(f"unknown score format {format!r} (use csv or json)")


def _read_csv(path: Path) -> ScoreBatch:
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, encoding="utf-8")
    except (pd.errors.ParserError, UnicodeDecodeError, ValueError) as error:
        raise csv_parse_error(error, path) from error
    frame.columns = [str(column).strip().lower() for column in frame.columns]
    if "score" not in frame.columns:
        raise ParseError("required column 'score' missing from header", path=path)
    if frame.empty:
        raise ParseError("no data rows", path=path)

    scores = pd.to_numeric(frame["score"].str.strip(), errors="coerce").to_numpy(
        dtype=np.float64
    )
    bad = np.flatnonzero(~np.isfinite(scores))
    if bad.size:
        row = int(bad[0])
        raise ParseError(
            f"score {frame['score'].iat[row]!r} is not a finite number",
            path=path,
            row=row + 1,
        )

    if "split" in frame.columns:
        splits = frame["split"].str.strip().str.lower().replace("", "test")
        unknown = np.flatnonzero(~splits.isin(SPLITS).to_numpy())
        if unknown.size:
            row = int(unknown[0])
            raise ParseError(
                f"split must be 'calib' or 'test', got {frame['split'].iat[row]!r}",
                path=path,
                row=row + 1,
            )
        is_test = (splits == "test").to_numpy()
    else:
        is_test = np.ones(len(frame), dtype=bool)

    labels = None
    if "label" in frame.columns:
        raw = frame["label"].str.strip()
        test_rows = np.flatnonzero(is_test)
        invalid = test_rows[~raw.iloc[test_rows].isin(("0", "1")).to_numpy()]
        if invalid.size:
            row = int(invalid[0])
            value = raw.iat[row]
            problem = (
                "label/score length mismatch: test row has no label"
                if value == ""
                else f"label must be 0 or 1, got {value!r}"
            )
            raise ParseError(problem, path=path, row=row + 1)
        labels = raw.iloc[test_rows].astype(int).to_numpy()

    batch = ScoreBatch(
        calib_scores=scores[~is_test],
        test_scores=scores[is_test],
        test_labels=labels,
    )
    logger.debug(
        "Read %d calibration and %d test scores from %s",
        batch.calib_scores.size,
        len(batch),
        path.name,
    )
    return batch


def _finite_vector(values: ArrayLike, name: str) -> np.ndarray:
    vector = np.asarray(values, dtype=np.float64).reshape(-1)
    if not np.isfinite(vector).all():
        index = int(np.flatnonzero(~np.isfinite(vector))[0])
        raise DomainError(f"{name}[{index}] is not finite")
    return vector
