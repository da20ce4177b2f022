#!/usr/bin/env python3
"""
PValueVector: one p-value per test point, tagged with its construction.

FILE FORMATS:
=============
csv   index,p_value,method,seed     (index is 0-based; seed blank unless
                                     method is randomized)
json  {"values": [...], "method": "kde", "seed": null}
"""

import json
from dataclasses import dataclass
from enum import StrEnum
from pathlib import Path
from typing import Any, Optional

import numpy as np
import pandas as pd
from numpy.typing import ArrayLike

from confshift.core.result import (
    ConfigurationError,
    DomainError,
    ParseError,
    csv_parse_error,
)

CSV_COLUMNS = ("index", "p_value", "method", "seed")


class PValueMethod(StrEnum):
    DISCRETE = "discrete"
    RANDOMIZED = "randomized"
    KDE = "kde"


@dataclass(frozen=True, eq=False)
class PValueVector:
    """Conformal p-values for a test batch.

    Attributes:
        values: p-values in [0, 1], aligned with the test batch
        method: discrete, randomized or kde
        seed: Generator seed; recorded for randomized vectors only
    """

    values: np.ndarray
    method: PValueMethod
    seed: Optional[int] = None

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=np.float64).reshape(-1)
        if np.isnan(values).any() or (values < 0).any() or (values > 1).any():
            raise DomainError("p-values must lie in [0, 1]")
        try:
            method = PValueMethod(self.method)
        except ValueError as error:
            raise ConfigurationError(
                f"unknown p-value method {self.method!r}"
            ) from error
        if method is PValueMethod.RANDOMIZED and self.seed is None:
            raise ConfigurationError("randomized p-values must record their seed")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "method", method)
        object.__setattr__(
            self,
            "seed",
            None if method is not PValueMethod.RANDOMIZED else int(self.seed),
        )

    def __len__(self) -> int:
        return int(self.values.size)

    @classmethod
    def from_values(
        cls, values: ArrayLike, method: str = "discrete", seed: Optional[int] = None
    ) -> "PValueVector":
        return cls(
            values=np.asarray(values, dtype=np.float64), method=method, seed=seed
        )

    # -------------------------------------------------------------------------
    # Serialization
    # -------------------------------------------------------------------------

    def to_frame(self) -> pd.DataFrame:
        seed = pd.array([self.seed] * len(self), dtype="Int64")
        return pd.DataFrame(
            {
                "index": np.arange(len(self)),
                "p_value": self.values,
                "method": str(self.method),
                "seed": seed,
            },
            columns=list(CSV_COLUMNS),
        )

    def to_csv(self, path: Path | str) -> None:
        self.to_frame().to_csv(path, index=False, float_format="%.17g")

    @classmethod
    def read_csv(cls, path: Path | str) -> "PValueVector":
        """Read a vector written by ``to_csv``.

        Rows are reordered by ``index``; the indices must be exactly 0..m-1.

        Raises:
            ParseError: missing columns, mixed methods or non-numeric values
        """
        path = Path(path)
        try:
            frame = pd.read_csv(path, dtype={"method": str})
        except pd.errors.EmptyDataError as error:
            raise ParseError("file is empty", path=path) from error
        except (pd.errors.ParserError, UnicodeDecodeError, ValueError) as error:
            raise csv_parse_error(error, path) from error
        missing = [name for name in ("index", "p_value") if name not in frame.columns]
        if missing:
            raise ParseError(f"missing column(s): {', '.join(missing)}", path=path)

        index = pd.to_numeric(frame["index"], errors="coerce")
        values = pd.to_numeric(frame["p_value"], errors="coerce")
        bad = index.isna() | values.isna()
        if bad.any():
            row = int(np.flatnonzero(bad.to_numpy())[0]) + 1
            raise ParseError("non-numeric index or p_value", path=path, row=row)
        order = np.argsort(index.to_numpy(), kind="stable")
        if not np.array_equal(index.to_numpy()[order], np.arange(len(frame))):
            raise ParseError("index column must enumerate 0..m-1", path=path)

        method = "discrete"
        if "method" in frame.columns and len(frame):
            methods = frame["method"].dropna().unique()
            if len(methods) > 1:
                raise ParseError("mixed methods in one p-value file", path=path)
            if len(methods) == 1:
                method = str(methods[0])
        seed = None
        if "seed" in frame.columns and frame["seed"].notna().any():
            seed = int(frame["seed"].dropna().iloc[0])
        return cls(values=values.to_numpy()[order], method=method, seed=seed)

    def to_dict(self) -> dict[str, Any]:
        return {
            "values": self.values.tolist(),
            "method": str(self.method),
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "PValueVector":
        try:
            return cls(
                values=data["values"], method=data["method"], seed=data.get("seed")
            )
        except KeyError as error:
            raise ParseError(f"p-value vector is missing {error.args[0]!r}") from error

    def write_json(self, path: Path | str) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2), encoding="utf-8")
