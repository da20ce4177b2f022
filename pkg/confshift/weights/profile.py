#!/usr/bin/env python3
"""
WeightProfile: the stabilized importance weights of one experiment.

A profile holds one weight per calibration row and one per test row, the
winsorization bounds that produced them, and the bagging metadata. Every
weighted p-value method in a trial consumes the same profile, which the
``fingerprint`` makes checkable.

JSON LAYOUT:
============
    {
      "calib_weights": [...], "test_weights": [...],
      "clip_lo": 0.21, "clip_hi": 4.9, "gamma": 0.05,
      "n_bootstrap": 10, "seed": 7,
      "source": "estimated", "classifier": "forest"
    }
"""

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional

import numpy as np

from confshift.core.result import ConfigurationError, DomainError, ParseError
from confshift.weights.diagnostics import effective_sample_size


@dataclass(frozen=True, eq=False)
class WeightProfile:
    """Per-instance importance weights plus their provenance."""

    calib_weights: np.ndarray
    test_weights: np.ndarray
    clip_lo: float
    clip_hi: float
    n_bootstrap: int
    gamma: float
    seed: Optional[int] = None
    source: str = "estimated"
    classifier: Optional[str] = None

    def __post_init__(self) -> None:
        calib = np.asarray(self.calib_weights, dtype=np.float64).reshape(-1)
        test = np.asarray(self.test_weights, dtype=np.float64).reshape(-1)
        object.__setattr__(self, "calib_weights", calib)
        object.__setattr__(self, "test_weights", test)

        if not 0.0 <= self.gamma < 0.5:
            raise ConfigurationError(f"gamma must be in [0, 0.5), got {self.gamma}")
        if self.n_bootstrap < 0:
            raise ConfigurationError("n_bootstrap must be nonnegative")
        for name, weights in (("calib_weights", calib), ("test_weights", test)):
            if not np.isfinite(weights).all() or (weights <= 0).any():
                raise DomainError(f"{name} must be finite and strictly positive")
            if weights.size and (
                weights.min() < self.clip_lo or weights.max() > self.clip_hi
            ):
                raise DomainError(
                    f"{name} fall outside the clip bounds "
                    f"[{self.clip_lo}, {self.clip_hi}]"
                )

    @classmethod
    def unit(cls, n_calib: int, n_test: int) -> "WeightProfile":
        """All-ones profile used by the unweighted methods."""
        return cls(
            calib_weights=np.ones(n_calib),
            test_weights=np.ones(n_test),
            clip_lo=1.0,
            clip_hi=1.0,
            n_bootstrap=0,
            gamma=0.0,
            source="unit",
        )

    @property
    def n_eff(self) -> float:
        """Kish effective sample size of the calibration weights."""
        return effective_sample_size(self.calib_weights)

    def fingerprint(self) -> str:
        """SHA-256 over the exact weight bytes and clip bounds."""
        digest = hashlib.sha256()
        digest.update(self.calib_weights.tobytes())
        digest.update(self.test_weights.tobytes())
        digest.update(np.array([self.clip_lo, self.clip_hi]).tobytes())
        return digest.hexdigest()

    def to_dict(self) -> dict[str, Any]:
        return {
            "calib_weights": self.calib_weights.tolist(),
            "test_weights": self.test_weights.tolist(),
            "clip_lo": float(self.clip_lo),
            "clip_hi": float(self.clip_hi),
            "gamma": float(self.gamma),
            "n_bootstrap": int(self.n_bootstrap),
            "seed": self.seed,
            "source": self.source,
            "classifier": self.classifier,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "WeightProfile":
        try:
            return cls(
                calib_weights=np.asarray(data["calib_weights"], dtype=np.float64),
                test_weights=np.asarray(data["test_weights"], dtype=np.float64),
                clip_lo=float(data["clip_lo"]),
                clip_hi=float(data["clip_hi"]),
                n_bootstrap=int(data["n_bootstrap"]),
                gamma=float(data["gamma"]),
                seed=data.get("seed"),
                source=data.get("source", "estimated"),
                classifier=data.get("classifier"),
            )
        except KeyError as error:
            raise ParseError(f"weight profile is missing {error.args[0]!r}") from error

    def write_json(self, path: Path | str) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2), encoding="utf-8")

    @classmethod
    def read_json(cls, path: Path | str) -> "WeightProfile":
        path = Path(path)
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as error:
            raise ParseError(f"invalid JSON: {error.msg}", path=path) from error
        return cls.from_dict(data)
