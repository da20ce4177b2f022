#!/usr/bin/env python3
"""
ExperimentSpec: a validated simulation configuration loaded from TOML.

FILE LAYOUT:
============
    [experiment]
    name = "dilemma"
    n_seeds = 20
    master_seed = 2024
    alpha = 0.1
    methods = ["edf", "wedf", "edf_rand", "wedf_rand", "kde", "wkde"]
    pruning = "homogeneous"          # or a list of strategies

    [data]
    n_train = 400
    n_cal = 100
    n_test = 200
    n_features = 4
    anomaly_rate = 0.05
    val_fraction = 0.3
    anomaly_shift = 5.0
    anomaly_scale = 1.0
    mixture_separation = 1.5

    [shift]
    kind = "localization"            # none | mean_shift | localization
    strength = 1.5                   # localization only
    delta = [0.5, 0.0, 0.0, 0.0]     # mean_shift only

    [weights]
    source = "estimated"             # estimated | oracle
    classifier = "forest"            # forest | logistic
    n_bootstrap = 10
    gamma = 0.05

    [scorers]
    candidates = ["knn", "histogram", "mahalanobis"]
    knn_k = 5
    histogram_bins = 10
    mahalanobis_ridge = 1e-6

Every key is optional and falls back to the default shown by
``ExperimentSpec()``. Unknown sections or keys are rejected with the
dotted key name.
"""

import math
import tomllib
from dataclasses import asdict, dataclass, field, replace
from enum import StrEnum
from pathlib import Path
from typing import Any, Mapping

import numpy as np

from confshift.core.constants import (
    DEFAULT_ALPHA,
    DEFAULT_GAMMA,
    DEFAULT_N_BOOTSTRAP,
    DEFAULT_N_SEEDS,
    DEFAULT_VAL_FRACTION,
    METHOD_ORDER,
    PRUNING_ALIASES,
    PRUNING_ORDER,
    WEIGHTED_METHODS,
    Methods,
    Pruning,
)
from confshift.core.result import ConfigurationError, ParseError
from confshift.scoring.scorers import SCORER_FACTORIES
from confshift.weights.classifier import ClassifierKind


class ShiftKind(StrEnum):
    NONE = "none"
    MEAN_SHIFT = "mean_shift"
    LOCALIZATION = "localization"


class WeightSource(StrEnum):
    ESTIMATED = "estimated"
    ORACLE = "oracle"


@dataclass(frozen=True)
class ShiftSpec:
    """Test-domain covariate shift: a mean offset applied to test covariates."""

    kind: ShiftKind = ShiftKind.NONE
    strength: float = 0.0
    delta: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", _enum(ShiftKind, self.kind, "shift.kind"))
        object.__setattr__(self, "strength", float(self.strength))
        object.__setattr__(self, "delta", tuple(float(x) for x in self.delta))

    def offset(self, n_features: int) -> np.ndarray:
        """The shift vector added to every test covariate."""
        if self.kind is ShiftKind.MEAN_SHIFT:
            return np.asarray(self.delta, dtype=np.float64)
        if self.kind is ShiftKind.LOCALIZATION:
            return np.full(n_features, self.strength / math.sqrt(n_features))
        return np.zeros(n_features)


@dataclass(frozen=True)
class ExperimentSpec:
    """All knobs of a two-phase simulation experiment."""

    name: str = "experiment"
    n_seeds: int = DEFAULT_N_SEEDS
    master_seed: int = 0
    alpha: float = DEFAULT_ALPHA
    methods: tuple[Methods, ...] = METHOD_ORDER
    pruning: tuple[Pruning, ...] = (Pruning.HOMOGENEOUS,)

    n_train: int = 400
    n_cal: int = 200
    n_test: int = 200
    n_features: int = 4
    anomaly_rate: float = 0.05
    val_fraction: float = DEFAULT_VAL_FRACTION
    anomaly_shift: float = 4.0
    anomaly_scale: float = 1.0
    mixture_separation: float = 1.5

    shift: ShiftSpec = field(default_factory=ShiftSpec)

    weight_source: WeightSource = WeightSource.ESTIMATED
    classifier: ClassifierKind = ClassifierKind.FOREST
    n_bootstrap: int = DEFAULT_N_BOOTSTRAP
    gamma: float = DEFAULT_GAMMA

    scorers: tuple[str, ...] = ("knn", "histogram", "mahalanobis")
    knn_k: int = 5
    histogram_bins: int = 10
    mahalanobis_ridge: float = 1e-6

    def __post_init__(self) -> None:
        object.__setattr__(self, "methods", _methods(self.methods))
        object.__setattr__(self, "pruning", _pruning(self.pruning))
        source = _enum(WeightSource, self.weight_source, "weights.source")
        classifier = _enum(ClassifierKind, self.classifier, "weights.classifier")
        object.__setattr__(self, "weight_source", source)
        object.__setattr__(self, "classifier", classifier)
        object.__setattr__(self, "scorers", tuple(self.scorers))
        self._validate()

    def _validate(self) -> None:
        checks = [
            (self.n_seeds >= 1, "experiment.n_seeds must be >= 1"),
            (self.master_seed >= 0, "experiment.master_seed must be >= 0"),
            (0.0 < self.alpha < 1.0, "experiment.alpha must be in (0, 1)"),
            (self.n_train >= 2, "data.n_train must be >= 2"),
            (self.n_cal >= 1, "data.n_cal must be >= 1"),
            (self.n_test >= 1, "data.n_test must be >= 1"),
            (self.n_features >= 1, "data.n_features must be >= 1"),
            (0.0 < self.anomaly_rate < 0.5, "data.anomaly_rate must be in (0, 0.5)"),
            (0.0 < self.val_fraction < 1.0, "data.val_fraction must be in (0, 1)"),
            (self.anomaly_scale > 0, "data.anomaly_scale must be positive"),
            (self.n_bootstrap >= 1, "weights.n_bootstrap must be >= 1"),
            (0.0 <= self.gamma < 0.5, "weights.gamma must be in [0, 0.5)"),
            (len(self.scorers) >= 1, "scorers.candidates must not be empty"),
            (1 <= self.knn_k <= self.n_train, "scorers.knn_k must be in [1, n_train]"),
            (self.histogram_bins >= 2, "scorers.histogram_bins must be >= 2"),
            (self.mahalanobis_ridge >= 0, "scorers.mahalanobis_ridge must be >= 0"),
        ]
        for ok, message in checks:
            if not ok:
                raise ConfigurationError(message)

        unknown = [name for name in self.scorers if name not in SCORER_FACTORIES]
        if unknown:
            raise ConfigurationError(f"scorers.candidates: unknown scorer(s) {unknown}")
        mean_shift = self.shift.kind is ShiftKind.MEAN_SHIFT
        if mean_shift and len(self.shift.delta) != self.n_features:
            raise ConfigurationError(
                f"shift.delta has {len(self.shift.delta)} entries, "
                f"data.n_features is {self.n_features}"
            )

    @property
    def n_val(self) -> int:
        """Validation rows: round(val_fraction * n_train), at least 2."""
        return max(2, round(self.val_fraction * self.n_train))

    @property
    def has_weighted_methods(self) -> bool:
        return any(method in WEIGHTED_METHODS for method in self.methods)

    def scorer_params(self, name: str) -> dict[str, Any]:
        """Keyword arguments for ``fit_scorer(name, ...)``."""
        return {
            "knn": {"k": self.knn_k},
            "histogram": {"bins": self.histogram_bins},
            "mahalanobis": {"ridge": self.mahalanobis_ridge},
        }[name]

    def with_changes(self, **changes: Any) -> "ExperimentSpec":
        return replace(self, **changes)

    def to_dict(self) -> dict[str, Any]:
        """Nested dict in the TOML section layout."""
        flat = asdict(self)
        sections: dict[str, dict[str, Any]] = {}
        for section, keys in SCHEMA.items():
            sections[section] = {}
            for key, attribute in keys.items():
                source = flat["shift"] if section == "shift" else flat
                sections[section][key] = _plain(source[attribute])
        return sections

    # -------------------------------------------------------------------------
    # Loading
    # -------------------------------------------------------------------------

    @classmethod
    def from_mapping(cls, data: Mapping[str, Any]) -> "ExperimentSpec":
        """Build a spec from nested sections, rejecting unknown keys."""
        kwargs: dict[str, Any] = {}
        shift_kwargs: dict[str, Any] = {}
        for section, values in data.items():
            if section not in SCHEMA:
                raise ConfigurationError(f"unknown section {section!r}")
            if not isinstance(values, Mapping):
                raise ConfigurationError(f"section {section!r} must be a table")
            for key, value in values.items():
                dotted = f"{section}.{key}"
                if key not in SCHEMA[section]:
                    raise ConfigurationError(f"unknown key {dotted!r}")
                target = shift_kwargs if section == "shift" else kwargs
                target[SCHEMA[section][key]] = _coerce(dotted, value)

        if shift_kwargs:
            kwargs["shift"] = ShiftSpec(
                kind=shift_kwargs.get("kind", ShiftKind.NONE),
                strength=float(shift_kwargs.get("strength", 0.0)),
                delta=tuple(float(x) for x in shift_kwargs.get("delta", ())),
            )
        return cls(**kwargs)

    @classmethod
    def from_toml(cls, path: Path | str) -> "ExperimentSpec":
        """Load a spec file; OSError propagates for unreadable paths."""
        path = Path(path)
        with path.open("rb") as handle:
            try:
                data = tomllib.load(handle)
            except tomllib.TOMLDecodeError as error:
                raise ParseError(f"invalid TOML: {error}", path=path) from error
        return cls.from_mapping(data)


# section -> {toml key: attribute}
SCHEMA: dict[str, dict[str, str]] = {
    "experiment": {
        "name": "name",
        "n_seeds": "n_seeds",
        "master_seed": "master_seed",
        "alpha": "alpha",
        "methods": "methods",
        "pruning": "pruning",
    },
    "data": {
        "n_train": "n_train",
        "n_cal": "n_cal",
        "n_test": "n_test",
        "n_features": "n_features",
        "anomaly_rate": "anomaly_rate",
        "val_fraction": "val_fraction",
        "anomaly_shift": "anomaly_shift",
        "anomaly_scale": "anomaly_scale",
        "mixture_separation": "mixture_separation",
    },
    "shift": {"kind": "kind", "strength": "strength", "delta": "delta"},
    "weights": {
        "source": "weight_source",
        "classifier": "classifier",
        "n_bootstrap": "n_bootstrap",
        "gamma": "gamma",
    },
    "scorers": {
        "candidates": "scorers",
        "knn_k": "knn_k",
        "histogram_bins": "histogram_bins",
        "mahalanobis_ridge": "mahalanobis_ridge",
    },
}

_INT_KEYS = {
    "experiment.n_seeds",
    "experiment.master_seed",
    "data.n_train",
    "data.n_cal",
    "data.n_test",
    "data.n_features",
    "weights.n_bootstrap",
    "scorers.knn_k",
    "scorers.histogram_bins",
}
_LIST_KEYS = {
    "experiment.methods",
    "experiment.pruning",
    "scorers.candidates",
    "shift.delta",
}
_STR_KEYS = {"experiment.name", "shift.kind", "weights.source", "weights.classifier"}


def load_spec(path: Path | str) -> ExperimentSpec:
    return ExperimentSpec.from_toml(path)


def _coerce(dotted: str, value: Any) -> Any:
    if isinstance(value, bool):
        raise ConfigurationError(f"{dotted} must not be a boolean")
    if dotted in _INT_KEYS:
        if not isinstance(value, int):
            raise ConfigurationError(f"{dotted} must be an integer, got {value!r}")
        return value
    if dotted in _STR_KEYS:
        if not isinstance(value, str):
            raise ConfigurationError(f"{dotted} must be a string, got {value!r}")
        return value
    if dotted in _LIST_KEYS:
        if isinstance(value, str) and dotted == "experiment.pruning":
            return (value,)
        if not isinstance(value, list):
            raise ConfigurationError(f"{dotted} must be a list, got {value!r}")
        if dotted == "shift.delta" and not all(
            isinstance(x, (int, float)) and not isinstance(x, bool) for x in value
        ):
            raise ConfigurationError(f"{dotted} must be a list of numbers")
        return tuple(value)
    if not isinstance(value, (int, float)):
        raise ConfigurationError(f"{dotted} must be a number, got {value!r}")
    return float(value)


def _plain(value: Any) -> Any:
    if isinstance(value, tuple):
        return [_plain(item) for item in value]
    if isinstance(value, StrEnum):
        return str(value)
    return value


def _enum(enum_type: type[StrEnum], value: Any, dotted: str) -> Any:
    try:
        return enum_type(value)
    except ValueError as error:
        choices = ", ".join(str(member) for member in enum_type)
        raise ConfigurationError(
            f"{dotted} must be one of {choices}, got {value!r}"
        ) from error


def _methods(values: Any) -> tuple[Methods, ...]:
    requested = {_enum(Methods, value, "experiment.methods") for value in values}
    if not requested:
        raise ConfigurationError("experiment.methods must not be empty")
    return tuple(method for method in METHOD_ORDER if method in requested)


def _pruning(values: Any) -> tuple[Pruning, ...]:
    if isinstance(values, str):
        values = (values,)
    requested = {
        PRUNING_ALIASES.get(value, None) or _enum(Pruning, value, "experiment.pruning")
        for value in values
    }
    if not requested:
        raise ConfigurationError("experiment.pruning must not be empty")
    return tuple(strategy for strategy in PRUNING_ORDER if strategy in requested)
