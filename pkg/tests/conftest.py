#!/usr/bin/env python3
"""
Shared pytest fixtures for confshift tests.

FIXTURE CATEGORIES:
==================
1. Path fixtures - root_dir, temp_dir, config_dir
2. Score fixtures - small hand-built calibration/test score sets
3. File fixtures - score CSVs, feature CSVs and p-value files on disk
4. Spec fixtures - tiny experiment specs that run in well under a second

USAGE:
======
    def test_something(tiny_spec, score_csv):
        # fixtures are injected by name
        pass
"""

import textwrap
from pathlib import Path

import numpy as np
import pytest

from confshift.simulation.spec import ExperimentSpec, ShiftKind, ShiftSpec

# =============================================================================
# Path Fixtures
# =============================================================================


@pytest.fixture
def root_dir() -> Path:
    """Repository root directory."""
    return Path(__file__).parent.parent.resolve()


@pytest.fixture
def temp_dir(tmp_path) -> Path:
    """Temporary directory for test artifacts, cleaned up after each test."""
    return tmp_path


@pytest.fixture
def config_dir(root_dir) -> Path:
    """Shipped experiment specs."""
    return root_dir / "config"


# =============================================================================
# Score Fixtures
# =============================================================================


@pytest.fixture
def calib_scores() -> np.ndarray:
    """Ten distinct calibration scores 1..10."""
    return np.arange(1.0, 11.0)


@pytest.fixture
def test_scores() -> np.ndarray:
    """Test scores below, inside, tied with and above the calibration range."""
    return np.array([0.5, 5.0, 10.0, 50.0])


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)


# =============================================================================
# File Fixtures
# =============================================================================


@pytest.fixture
def score_csv(temp_dir) -> Path:
    """Score file with 5 calibration rows and 4 labelled test rows."""
    path = temp_dir / "scores.csv"
    path.write_text(
        textwrap.dedent(
            """\
            score,label,split
            1.0,,calib
            2.0,,calib
            3.0,,calib
            4.0,,calib
            5.0,,calib
            0.5,0,test
            2.5,0,test
            4.5,0,test
            9.0,1,test
            """
        ),
        encoding="utf-8",
    )
    return path


@pytest.fixture
def feature_csvs(temp_dir, rng) -> tuple[Path, Path]:
    """Calibration and mean-shifted test feature CSVs with a header row."""
    calib = rng.normal(size=(60, 2))
    test = rng.normal(loc=0.8, size=(40, 2))
    paths = (temp_dir / "calib.csv", temp_dir / "test.csv")
    for path, rows in zip(paths, (calib, test)):
        lines = ["x1,x2"] + [f"{a:.17g},{b:.17g}" for a, b in rows]
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return paths


@pytest.fixture
def pvalue_csv(temp_dir) -> Path:
    """Discrete p-value file with two clear discoveries among five points."""
    path = temp_dir / "pvalues.csv"
    path.write_text(
        textwrap.dedent(
            """\
            index,p_value,method,seed
            0,0.001,discrete,
            1,0.002,discrete,
            2,0.5,discrete,
            3,0.7,discrete,
            4,0.9,discrete,
            """
        ),
        encoding="utf-8",
    )
    return path


# =============================================================================
# Spec Fixtures
# =============================================================================


@pytest.fixture
def tiny_spec() -> ExperimentSpec:
    """Two seeds on small data; every method, oracle weights."""
    return ExperimentSpec(
        name="tiny",
        n_seeds=2,
        master_seed=3,
        n_train=60,
        n_cal=40,
        n_test=30,
        n_features=2,
        anomaly_rate=0.1,
        anomaly_shift=5.0,
        weight_source="oracle",
        shift=ShiftSpec(ShiftKind.LOCALIZATION, strength=0.5),
        scorers=("knn", "mahalanobis"),
        knn_k=3,
    )
