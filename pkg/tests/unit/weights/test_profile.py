#!/usr/bin/env python3
"""
Unit tests for confshift.weights.profile and diagnostics.
"""

import numpy as np
import pytest

from confshift.core.result import ConfigurationError, DomainError, ParseError
from confshift.weights.diagnostics import effective_sample_size, max_weight_share
from confshift.weights.profile import WeightProfile


@pytest.fixture
def profile() -> WeightProfile:
    return WeightProfile(
        calib_weights=np.array([0.5, 1.0, 2.0]),
        test_weights=np.array([1.0, 2.0]),
        clip_lo=0.5,
        clip_hi=2.0,
        n_bootstrap=5,
        gamma=0.05,
        seed=7,
        classifier="forest",
    )


def test_effective_sample_size():
    assert effective_sample_size(np.ones(10)) == pytest.approx(10.0)
    assert effective_sample_size([1.0, 0.0, 0.0]) == pytest.approx(1.0)
    assert effective_sample_size([1e300, 1e300]) == pytest.approx(2.0)


def test_effective_sample_size_rejects_bad_weights():
    with pytest.raises(DomainError):
        effective_sample_size([0.0, 0.0])
    with pytest.raises(DomainError):
        effective_sample_size([1.0, -1.0])


def test_max_weight_share():
    assert max_weight_share([1.0, 1.0, 2.0]) == pytest.approx(0.5)


def test_unit_profile():
    unit = WeightProfile.unit(4, 3)

    assert unit.n_eff == pytest.approx(4.0)
    assert unit.source == "unit"


def test_json_file_preserves_fingerprint(profile, temp_dir):
    path = temp_dir / "weights.json"
    profile.write_json(path)

    loaded = WeightProfile.read_json(path)
    assert loaded.fingerprint() == profile.fingerprint()
    assert loaded.seed == 7
    assert loaded.classifier == "forest"


def test_fingerprint_sees_every_weight(profile):
    changed = WeightProfile.from_dict(
        profile.to_dict() | {"test_weights": [1.0, 1.5]}
    )
    assert changed.fingerprint() != profile.fingerprint()


def test_weights_must_respect_clip_bounds():
    with pytest.raises(DomainError, match="clip bounds"):
        WeightProfile(
            calib_weights=[3.0], test_weights=[1.0], clip_lo=0.5, clip_hi=2.0,
            n_bootstrap=1, gamma=0.0,
        )


def test_invalid_gamma():
    with pytest.raises(ConfigurationError):
        WeightProfile(
            calib_weights=[1.0], test_weights=[1.0], clip_lo=1.0, clip_hi=1.0,
            n_bootstrap=1, gamma=0.5,
        )


def test_missing_key(temp_dir):
    path = temp_dir / "weights.json"
    path.write_text('{"calib_weights": [1.0]}', encoding="utf-8")

    with pytest.raises(ParseError, match="test_weights"):
        WeightProfile.read_json(path)


def test_invalid_json(temp_dir):
    path = temp_dir / "weights.json"
    path.write_text("{", encoding="utf-8")

    with pytest.raises(ParseError, match="invalid JSON"):
        WeightProfile.read_json(path)
