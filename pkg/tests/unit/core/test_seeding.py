#!/usr/bin/env python3
"""
Unit tests for confshift.core.seeding.
"""

import numpy as np
import pytest

from confshift.core.result import ConfigurationError
from confshift.core.seeding import check_seed, derive_seed, make_rng


def test_derive_seed_is_deterministic():
    assert derive_seed(7, 1, 2) == derive_seed(7, 1, 2)


def test_derive_seed_separates_keys():
    seeds = {derive_seed(7), derive_seed(7, 0), derive_seed(7, 1), derive_seed(8, 0)}
    assert len(seeds) == 4


def test_derive_seed_is_uint32():
    seed = derive_seed(2**40, 3)
    assert 0 <= seed < 2**32


def test_make_rng_reproduces_stream():
    first = make_rng(11).random(5)
    second = make_rng(11).random(5)
    np.testing.assert_array_equal(first, second)


@pytest.mark.parametrize("bad", [-1, 1.5, "3", True, None])
def test_check_seed_rejects(bad):
    with pytest.raises(ConfigurationError):
        check_seed(bad)


def test_check_seed_accepts_numpy_integers():
    assert check_seed(np.int64(5)) == 5
