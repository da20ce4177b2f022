#!/usr/bin/env python3
"""
Deterministic seed derivation.

Every random draw in confshift (data generation, bootstrap resampling, the
U_j of randomized p-values, pruning offsets) starts from an integer seed that
is derived from a master seed plus a tuple of integer counters. Derivation is
counter-based: the seed for (trial 7, method wedf_rand) does not depend on
which other trials or methods ran before it, so partial reruns and reordered
method lists reproduce the same numbers.

USAGE:
======
    from confshift.core.seeding import derive_seed, make_rng

    trial_seed = derive_seed(master_seed, seed_index)
    rng = make_rng(derive_seed(trial_seed, METHOD_STREAM[method]))
"""

import numpy as np

from confshift.core.result import ConfigurationError


def check_seed(seed: int, name: str = "seed") -> int:
    """Validate a user-supplied seed and return it as a plain int."""
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
        raise ConfigurationError(f"{name} must be an integer, got {seed!r}")
    if seed < 0:
        raise ConfigurationError(f"{name} must be non-negative, got {seed}")
    return int(seed)


def derive_seed(master_seed: int, *keys: int) -> int:
    """Mix ``master_seed`` with integer ``keys`` into a 32-bit child seed."""
    master = check_seed(master_seed, "master_seed")
    spawn_key = tuple(check_seed(key, "seed key") for key in keys)
    sequence = np.random.SeedSequence(entropy=master, spawn_key=spawn_key)
    return int(sequence.generate_state(1, dtype=np.uint32)[0])


def make_rng(seed: int) -> np.random.Generator:
    """Build a PCG64 generator from a validated seed."""
    return np.random.default_rng(check_seed(seed))
