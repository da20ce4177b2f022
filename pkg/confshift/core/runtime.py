#!/usr/bin/env python3
"""Runtime knobs read from the environment.

``CONFSHIFT_THREADS`` caps internal parallelism for bootstrap replicas and
simulation trials. ``0`` or unset means "use every core" (joblib's ``-1``).
"""

import os
from typing import Optional

from confshift.core.result import ConfigurationError

THREADS_ENV = "CONFSHIFT_THREADS"


def resolve_n_jobs(explicit: Optional[int] = None) -> int:
    """Return the joblib ``n_jobs`` value to use.

    Args:
        explicit: Caller override; takes precedence over the environment.
            ``0`` means auto, like the environment variable.

    Returns:
        ``-1`` for auto, otherwise a positive worker count
    """
    if explicit is not None:
        raw = explicit
    else:
        env_value = os.environ.get(THREADS_ENV, "").strip()
        if not env_value:
            return -1
        try:
            raw = int(env_value)
        except ValueError as error:
            raise ConfigurationError(
                f"{THREADS_ENV} must be an integer, got {env_value!r}"
            ) from error

    if raw < 0:
        raise ConfigurationError(f"thread count must be >= 0, got {raw}")
    return -1 if raw == 0 else raw
