"""
Weighted conformal anomaly detection under covariate shift.

The package turns anomaly scores into conformal p-values that stay valid when
the test covariates are shifted away from the calibration data:
- Importance weights from a bagged probabilistic classifier
- Discrete, randomized and kernel-smoothed weighted p-values
- Benjamini-Hochberg and weighted conformal selection (WCS)
- A synthetic two-phase experiment harness with FDR validity checks

``__version__`` is derived from the installed package metadata, whose single
source is the ``version`` field in ``pyproject.toml``.
"""

from importlib.metadata import PackageNotFoundError, version as _version

try:
    __version__ = _version("confshift")
except PackageNotFoundError:  # not installed (e.g. a bare, uninstalled source tree)
    __version__ = "0.0.0+unknown"
