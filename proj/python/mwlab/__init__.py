"""Matrix-weight laboratory: Python front end of the C++ core."""

import json

from ._mwlab import (
    ConfigError,
    Grid,
    MatrixField,
    MatrixWeight,
    SizeError,
    WeightError,
    ainfty_scalar,
    ap_characteristic,
    bloom_bmo,
    bmo_tilde,
    bmo_vu,
    commutator_norm,
    luxemburg_bump,
    luxemburg_power,
    rotated_weight,
    smooth_symbol,
    suite_names,
)
from ._mwlab import default_config as _default_config
from ._mwlab import run_suite as _run_suite


def default_config(suite):
    """Default configuration of a suite as a dict."""
    return json.loads(_default_config(suite))


def run_suite(suite, **overrides):
    """Run a verification suite; keyword arguments override config keys."""
    return json.loads(_run_suite(suite, json.dumps(overrides)))


__all__ = [
    "ConfigError",
    "Grid",
    "MatrixField",
    "MatrixWeight",
    "SizeError",
    "WeightError",
    "ainfty_scalar",
    "ap_characteristic",
    "bloom_bmo",
    "bmo_tilde",
    "bmo_vu",
    "commutator_norm",
    "default_config",
    "luxemburg_bump",
    "luxemburg_power",
    "rotated_weight",
    "run_suite",
    "smooth_symbol",
    "suite_names",
]
