"""Python access to the anderson-lab C++ core."""

import json as _json

from . import _core
from ._core import (
    ConfigError,
    ModelSpec,
    ScaleParams,
    efc_kernel,
    eigenvalues,
    git_blob_id,
    gri_lattice_bound,
    hamiltonian,
    hausdorff_distance,
    minimal_growth,
    sha1_hex,
    sym_distance,
)

__all__ = [
    "ConfigError",
    "ModelSpec",
    "ScaleParams",
    "efc_kernel",
    "eigenvalues",
    "experiment_kinds",
    "git_blob_id",
    "gri_lattice_bound",
    "hamiltonian",
    "hausdorff_distance",
    "minimal_growth",
    "report",
    "run_experiment",
    "sha1_hex",
    "sym_distance",
    "validate_params",
]


def experiment_kinds():
    return list(_core.experiment_kinds())


def run_experiment(config):
    """Run one experiment from a config dict; returns the result as a dict."""
    out = _core.run_experiment(_json.dumps(config))
    out["summary"] = _json.loads(out["summary"])
    return out


def report(files, out_dir=""):
    return [dict(line) for line in _core.report([str(f) for f in files], str(out_dir))]


def validate_params(params=None):
    """Check scale parameters; pass a ScaleParams or a dict of overrides."""
    if isinstance(params, ScaleParams):
        return _core.validate_params(params)
    p = ScaleParams()
    for key, value in (params or {}).items():
        if not hasattr(p, key):
            raise ValueError(f"unknown scale parameter {key!r}")
        setattr(p, key, value)
    return _core.validate_params(p)
