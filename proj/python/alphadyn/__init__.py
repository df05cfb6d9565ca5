"""Spectral toolkit for the spherically symmetric alpha^2 dynamo."""

import json as _json

from ._core import (
    DomainError,
    Harmonic,
    NumericalError,
    Perturbation,
    __version__,
    bessel_zero,
    branch_eigenvalue,
    critical_offset,
    diabolical_points,
    eigenfunction,
    eigenvalues,
    galerkin_matrix,
    spherical_bessel_j,
    sweep,
    unfold,
)
from ._core import run_command as _run_command


def run_command(command, parameters, threads=0):
    """Run a CLI command with a parameter dict; returns (output text, manifest dict)."""
    text, manifest = _run_command(command, _json.dumps(parameters), threads)
    return text, _json.loads(manifest)


__all__ = [
    "DomainError",
    "Harmonic",
    "NumericalError",
    "Perturbation",
    "__version__",
    "bessel_zero",
    "branch_eigenvalue",
    "critical_offset",
    "diabolical_points",
    "eigenfunction",
    "eigenvalues",
    "galerkin_matrix",
    "run_command",
    "spherical_bessel_j",
    "sweep",
    "unfold",
]
