"""Galerkin MHD on the torus: fields, bilinear maps, integration and certificates."""

import json

from ._core import (
    AdmissibilityError,
    FieldPair,
    InputError,
    NumericalError,
    RefinementError,
    SpectralField,
    Trajectory,
    P,
    P_mhd,
    P_mhd_pseudo,
    advect,
    exact_solution,
    integrate,
    leray_project,
    pair_norm,
    random_field,
    required_constant_orders,
    sobolev_norm,
    validate,
)
from . import _core

__all__ = [
    "AdmissibilityError",
    "FieldPair",
    "InputError",
    "NumericalError",
    "RefinementError",
    "SpectralField",
    "Trajectory",
    "P",
    "P_mhd",
    "P_mhd_pseudo",
    "advect",
    "analytic_constants",
    "certify",
    "exact_solution",
    "integrate",
    "leray_project",
    "make_gb_pair",
    "pair_norm",
    "random_field",
    "required_constant_orders",
    "sobolev_norm",
    "stability_radius",
    "validate",
    "verify_gb_pair",
]


def _dump(obj):
    return obj if isinstance(obj, str) else json.dumps(obj)


def make_gb_pair(spec, cutoff):
    """Build a generalized Beltrami pair; returns (pair, kappa, lambda)."""
    return _core.make_gb_pair(_dump(spec), cutoff)


def verify_gb_pair(pair):
    return json.loads(_core.verify_gb_pair(pair))


def analytic_constants(dim, orders):
    """Constants table (dict) for the given (p, n) order pairs."""
    return json.loads(_core.analytic_constants(dim, [tuple(o) for o in orders]))


def certify(approx, datum_error, n, p_list, constants, galerkin_residual=False):
    """Certificate dict; T_c is None when the bound is global."""
    return json.loads(_core.certify(approx, datum_error, n, list(p_list), _dump(constants), galerkin_residual))


def stability_radius(budget, n, mu, constants):
    return _core.stability_radius(budget, n, mu, _dump(constants))
