"""Exact numerical analysis of coherent systems on nodal curves of compact type."""

from __future__ import annotations

__version__ = "0.1.0"

from .curve import NodalCurve, build_curve, curve_from_json, subcurve, subcurve_data
from .errors import BoundsError, CohsysError, ValidationError
from .sheaf import SheafClass, chi_total, locally_free, make_sheaf, w_deg, w_rank
from .stability import Bounds, SubsystemCandidate, SystemType, alpha_g, check_alpha, walls

__all__ = [
    "Bounds",
    "BoundsError",
    "CohsysError",
    "NodalCurve",
    "SheafClass",
    "SubsystemCandidate",
    "SystemType",
    "ValidationError",
    "alpha_g",
    "build_curve",
    "check_alpha",
    "chi_total",
    "curve_from_json",
    "locally_free",
    "make_sheaf",
    "subcurve",
    "subcurve_data",
    "w_deg",
    "w_rank",
    "walls",
]
