"""Numerical laboratory for prime geodesic theorems on rank-one locally symmetric spaces."""

__version__ = "0.1.0"

from .chebyshev import li, pi_gamma, psi0, psi_j
from .core import (MODULAR_SURFACE, Channel, ExceptionalReport, GeodesicRecord,
                   IncompleteDataError, LengthSpectrum, ManifoldParams, Singularity,
                   SingularityCatalog, SmoothingPlan, Theorem4Config, ValidationError,
                   validate_catalog)
from .experiments import fit_exponent, pgt_compare
from .explicit import explicit_psi_j, explicit_psi_nminus1, weyl_sample
from .gallagher import (converge_check, exceptional_report, exponent_sequence,
                        forward_difference, smooth_psi0_estimate, solve_plan,
                        unconditional_psi0)
from .spectrum import brute_force_spectrum, enumerate_spectrum

__all__ = [
    "MODULAR_SURFACE", "Channel", "ExceptionalReport", "GeodesicRecord", "IncompleteDataError",
    "LengthSpectrum", "ManifoldParams", "Singularity", "SingularityCatalog", "SmoothingPlan",
    "Theorem4Config", "ValidationError", "brute_force_spectrum", "converge_check",
    "enumerate_spectrum", "exceptional_report", "explicit_psi_j", "explicit_psi_nminus1",
    "exponent_sequence", "fit_exponent", "forward_difference", "li", "pgt_compare",
    "pi_gamma", "psi0", "psi_j", "smooth_psi0_estimate", "solve_plan", "unconditional_psi0",
    "validate_catalog", "weyl_sample",
]
