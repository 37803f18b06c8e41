"""Magnetomechanical coupling of a superconducting strip to a flux-tunable circuit.

The library computes how strongly the motion of a thin superconducting strip
in the Meissner state, mounted on a cantilever and placed in a field
gradient, modulates the flux through a nearby pick-up coil, and what that
means for a transmon-type circuit: coupling rates, cooperativity, noise and
heating budgets. Finite strip length is handled by magnetic energy
minimisation and finite penetration depth by a thin-film London solve.
"""

from .domain import (
    FLUX_QUANTUM,
    CantileverSpec,
    CoilSpec,
    ConfigurationError,
    DomainError,
    NumericalError,
    StripSpec,
    ValidationReport,
    effective_mass,
    validate_strip,
    zero_point_motion,
)
from .strip import (
    StripState,
    b_field,
    chi,
    eta,
    eta_star,
    max_gradient,
    max_homogeneous_field,
    optimal_coil_width,
    pickup_flux,
    sheet_current,
    vector_potential,
)

__version__ = "0.1.0"

__all__ = [
    "FLUX_QUANTUM", "CantileverSpec", "CoilSpec", "ConfigurationError", "DomainError",
    "NumericalError", "StripSpec", "StripState", "ValidationReport", "b_field", "chi",
    "effective_mass", "eta", "eta_star", "max_gradient", "max_homogeneous_field",
    "optimal_coil_width", "pickup_flux", "sheet_current", "validate_strip", "vector_potential",
    "zero_point_motion",
]
