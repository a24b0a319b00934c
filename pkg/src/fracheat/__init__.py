"""Fully fractional heat potentials and the blow-up/boundedness phase plane.

The package evaluates the space-time potential that inverts the operator
(d/dt - Laplace)^alpha, classifies nonlinearity exponents (lambda, sigma)
into their qualitative regimes, computes the sharp pointwise-bound
constants, constructs the explicit solution families behind the sharpness
and blow-up results, and numerically certifies candidate pairs against the
inequality system

    0 <= f <= K1 (J_beta g)^lambda,   0 <= g <= K2 (J_alpha f)^sigma,

with f = g = 0 for t < 0.
"""

from fracheat.errors import (
    DomainError,
    InfeasibleConstructionError,
    QuadratureFailure,
    UnsupportedShapeError,
)
from fracheat.params import (
    ProblemParams,
    Region,
    Outcome,
    RegimeReport,
    ValidityClass,
    blowup_exponents,
    classify_region,
    critical_point,
    mu,
    normalize,
    nu,
    validity_class,
)
from fracheat.bounds import SharpConstants, sharp_constants

__all__ = [
    "DomainError",
    "InfeasibleConstructionError",
    "QuadratureFailure",
    "UnsupportedShapeError",
    "ProblemParams",
    "Region",
    "Outcome",
    "RegimeReport",
    "ValidityClass",
    "blowup_exponents",
    "classify_region",
    "critical_point",
    "mu",
    "normalize",
    "nu",
    "validity_class",
    "SharpConstants",
    "sharp_constants",
]
