"""Numerical radius and seminorm computations on semi-Hilbert spaces ``(C^d, <A., .>)``."""

from .errors import SemiOpError
from .linalg import RadiusResult, numerical_radius, op_norm, spectral_radius_est
from .semi import (
    SemiContext,
    a_adjoint,
    a_inner,
    a_numerical_radius,
    a_seminorm,
    a_spectral_radius,
    w_a,
)

__all__ = [
    "RadiusResult",
    "SemiContext",
    "SemiOpError",
    "a_adjoint",
    "a_inner",
    "a_numerical_radius",
    "a_seminorm",
    "a_spectral_radius",
    "numerical_radius",
    "op_norm",
    "spectral_radius_est",
    "w_a",
]
__version__ = "0.1.0"
