"""Ladder sequences of spherical harmonics: exact normalized Legendre
evaluation, WKB and Airy caustic asymptotics, and latitude-circle
empirical measures with their arcsine weak limit."""

from .legendre import (
    Ladder,
    LadderMember,
    ScaledValue,
    ladder_member,
    legendre_all_orders,
    legendre_assoc_norm,
    mode_u,
    ode_residual,
    sph_harm_sq,
    sph_harm_sq_sum,
)
from .measures import (
    EmpiricalMeasure,
    arcsine_limit,
    char_fn_addition,
    char_fn_direct,
    empirical_measure,
    integrate_against,
    j0_fourier_gap,
    mehler_heine_gap,
)
from .quadrature import AccuracyError, QuadratureRule, gauss_legendre, integrate
from .semiclassics import (
    ErrorTable,
    LadderGeometry,
    ScanRow,
    action,
    airy_arg_rho,
    airy_leading,
    caustic_scan,
    fit_order,
    turning_points,
    wkb_leading,
)
from .specfun import AiryPair, airy, bessel_j0, legendre_poly, log_gamma

__version__ = "0.1.0"

__all__ = [
    "AccuracyError",
    "AiryPair",
    "EmpiricalMeasure",
    "ErrorTable",
    "Ladder",
    "LadderGeometry",
    "LadderMember",
    "QuadratureRule",
    "ScaledValue",
    "ScanRow",
    "action",
    "airy",
    "airy_arg_rho",
    "airy_leading",
    "arcsine_limit",
    "bessel_j0",
    "caustic_scan",
    "char_fn_addition",
    "char_fn_direct",
    "empirical_measure",
    "fit_order",
    "gauss_legendre",
    "integrate",
    "integrate_against",
    "j0_fourier_gap",
    "ladder_member",
    "legendre_all_orders",
    "legendre_assoc_norm",
    "legendre_poly",
    "log_gamma",
    "mehler_heine_gap",
    "mode_u",
    "ode_residual",
    "sph_harm_sq",
    "sph_harm_sq_sum",
    "turning_points",
    "wkb_leading",
]
