"""Empirical measures of latitude-circle restrictions and their arcsine limit.

For fixed degree N and a latitude circle sin(phi) = c0, the normalized
empirical measure places weight w_m = Pbar^{|m|}_N(cos phi)^2 / (N+1/2)
at t_m = m/N.  As N grows these measures converge weakly to the arcsine
law on [-c0, c0]; the characteristic function route goes through the
spherical-harmonic addition theorem and the Mehler-Heine limit, which
makes the identities here strong cross-checks of the whole evaluation
stack.
"""

import math
from dataclasses import dataclass

import numpy as np

from .legendre import legendre_all_orders
from .quadrature import integrate
from .specfun import bessel_j0, legendre_poly

MAX_MEASURE_DEGREE = 10**4


@dataclass(frozen=True)
class EmpiricalMeasure:
    """Atoms (t_m = m/N, w_m) for m = -N..N at one latitude circle."""

    N: int
    c0: float
    t: np.ndarray
    w: np.ndarray

    def total_mass(self) -> float:
        return math.fsum(self.w.tolist())

    def mass_outside(self, lo: float, hi: float) -> float:
        """Total weight of atoms with t < lo or t > hi."""
        sel = (self.t < lo) | (self.t > hi)
        return math.fsum(self.w[sel].tolist())


def empirical_measure(N: int, c0: float) -> EmpiricalMeasure:
    """Build the measure for degree N at the latitude circle sin(phi) = c0.

    The evaluation point is phi = pi - arcsin(c0); by parity the other
    circle gives the identical measure.  Weights satisfy w_{-m} = w_m
    exactly and sum to 1.
    """
    if N < 1 or N > MAX_MEASURE_DEGREE:
        raise ValueError(f"degree must be in [1, {MAX_MEASURE_DEGREE}]")
    if not 0.0 < c0 < 1.0:
        raise ValueError("c0 must lie in (0, 1)")
    x = -math.sqrt(1.0 - c0 * c0)  # cos(pi - arcsin(c0))
    vals = legendre_all_orders(N, x)
    w_half = vals * vals / (N + 0.5)
    w = np.concatenate([w_half[:0:-1], w_half])
    m = np.arange(-N, N + 1)
    t = m / float(N)
    w.flags.writeable = False
    t.flags.writeable = False
    return EmpiricalMeasure(N=N, c0=c0, t=t, w=w)


def integrate_against(mu: EmpiricalMeasure, f) -> float:
    """Sum f(t_m) w_m over the atoms (ordered, compensated summation)."""
    return math.fsum(wm * f(tm) for tm, wm in zip(mu.t.tolist(), mu.w.tolist()))


def arcsine_limit(c0: float, f, tol: float = 1e-10) -> float:
    """(1/(c0 pi)) int_{-c0}^{c0} f(t) (1 - (t/c0)^2)^(-1/2) dt.

    The weak limit of the empirical measures applied to f, computed with
    square-root endpoint handling at +-c0.
    """
    if not 0.0 < c0 < 1.0:
        raise ValueError("c0 must lie in (0, 1)")

    def integrand(t):
        return f(t) / math.sqrt(1.0 - (t / c0) ** 2)

    val = integrate(integrand, -c0, c0, tol=tol,
                    endpoint_singularity="sqrt_at_both")
    return val / (c0 * math.pi)


def char_fn_direct(mu: EmpiricalMeasure, s: float) -> complex:
    """(1/2pi) sum_m w_m exp(i s t_m), directly from the atoms."""
    re = math.fsum(wm * math.cos(s * tm)
                   for tm, wm in zip(mu.t.tolist(), mu.w.tolist()))
    im = math.fsum(wm * math.sin(s * tm)
                   for tm, wm in zip(mu.t.tolist(), mu.w.tolist()))
    return complex(re, im) / (2.0 * math.pi)


def char_fn_addition(N: int, c0: float, s: float) -> float:
    """(1/2pi) P_N(1 - c0^2 (1 - cos(s/N))), via the addition theorem.

    Independent of the atom route: the same characteristic function
    expressed through the classical Legendre polynomial at the cosine of
    the rotation distance.  The argument always lies in [1 - 2 c0^2, 1].
    """
    if N < 1:
        raise ValueError("degree must be positive")
    if not 0.0 < c0 < 1.0:
        raise ValueError("c0 must lie in (0, 1)")
    arg = 1.0 - c0 * c0 * (1.0 - math.cos(s / N))
    return legendre_poly(N, arg) / (2.0 * math.pi)


def mehler_heine_gap(N: int, z: float) -> float:
    """|P_N(cos(z/N)) - J0(z)|, the high-degree Bessel limit gap."""
    if z < 0.0:
        raise ValueError("z must be nonnegative")
    if not z / N < math.pi:
        raise ValueError("z/N must be below pi")
    return abs(legendre_poly(N, math.cos(z / N)) - bessel_j0(z))


def j0_fourier_gap(t: float, S: float, tol: float = 1e-7) -> float:
    """Distance of the windowed J0 Fourier integral from 2/sqrt(1-t^2).

    Uses a triangular (Cesaro) window on [-S, S] to tame the s^(-1/2)
    oscillatory tail of J0; the untruncated transform equals
    2/sqrt(1-t^2) on (-1, 1).
    """
    if not abs(t) < 0.99:
        raise ValueError("t must satisfy |t| < 0.99")
    if S < 100.0:
        raise ValueError("truncation S must be at least 100")

    def integrand(s):
        return math.cos(s * t) * bessel_j0(s) * (1.0 - s / S)

    windowed = 2.0 * integrate(integrand, 0.0, S, tol=tol)
    return abs(windowed - 2.0 / math.sqrt(1.0 - t * t))
