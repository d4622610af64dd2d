"""Orthonormal associated Legendre functions at large degree and order.

Evaluates the L2-normalized functions Pbar^m_N on [-1, 1]
(int_{-1}^{1} Pbar^m_N(x)^2 dx = 1, positive near x = 1) by the
fixed-order ascending-degree three-term recurrence, seeded in log space
so that the (1-x^2)^(m/2) factor never underflows.  Values are carried
as mantissa/decimal-exponent pairs (`ScaledValue`); a vectorized variant
evaluates all orders at one point for the latitude-circle measures.

Ladder sequences hold the ratio c = 2 m0 / (2 N0 + 1) exactly fixed:
member k is (m_k, N_k) = ((2k+1) m0, (2k+1) N0 + k).
"""

import math
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

MAX_DEGREE = 10**6

_LN10 = math.log(10.0)
_RENORM_HI = 1e140
_RENORM_LO = 1e-140
_RENORM_STEP = 280  # decimal digits shifted per renormalization

# test hook: relative perturbation applied to the degree-recurrence
# coefficient a_{l,m}; see `perturbed_recurrence`
_COEFF_PERTURBATION = 0.0


@contextmanager
def perturbed_recurrence(eps):
    """Test hook: corrupt the recurrence coefficients by a relative eps.

    Intended only for fault-injection in self tests; not thread safe.
    """
    global _COEFF_PERTURBATION
    old = _COEFF_PERTURBATION
    _COEFF_PERTURBATION = eps
    try:
        yield
    finally:
        _COEFF_PERTURBATION = old


@dataclass(frozen=True)
class ScaledValue:
    """A real number as mantissa * 10^exp10.

    Keeps quantities representable far outside the double range.  The
    canonical zero is (0.0, 0); renormalization keeps |mantissa| within
    [1e-140, 1e140] and moves the excess into the decimal exponent.
    """

    mantissa: float
    exp10: int = 0

    @staticmethod
    def zero():
        return ScaledValue(0.0, 0)

    @staticmethod
    def from_float(v):
        if v == 0.0:
            return ScaledValue.zero()
        return ScaledValue(float(v), 0).normalized()

    @staticmethod
    def from_log10(sign, log10_magnitude):
        """Build sign * 10^log10_magnitude."""
        if sign == 0:
            return ScaledValue.zero()
        e = int(math.floor(log10_magnitude))
        man = 10.0 ** (log10_magnitude - e)
        return ScaledValue(math.copysign(man, sign), e)

    def normalized(self):
        man, e = self.mantissa, self.exp10
        if man == 0.0:
            return ScaledValue.zero()
        while abs(man) > _RENORM_HI:
            man *= 10.0 ** (-_RENORM_STEP)
            e += _RENORM_STEP
        while abs(man) < _RENORM_LO:
            man *= 10.0 ** _RENORM_STEP
            e -= _RENORM_STEP
        return ScaledValue(man, e)

    @property
    def value(self):
        """Collapse to a float; 0.0 on underflow, +-inf on overflow."""
        if self.mantissa == 0.0 or self.exp10 == 0:
            return self.mantissa
        log10v = self.exp10 + math.log10(abs(self.mantissa))
        if log10v < -320.0:
            return math.copysign(0.0, self.mantissa)
        if log10v > 308.0:
            return math.copysign(math.inf, self.mantissa)
        return self.mantissa * 10.0 ** self.exp10

    def __float__(self):
        return self.value

    def log10_abs(self):
        """log10 |value|; -inf for zero."""
        if self.mantissa == 0.0:
            return -math.inf
        return self.exp10 + math.log10(abs(self.mantissa))

    @property
    def sign(self):
        if self.mantissa > 0.0:
            return 1
        if self.mantissa < 0.0:
            return -1
        return 0

    def scaled_by(self, factor):
        if factor == 0.0 or self.mantissa == 0.0:
            return ScaledValue.zero()
        return ScaledValue(self.mantissa * factor, self.exp10).normalized()


@dataclass(frozen=True)
class Ladder:
    """Family of (order, degree) pairs with 2 m_k / (2 N_k + 1) fixed."""

    m0: int
    N0: int

    def __post_init__(self):
        if self.m0 < 0 or self.N0 < self.m0 or self.N0 < 1:
            raise ValueError("ladder requires 0 <= m0 <= N0 and N0 >= 1")

    @property
    def c(self) -> Fraction:
        return Fraction(2 * self.m0, 2 * self.N0 + 1)

    @property
    def c_float(self) -> float:
        return 2 * self.m0 / (2 * self.N0 + 1)

    def member(self, k):
        return ladder_member(self, k)


@dataclass(frozen=True)
class LadderMember:
    """One rung: order m, degree N, semiclassical parameter h = 1/(N+1/2)."""

    m: int
    N: int

    @property
    def h(self) -> float:
        return 2.0 / (2 * self.N + 1)

    @property
    def parity_odd(self) -> bool:
        """True when N - m is odd (the mode vanishes at the equator)."""
        return (self.N - self.m) % 2 == 1


def ladder_member(ladder: Ladder, k: int) -> LadderMember:
    """Member k of the ladder, in exact integer arithmetic."""
    if k < 0:
        raise ValueError("ladder index must be nonnegative")
    m = (2 * k + 1) * ladder.m0
    N = (2 * k + 1) * ladder.N0 + k
    if N > MAX_DEGREE:
        raise ValueError(f"ladder member degree {N} exceeds {MAX_DEGREE}")
    return LadderMember(m=m, N=N)


def _check_degree_order(N, m):
    if N < 0 or N > MAX_DEGREE:
        raise ValueError(f"degree must be in [0, {MAX_DEGREE}]")
    if m < 0 or m > N:
        raise ValueError("order exceeds degree")


def _seed_log(m, s2):
    """ln |Pbar^m_m(x)| given s2 = 1 - x^2 > 0."""
    val = 0.5 * (math.log(0.5 * (2 * m + 1)) + math.lgamma(2 * m + 1)
                 - 2.0 * math.lgamma(m + 1) - m * math.log(4.0))
    return val + 0.5 * m * math.log(s2)


def _rec_a(l, m):
    a = math.sqrt((2.0 * l - 1.0) * (2.0 * l + 1.0) / ((l - m) * (l + m)))
    return a * (1.0 + _COEFF_PERTURBATION)


def _rec_b(l, m):
    return math.sqrt((2.0 * l + 1.0) / (2.0 * l - 3.0)
                     * ((l - 1.0) ** 2 - m * m) / (l * l - m * m))


def legendre_assoc_norm(N: int, m: int, x: float) -> ScaledValue:
    """Orthonormal associated Legendre function Pbar^m_N(x).

    Ascending-degree recurrence at fixed order, with renormalized
    mantissa/exponent bookkeeping.  Relative accuracy is 1e-10 or better
    for N <= 1e4 and x away from the endpoints.
    """
    _check_degree_order(N, m)
    if not abs(x) <= 1.0:
        raise ValueError("argument must lie in [-1, 1]")
    s2 = 1.0 - x * x
    if s2 <= 0.0:
        # x = +-1: only m = 0 survives, Pbar^0_N(+-1) = (+-1)^N sqrt(N+1/2)
        if m > 0:
            return ScaledValue.zero()
        v = math.sqrt(N + 0.5)
        return ScaledValue.from_float(v if (x > 0.0 or N % 2 == 0) else -v)
    ln_seed = _seed_log(m, s2)
    sv = ScaledValue.from_log10(1.0, ln_seed / _LN10)
    if N == m:
        return sv
    man, e = sv.mantissa, sv.exp10
    man1 = math.sqrt(2.0 * m + 3.0) * x * man  # degree m+1
    man2 = man
    for l in range(m + 2, N + 1):
        man1, man2 = _rec_a(l, m) * x * man1 - _rec_b(l, m) * man2, man1
        a1 = abs(man1)
        if a1 > _RENORM_HI or (0.0 < a1 < _RENORM_LO):
            shift = -_RENORM_STEP if a1 > _RENORM_HI else _RENORM_STEP
            scale = 10.0 ** shift
            man1 *= scale
            man2 *= scale
            e -= shift
    return ScaledValue(man1, e).normalized()


def legendre_assoc_norm_batch(N, m, xs):
    """Pbar^m_N at many points; returns (mantissa, exp10) arrays.

    Same recurrence as the scalar path, vectorized over x with a shared
    per-point decimal exponent.  Points with |x| = 1 are handled by the
    endpoint rule.
    """
    _check_degree_order(N, m)
    xs = np.asarray(xs, dtype=np.float64)
    if np.any(np.abs(xs) > 1.0):
        raise ValueError("arguments must lie in [-1, 1]")
    man = np.zeros_like(xs)
    e10 = np.zeros(xs.shape, dtype=np.int64)
    s2 = 1.0 - xs * xs
    interior = s2 > 0.0
    if m == 0:
        man[~interior] = np.where(
            (xs[~interior] > 0) | (N % 2 == 0), math.sqrt(N + 0.5), -math.sqrt(N + 0.5))
    if np.any(interior):
        xi = xs[interior]
        ln_seed = np.array([_seed_log(m, v) for v in s2[interior]])
        log10 = ln_seed / _LN10
        ei = np.floor(log10).astype(np.int64)
        mi = 10.0 ** (log10 - ei)
        if N > m:
            m1 = math.sqrt(2.0 * m + 3.0) * xi * mi
            m2 = mi
            for l in range(m + 2, N + 1):
                m1, m2 = _rec_a(l, m) * xi * m1 - _rec_b(l, m) * m2, m1
                a1 = np.abs(m1)
                big = a1 > _RENORM_HI
                small = (a1 < _RENORM_LO) & (a1 > 0.0)
                if big.any():
                    m1[big] *= 10.0 ** (-_RENORM_STEP)
                    m2[big] *= 10.0 ** (-_RENORM_STEP)
                    ei[big] += _RENORM_STEP
                if small.any():
                    m1[small] *= 10.0 ** _RENORM_STEP
                    m2[small] *= 10.0 ** _RENORM_STEP
                    ei[small] -= _RENORM_STEP
            mi = m1
        man[interior] = mi
        e10[interior] = ei
    return man, e10


def collapse_scaled(man, e10):
    """Collapse (mantissa, exp10) arrays to floats, flushing underflow to 0."""
    man = np.asarray(man, dtype=np.float64)
    e10 = np.asarray(e10)
    out = np.array(man, copy=True)
    off = e10 != 0
    if np.any(off):
        ecl = np.clip(e10[off].astype(np.float64), -320.0, 308.0)
        out[off] = man[off] * 10.0 ** ecl
    return out


def legendre_all_orders(N: int, x: float) -> np.ndarray:
    """Pbar^m_N(x) for every order m = 0..N, as floats.

    Ascending-degree recurrence with all order columns updated at once,
    each column carrying its own decimal exponent.  Orders whose value
    lies below the double range come back as exact zeros.
    """
    _check_degree_order(N, 0)
    if not abs(x) <= 1.0:
        raise ValueError("argument must lie in [-1, 1]")
    s2 = 1.0 - x * x
    if s2 <= 0.0:
        out = np.zeros(N + 1)
        out[0] = math.sqrt(N + 0.5) * (1.0 if (x > 0.0 or N % 2 == 0) else -1.0)
        return out
    s = math.sqrt(s2)
    man1 = np.zeros(N + 1)  # degree l-1, indexed by order
    man2 = np.zeros(N + 1)  # degree l-2
    e10 = np.zeros(N + 1, dtype=np.int64)
    man1[0] = math.sqrt(0.5)
    perturb = 1.0 + _COEFF_PERTURBATION
    morders = np.arange(N + 1, dtype=np.float64)
    for l in range(1, N + 1):
        lf = float(l)
        new = np.empty(l + 1)
        if l >= 2:
            mm = morders[:l - 1]
            a = perturb * np.sqrt((2 * lf - 1.0) * (2 * lf + 1.0)
                                  / ((lf - mm) * (lf + mm)))
            b = np.sqrt((2 * lf + 1.0) / (2 * lf - 3.0)
                        * ((lf - 1.0) ** 2 - mm * mm) / (lf * lf - mm * mm))
            new[:l - 1] = a * x * man1[:l - 1] - b * man2[:l - 1]
        new[l - 1] = math.sqrt(2 * lf + 1.0) * x * man1[l - 1]
        new[l] = math.sqrt((2 * lf + 1.0) / (2 * lf)) * s * man1[l - 1]
        e10[l] = e10[l - 1]
        man2[:l + 1] = man1[:l + 1]
        man1[:l + 1] = new
        a1 = np.abs(man1[:l + 1])
        big = a1 > _RENORM_HI
        small = (a1 < _RENORM_LO) & (a1 > 0.0)
        if big.any():
            man1[:l + 1][big] *= 10.0 ** (-_RENORM_STEP)
            man2[:l + 1][big] *= 10.0 ** (-_RENORM_STEP)
            e10[:l + 1][big] += _RENORM_STEP
        if small.any():
            man1[:l + 1][small] *= 10.0 ** _RENORM_STEP
            man2[:l + 1][small] *= 10.0 ** _RENORM_STEP
            e10[:l + 1][small] -= _RENORM_STEP
    return collapse_scaled(man1, e10)


def mode_u(member: LadderMember, phi: float) -> ScaledValue:
    """Latitude mode u(phi) = sqrt(sin phi) * Pbar^m_N(cos phi).

    This is the exact function that the WKB and Airy leading terms
    approximate; phi must lie strictly inside (0, pi).
    """
    if not 0.0 < phi < math.pi:
        raise ValueError("phi must lie in the open interval (0, pi)")
    p = legendre_assoc_norm(member.N, member.m, math.cos(phi))
    return p.scaled_by(math.sqrt(math.sin(phi)))


def mode_u_batch(member: LadderMember, phis):
    """mode_u on an array of angles; returns (mantissa, exp10) arrays."""
    phis = np.asarray(phis, dtype=np.float64)
    if np.any((phis <= 0.0) | (phis >= math.pi)):
        raise ValueError("phi values must lie in the open interval (0, pi)")
    man, e10 = legendre_assoc_norm_batch(member.N, member.m, np.cos(phis))
    return man * np.sqrt(np.sin(phis)), e10


def sph_harm_sq(N: int, m: int, phi: float) -> float:
    """Squared magnitude of the degree-N order-m spherical harmonic.

    Polar-angle dependence only (the azimuthal phase has unit modulus):
    |Y^m_N|^2 = Pbar^{|m|}_N(cos phi)^2 / (2 pi), which sums over m to
    (2N+1)/(4 pi) and integrates to 1 over the sphere.
    """
    if not 0.0 < phi < math.pi:
        raise ValueError("phi must lie in the open interval (0, pi)")
    ma = abs(m)
    _check_degree_order(N, ma)
    p = legendre_assoc_norm(N, ma, math.cos(phi))
    log10_sq = 2.0 * p.log10_abs()
    if log10_sq == -math.inf or log10_sq < -320.0:
        return 0.0
    return (p.mantissa * p.mantissa) * 10.0 ** (2 * p.exp10) / (2.0 * math.pi)


def sph_harm_sq_sum(N: int, phi: float) -> float:
    """Sum of sph_harm_sq over m = -N..N (equals (2N+1)/(4 pi))."""
    if not 0.0 < phi < math.pi:
        raise ValueError("phi must lie in the open interval (0, pi)")
    vals = legendre_all_orders(N, math.cos(phi))
    sq = vals * vals
    return (2.0 * sq[1:].sum() + sq[0]) / (2.0 * math.pi)


@dataclass(frozen=True)
class OdeResidual:
    """Normalized residual of the defining ODE plus a rounding-floor flag."""

    value: float
    rounding_floor: float

    @property
    def rounding_dominated(self) -> bool:
        return self.value < 3.0 * self.rounding_floor


def ode_residual(N: int, m: int, x: float, step: float) -> OdeResidual:
    """Certify the evaluation engine by the second-order ODE it satisfies.

    (1-x^2) P'' - 2x P' + ((N+1/2)^2 - m^2/(1-x^2) - 1/4) P = 0, with the
    derivatives formed by central differences plus one Richardson
    extrapolation (net order 4), normalized by (N+1/2)^2 |P(x)|.  The
    finite differences are independent of the recurrence under test.
    """
    _check_degree_order(N, m)
    if not abs(x) <= 0.9:
        raise ValueError("residual check requires |x| <= 0.9")
    if not 0.0 < step <= 1e-3:
        raise ValueError("step must lie in (0, 1e-3]")
    h = step
    vals = {d: legendre_assoc_norm(N, m, x + d * h).value
            for d in (-2, -1, 0, 1, 2)}
    p0 = vals[0]
    d1_h = (vals[1] - vals[-1]) / (2 * h)
    d1_2h = (vals[2] - vals[-2]) / (4 * h)
    d1 = (4.0 * d1_h - d1_2h) / 3.0
    d2_h = (vals[1] - 2 * p0 + vals[-1]) / (h * h)
    d2_2h = (vals[2] - 2 * p0 + vals[-2]) / (4 * h * h)
    d2 = (4.0 * d2_h - d2_2h) / 3.0
    lam = (N + 0.5) ** 2
    resid = ((1.0 - x * x) * d2 - 2.0 * x * d1
             + (lam - m * m / (1.0 - x * x) - 0.25) * p0)
    scale = lam * abs(p0)
    pmax = max(abs(v) for v in vals.values())
    floor = 16.0 * np.finfo(float).eps * pmax / (h * h) / max(scale, 1e-300)
    return OdeResidual(value=abs(resid) / max(scale, 1e-300),
                       rounding_floor=floor)
