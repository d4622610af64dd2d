"""Scalar special functions: Airy pair, Bessel J0, Legendre polynomial, log-gamma.

The Airy evaluator is branch-based: Maclaurin series where it is
numerically safe, Poincare asymptotic expansions for large argument, and
a Taylor march down from the asymptotic anchor across the positive band
where series cancellation would otherwise destroy accuracy.  J0 is
computed from its integral representation
(1/2pi) int_{-pi}^{pi} exp(-i s sin(theta)) d(theta) for moderate
argument, so that the quadrature oracle and the implementation share the
same defining formula.
"""

import math
from dataclasses import dataclass

from .quadrature import gauss_legendre

AIRY_MAX_ARG = 1.0e4
BESSEL_MAX_ARG = 1.0e6
LEGENDRE_MAX_DEGREE = 10**6

# branch switch points for airy()
_SERIES_LO = -8.0
_SERIES_HI = 4.2
_ASYM_ANCHOR = 8.0


@dataclass(frozen=True)
class AiryPair:
    """Values of Ai and Ai' at a common argument."""

    ai: float
    ai_prime: float


def log_gamma(x: float) -> float:
    """Natural log of Gamma(x) for x > 0."""
    if not x > 0.0:
        raise ValueError("log_gamma requires a positive argument")
    return math.lgamma(x)


# Maclaurin constants Ai(0) = 3^(-2/3)/Gamma(2/3), Ai'(0) = -3^(-1/3)/Gamma(1/3)
_AI0 = 3.0 ** (-2.0 / 3.0) / math.exp(log_gamma(2.0 / 3.0))
_AIP0 = -(3.0 ** (-1.0 / 3.0)) / math.exp(log_gamma(1.0 / 3.0))


def _airy_series(x):
    # Ai = Ai(0) f(x) + Ai'(0) g(x) with f, g the two ODE power series
    x3 = x * x * x
    f = a = 1.0
    g = b = x
    fp = d = 0.5 * x * x
    gp = e = 1.0
    for k in range(1, 260):
        a *= x3 / ((3 * k - 1) * (3 * k))
        b *= x3 / ((3 * k) * (3 * k + 1))
        d *= x3 / ((3 * k + 2) * (3 * k))
        e *= x3 / ((3 * k) * (3 * k - 2))
        f += a
        g += b
        fp += d
        gp += e
        if abs(a) + abs(b) + abs(d) + abs(e) < 1e-30 * (abs(f) + abs(g) + 1.0):
            break
    return AiryPair(_AI0 * f + _AIP0 * g, _AI0 * fp + _AIP0 * gp)


def _asym_coefficients(count):
    # u_k of the Airy asymptotic series and v_k = u_k (6k+1)/(1-6k)
    u = [1.0]
    v = [1.0]
    for k in range(1, count):
        u.append(u[-1] * (6 * k - 5) * (6 * k - 3) * (6 * k - 1)
                 / (216.0 * (2 * k - 1) * k))
        v.append(u[-1] * (6 * k + 1) / (1.0 - 6 * k))
    return u, v


_UK, _VK = _asym_coefficients(32)


def _airy_asym_pos(x):
    # exponentially decaying branch; truncate before the series diverges
    z = (2.0 / 3.0) * x ** 1.5
    su = sv = 1.0
    prev = 1.0
    for k in range(1, 16):
        tu = (-1) ** k * _UK[k] / z**k
        if abs(tu) > prev:
            break
        prev = abs(tu)
        su += tu
        sv += (-1) ** k * _VK[k] / z**k
    if z > 700.0:  # exp underflow: the true value is below double range
        return AiryPair(0.0, 0.0)
    damp = math.exp(-z)
    ai = damp * su / (2.0 * math.sqrt(math.pi) * x**0.25)
    aip = -(x**0.25) * damp * sv / (2.0 * math.sqrt(math.pi))
    return AiryPair(ai, aip)


def _airy_asym_neg(x):
    # oscillatory branch, phase (2/3)|x|^{3/2} - pi/4
    t = -x
    z = (2.0 / 3.0) * t ** 1.5
    ce = se = cpe = spe = 0.0
    for k in range(8):
        s = (-1) ** k
        ce += s * _UK[2 * k] / z ** (2 * k)
        se += s * _UK[2 * k + 1] / z ** (2 * k + 1)
        cpe += s * _VK[2 * k] / z ** (2 * k)
        spe += s * _VK[2 * k + 1] / z ** (2 * k + 1)
    cz = math.cos(z - 0.25 * math.pi)
    sz = math.sin(z - 0.25 * math.pi)
    rt = math.sqrt(math.pi)
    ai = (cz * ce + sz * se) / (rt * t**0.25)
    aip = (t**0.25 / rt) * (sz * cpe - cz * spe)
    return AiryPair(ai, aip)


def _airy_march_down(x):
    # Taylor steps of y'' = t y from the asymptotic anchor down to x.
    # Marching leftward is the stable direction for Ai: the contaminating
    # (growing-to-the-right) solution decays along the march.
    a = _ASYM_ANCHOR
    pair = _airy_asym_pos(a)
    ai, aip = pair.ai, pair.ai_prime
    while a - x > 1e-13:
        step = min(1.0, a - x)
        coeff = [ai, aip]
        for k in range(30):
            prev = coeff[k - 1] if k >= 1 else 0.0
            coeff.append((a * coeff[k] + prev) / ((k + 1) * (k + 2)))
        d = -step
        val = 0.0
        dval = 0.0
        for k in range(len(coeff) - 1, -1, -1):
            val = val * d + coeff[k]
        for k in range(len(coeff) - 1, 0, -1):
            dval = dval * d + k * coeff[k]
        ai, aip = val, dval
        a -= step
    return AiryPair(ai, aip)


def airy(x: float) -> AiryPair:
    """Ai(x) and Ai'(x) for real x with |x| <= 1e4.

    Relative accuracy is 1e-10 or better for |x| <= 8 and 1e-8 or better
    beyond (for x large enough that Ai underflows the double range, the
    pair collapses to zero).
    """
    x = float(x)
    if not abs(x) <= AIRY_MAX_ARG:
        raise ValueError(f"airy argument must satisfy |x| <= {AIRY_MAX_ARG}")
    if x < _SERIES_LO:
        return _airy_asym_neg(x)
    if x <= _SERIES_HI:
        return _airy_series(x)
    if x < _ASYM_ANCHOR:
        return _airy_march_down(x)
    return _airy_asym_pos(x)


_J0_SWITCH = 50.0
_J0_RULE_SIZE = 256
_J0_SIN_NODES = None
_J0_WEIGHTS = None


def _j0_tables():
    global _J0_SIN_NODES, _J0_WEIGHTS
    if _J0_SIN_NODES is None:
        rule = gauss_legendre(_J0_RULE_SIZE)
        theta = 0.5 * math.pi * (rule.nodes + 1.0)
        sin_nodes = [math.sin(t) for t in theta]
        _J0_SIN_NODES = tuple(sin_nodes)
        _J0_WEIGHTS = tuple(rule.weights)
    return _J0_SIN_NODES, _J0_WEIGHTS


def _j0_hankel(s):
    # large-argument cosine form with the standard 1/s coefficient series
    a = 1.0
    even = 1.0
    odd = 0.0
    for k in range(1, 9):
        a *= -((2 * k - 1) ** 2) / (8.0 * k)
        term = a / s**k
        if k % 2 == 0:
            even += (-1) ** (k // 2) * term
        else:
            odd += (-1) ** ((k - 1) // 2) * term
    w = s - 0.25 * math.pi
    return math.sqrt(2.0 / (math.pi * s)) * (math.cos(w) * even - math.sin(w) * odd)


def bessel_j0(s: float) -> float:
    """Order-zero Bessel function via its integral representation.

    For |s| <= 50 the value is the 256-point Gauss-Legendre discretization
    of (1/pi) int_0^pi cos(s sin(theta)) d(theta); beyond that the
    large-argument cosine form is used.
    """
    s = float(s)
    if not abs(s) <= BESSEL_MAX_ARG:
        raise ValueError(f"bessel_j0 argument must satisfy |s| <= {BESSEL_MAX_ARG}")
    s = abs(s)
    if s == 0.0:
        return 1.0
    if s <= _J0_SWITCH:
        sin_nodes, weights = _j0_tables()
        acc = 0.0
        for sn, w in zip(sin_nodes, weights):
            acc += w * math.cos(s * sn)
        return 0.5 * acc
    return _j0_hankel(s)


def legendre_poly(N: int, t: float) -> float:
    """Classical (unnormalized) Legendre polynomial P_N(t) on [-1, 1]."""
    if N < 0 or N > LEGENDRE_MAX_DEGREE:
        raise ValueError(f"degree must be in [0, {LEGENDRE_MAX_DEGREE}]")
    if not abs(t) <= 1.0:
        raise ValueError("legendre_poly argument must lie in [-1, 1]")
    if N == 0:
        return 1.0
    p0, p1 = 1.0, t
    for l in range(2, N + 1):
        p0, p1 = p1, ((2 * l - 1) * t * p1 - (l - 1) * p0) / l
    return p1
