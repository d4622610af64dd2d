"""Independent oracles used by the tests.

These deliberately avoid the recurrence code paths they are used to
check: the normalized Legendre oracle evaluates the Rodrigues-type
derivative formula in exact rational arithmetic and takes one square
root at the end.
"""

import math
from fractions import Fraction


def rodrigues_norm(N: int, m: int, x: Fraction) -> float:
    """Normalized associated Legendre value at rational x, exactly.

    Pbar^m_N(x) = sqrt((N+1/2)(N-m)!/(N+m)!) (1/(2^N N!))
                  (1-x^2)^(m/2) d^{N+m}/dx^{N+m} (x^2-1)^N

    Everything except the final square root is a Fraction, so the result
    is correct to one rounding.
    """
    x = Fraction(x)
    # (N+m)-th derivative of (x^2-1)^N = sum_j C(N,j) (-1)^(N-j) x^(2j)
    order = N + m
    deriv = Fraction(0)
    for j in range((order + 1) // 2, N + 1):
        if 2 * j < order:
            continue
        coeff = Fraction(math.comb(N, j) * (-1) ** (N - j))
        coeff *= Fraction(math.factorial(2 * j), math.factorial(2 * j - order))
        deriv += coeff * x ** (2 * j - order)
    if deriv == 0:
        return 0.0
    norm_sq = (Fraction(2 * N + 1, 2)
               * Fraction(math.factorial(N - m), math.factorial(N + m)))
    one_minus_x2 = 1 - x * x
    value_sq = (norm_sq * one_minus_x2 ** m
                * (deriv / (Fraction(2) ** N * math.factorial(N))) ** 2)
    sign = 1.0 if deriv > 0 else -1.0
    # split the Fraction to keep the float conversion in range
    num, den = value_sq.numerator, value_sq.denominator
    log_sqrt = 0.5 * (_log_int(num) - _log_int(den))
    return sign * math.exp(log_sqrt)


def _log_int(n: int) -> float:
    """Natural log of a positive integer of arbitrary size."""
    if n.bit_length() <= 900:
        return math.log(n)
    shift = n.bit_length() - 900
    return math.log(n >> shift) + shift * math.log(2.0)


def trapezoid_action(c: float, phi_lo: float, phi_hi: float,
                     panels: int = 1_000_000) -> float:
    """Brute-force trapezoid value of the action integral."""
    import numpy as np

    psi = np.linspace(phi_lo, phi_hi, panels + 1)
    integrand = np.sqrt(np.clip(1.0 - c * c / np.sin(psi) ** 2, 0.0, None))
    return float(np.trapezoid(integrand, psi))
