"""Turning points, action integrals, and the WKB/Airy leading terms.

For a fixed ratio c in (0, 1) the effective potential is
V(phi) = c^2 / sin^2(phi) with turning points where sin(phi) = c.  The
action A(phi) = int_phi^{phi_+} sqrt(1 - V) is the oscillation phase of
the latitude modes; the Airy argument is rho(phi) = ((3/2) A(phi))^(2/3),
the unique scaling for which the large-argument Airy phase
(2/3) rho^(3/2) / h reproduces A/h.  A deliberately inconsistent variant
of rho is kept behind a flag so the convergence experiments can
demonstrate that it breaks the matching.

`caustic_scan` compares the exact modes against both approximations
along a ladder and fits convergence orders by log-log regression.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .legendre import Ladder, LadderMember, mode_u_batch, collapse_scaled
from .quadrature import integrate
from .specfun import airy

WKB_TURNING_MARGIN = 0.05   # validity margin of the oscillatory form
AIRY_WINDOW = 0.3           # caustic window for the Airy form
AIRY_ARG_CAP = 1.0e4        # beyond this the Airy form defers to WKB
_CAUSTIC_LIMIT_BAND = 1e-4  # use the analytic 0/0 limit this close to phi_+


def turning_points(c: float):
    """The two solutions of sin(phi) = c in (0, pi), as (phi_-, phi_+)."""
    if not 0.0 < c < 1.0:
        raise ValueError("ratio c must lie in (0, 1)")
    lo = math.asin(c)
    return lo, math.pi - lo


@dataclass(frozen=True)
class LadderGeometry:
    """Turning points and potential for one fixed ratio c."""

    c: float
    phi_minus: float = field(init=False)
    phi_plus: float = field(init=False)

    def __post_init__(self):
        lo, hi = turning_points(self.c)
        object.__setattr__(self, "phi_minus", lo)
        object.__setattr__(self, "phi_plus", hi)

    @staticmethod
    def for_ladder(ladder: Ladder):
        return LadderGeometry(c=ladder.c_float)

    def potential(self, phi):
        return self.c * self.c / math.sin(phi) ** 2


def action(geom: LadderGeometry, phi: float) -> float:
    """A(phi) = int_phi^{phi_+} sqrt(1 - c^2/sin^2 psi) d psi.

    Nonnegative, strictly decreasing, with A(phi_+) = 0 and
    2 A(phi_-) = 2 pi (1 - c) (the full loop integral of tau d phi).
    """
    if not geom.phi_minus <= phi <= geom.phi_plus:
        raise ValueError("phi must lie in the classically allowed interval")
    if phi >= geom.phi_plus:
        return 0.0
    c2 = geom.c * geom.c

    def integrand(psi):
        v = 1.0 - c2 / math.sin(psi) ** 2
        return math.sqrt(v) if v > 0.0 else 0.0

    flags = "sqrt_at_both" if phi <= geom.phi_minus + 1e-9 else "sqrt_at_b"
    return integrate(integrand, phi, geom.phi_plus, tol=1e-12,
                     endpoint_singularity=flags)


def airy_arg_rho(geom: LadderGeometry, phi: float,
                 literal_variant: bool = False) -> float:
    """Airy argument rho(phi) = ((3/2) A(phi))^(2/3).

    With `literal_variant` the coefficient is read off the alternative
    normalization rho = ((4/3) * 2 A)^(2/3); it is retained only so the
    matching experiments can show it is inconsistent with the WKB phase.
    """
    a = action(geom, phi)
    coeff = 8.0 / 3.0 if literal_variant else 1.5
    return (coeff * a) ** (2.0 / 3.0)


def wkb_envelope(geom: LadderGeometry, phi: float) -> float:
    """Oscillation envelope sqrt(2 sin phi / pi) (sin^2 phi - c^2)^(-1/4)."""
    s2 = math.sin(phi) ** 2 - geom.c * geom.c
    if s2 <= 0.0:
        raise ValueError("phi must lie strictly inside the allowed interval")
    return math.sqrt(2.0 * math.sin(phi) / math.pi) * s2 ** (-0.25)


def wkb_leading(member: LadderMember, geom: LadderGeometry, phi: float) -> float:
    """Leading oscillatory approximation to the latitude mode.

    With A the action measured from phi to the upper turning point and
    h = 1/(N+1/2):

        N - m odd:   + envelope * cos(A/h - pi/4)
        N - m even:  - envelope * sin(A/h + pi/4)

    The two branches are the same function up to overall sign
    (cos(t - pi/4) = sin(t + pi/4)); the phase is pinned by the parity of
    the mode at the equator, where A/h = pi (N - m)/2 + pi/4.  Valid only
    at distance >= 0.05 from both turning points.
    """
    dist = min(phi - geom.phi_minus, geom.phi_plus - phi)
    if dist < WKB_TURNING_MARGIN:
        raise ValueError(
            f"phi is within {WKB_TURNING_MARGIN} of a turning point; "
            "the oscillatory form is invalid there")
    amp = wkb_envelope(geom, phi)
    theta = action(geom, phi) / member.h
    if member.parity_odd:
        return amp * math.cos(theta - 0.25 * math.pi)
    return -amp * math.sin(theta + 0.25 * math.pi)


def caustic_amplitude_ratio(geom: LadderGeometry, phi: float,
                            literal_variant: bool = False) -> float:
    """4 rho / (sin^2 phi - c^2), by its analytic limit at the caustic.

    The limit as phi -> phi_+ is (2/c)^(4/3) (1 - c^2)^(-1/3); the direct
    quotient is used away from the caustic.
    """
    c = geom.c
    if geom.phi_plus - phi < _CAUSTIC_LIMIT_BAND:
        base = (2.0 / c) ** (4.0 / 3.0) * (1.0 - c * c) ** (-1.0 / 3.0)
        if literal_variant:
            base *= (16.0 / 9.0) ** (2.0 / 3.0)
        return base
    rho = airy_arg_rho(geom, phi, literal_variant)
    return 4.0 * rho / (math.sin(phi) ** 2 - c * c)


def airy_leading(member: LadderMember, geom: LadderGeometry, phi: float,
                 literal_variant: bool = False) -> float:
    """Leading caustic approximation to the latitude mode.

    sqrt(sin phi) h^(-1/6) (4 rho / (sin^2 phi - c^2))^(1/4)
    Ai(-h^(-2/3) rho), valid for phi within 0.3 of the upper turning
    point.  When the Airy argument exceeds 1e4 the oscillatory form is
    returned instead (the two provably agree in that regime).
    """
    if not geom.phi_plus - AIRY_WINDOW <= phi <= geom.phi_plus:
        raise ValueError(
            f"phi must lie within {AIRY_WINDOW} below the caustic phi_+")
    h = member.h
    rho = airy_arg_rho(geom, phi, literal_variant)
    t = rho / h ** (2.0 / 3.0)
    if t > AIRY_ARG_CAP:
        return wkb_leading(member, geom, phi)
    ratio = caustic_amplitude_ratio(geom, phi, literal_variant)
    return (math.sqrt(math.sin(phi)) * h ** (-1.0 / 6.0)
            * ratio ** 0.25 * airy(-t).ai)


def find_phi_for_airy_arg(member: LadderMember, geom: LadderGeometry,
                          target: float, literal_variant: bool = False) -> float:
    """Solve h^(-2/3) rho(phi) = target by bisection (rho is decreasing)."""
    if target <= 0.0:
        raise ValueError("target Airy argument must be positive")
    scale = member.h ** (-2.0 / 3.0)
    lo = geom.phi_minus + 1e-9
    hi = geom.phi_plus
    if scale * airy_arg_rho(geom, lo, literal_variant) < target:
        raise ValueError("target Airy argument unreachable inside the well")
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if scale * airy_arg_rho(geom, mid, literal_variant) > target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def fit_order(pairs) -> float:
    """Least-squares slope of log err against log h.

    Requires at least three pairs, strictly decreasing h, and positive
    errors.
    """
    pairs = list(pairs)
    if len(pairs) < 3:
        raise ValueError("order fit needs at least three (h, err) pairs")
    hs = [p[0] for p in pairs]
    errs = [p[1] for p in pairs]
    if any(e <= 0.0 for e in errs):
        raise ValueError("order fit requires positive errors")
    if any(h2 >= h1 for h1, h2 in zip(hs, hs[1:])):
        raise ValueError("order fit requires strictly decreasing h")
    slope = np.polyfit(np.log(hs), np.log(errs), 1)[0]
    return float(slope)


@dataclass(frozen=True)
class ScanRow:
    """One (member, phi) comparison; missing formulas are None."""

    k: int
    N: int
    m: int
    h: float
    phi: float
    exact: float
    wkb: float | None
    airy: float | None
    err_wkb: float | None
    err_airy: float | None


@dataclass(frozen=True)
class ErrorTable:
    """Scan rows plus fitted convergence orders.

    Errors are |approximation - sign * exact| with one global sign per
    (member, formula), resolved at the grid point of largest |exact|.
    The fitted order for the oscillatory form is the log-log slope of the
    absolute error (its remainder is O(h) in envelope units); for the
    caustic form it is the slope of the relative error err/|exact| (its
    leading-term contract is relative O(h^(1/3))).  Each is the median of
    the per-grid-point slopes, or None with fewer than three members.
    """

    c: float
    phi_mode: str
    rows: tuple
    fitted_order_wkb: float | None
    fitted_order_airy: float | None


def _resolve_sign(approx, exact):
    """Global sign s in {+1,-1} matched at the largest |exact| sample."""
    best = None
    for ap, ex in zip(approx, exact):
        if ap is None or ex == 0.0:
            continue
        if best is None or abs(ex) > abs(best[1]):
            best = (ap, ex)
    if best is None:
        return 1.0
    return 1.0 if best[0] * best[1] >= 0.0 else -1.0


def caustic_scan(ladder: Ladder, k_list, phi_grid=None,
                 caustic_points: int | None = None) -> ErrorTable:
    """Exact-vs-asymptotic error table along a ladder.

    Exactly one of `phi_grid` (explicit angles, shared by every member)
    or `caustic_points` (n angles phi_+ - j h^(2/3), j = 1..n, per
    member) must be given.  Rows are ordered by (k, phi); order fits are
    grouped by angle (explicit mode) or by j (caustic mode).
    """
    k_list = list(k_list)
    if any(k2 <= k1 for k1, k2 in zip(k_list, k_list[1:])):
        raise ValueError("k_list must be strictly ascending")
    if (phi_grid is None) == (caustic_points is None):
        raise ValueError("give exactly one of phi_grid or caustic_points")
    if caustic_points is not None and caustic_points < 1:
        raise ValueError("caustic_points must be positive")
    geom = LadderGeometry.for_ladder(ladder)

    rows = []
    wkb_groups = {}
    airy_groups = {}
    for k in k_list:
        member = ladder.member(k)
        h = member.h
        if phi_grid is not None:
            phis = [float(p) for p in phi_grid]
            keys = phis
        else:
            phis = [geom.phi_plus - j * h ** (2.0 / 3.0)
                    for j in range(1, caustic_points + 1)]
            keys = list(range(1, caustic_points + 1))
        for phi in phis:
            if not geom.phi_minus < phi <= geom.phi_plus:
                raise ValueError(f"phi={phi} outside the allowed interval")
        man, e10 = mode_u_batch(member, np.array(phis))
        exact = collapse_scaled(man, e10)
        wkb_vals = []
        airy_vals = []
        for phi in phis:
            dist = min(phi - geom.phi_minus, geom.phi_plus - phi)
            wkb_vals.append(wkb_leading(member, geom, phi)
                            if dist >= WKB_TURNING_MARGIN else None)
            airy_vals.append(airy_leading(member, geom, phi)
                             if geom.phi_plus - phi <= AIRY_WINDOW else None)
        s_wkb = _resolve_sign(wkb_vals, exact)
        s_airy = _resolve_sign(airy_vals, exact)
        for key, phi, ex, wv, av in zip(keys, phis, exact, wkb_vals, airy_vals):
            ew = abs(wv - s_wkb * ex) if wv is not None else None
            ea = abs(av - s_airy * ex) if av is not None else None
            rows.append(ScanRow(k=k, N=member.N, m=member.m, h=h, phi=phi,
                                exact=float(ex), wkb=wv, airy=av,
                                err_wkb=ew, err_airy=ea))
            if ew is not None and ew > 0.0:
                wkb_groups.setdefault(key, []).append((h, ew))
            if ea is not None and ea > 0.0 and ex != 0.0:
                airy_groups.setdefault(key, []).append((h, ea / abs(ex)))

    def median_order(groups):
        slopes = [fit_order(pairs) for pairs in groups.values()
                  if len(pairs) >= 3]
        if not slopes:
            return None
        return float(np.median(slopes))

    rows.sort(key=lambda r: (r.k, r.phi))
    return ErrorTable(
        c=geom.c,
        phi_mode="explicit" if phi_grid is not None else "caustic",
        rows=tuple(rows),
        fitted_order_wkb=median_order(wkb_groups),
        fitted_order_airy=median_order(airy_groups),
    )


def peak_amplitude(member: LadderMember, geom: LadderGeometry,
                   n_points: int = 300, width: float = 2.5) -> float:
    """max |mode_u| on a fine grid across the caustic Airy bump.

    The grid spans width * h^(2/3) below the upper turning point, which
    covers the principal maximum of the Airy profile.
    """
    h = member.h
    phis = np.linspace(geom.phi_plus - width * h ** (2.0 / 3.0),
                       geom.phi_plus - 1e-12, n_points)
    man, e10 = mode_u_batch(member, phis)
    return float(np.max(np.abs(collapse_scaled(man, e10))))
