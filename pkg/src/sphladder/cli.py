"""Command-line interface: scalar evaluation, convergence scans, measure
sweeps, and a deterministic self test.

All parameters are flags (no config files, no environment variables) so
that every emitted table is reproducible byte for byte.  Floating-point
output is printed with 17 significant digits in scientific notation.

Exit codes: 0 success, 1 self-test failure, 2 validation error,
3 numerical failure.
"""

import argparse
import math
import sys

import numpy as np

from . import legendre as leg
from . import measures as meas
from . import semiclassics as semi
from . import specfun
from .quadrature import AccuracyError, gauss_legendre, integrate

EXIT_OK = 0
EXIT_SELFTEST = 1
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3


def fmt_float(x) -> str:
    """17 significant digits, scientific notation, lowercase e."""
    return f"{float(x):.16e}"


def _json_text(obj, indent=0):
    pad = "  " * indent
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, str):
        escaped = obj.replace("\\", "\\\\").replace('"', '\\"')
        return f'"{escaped}"'
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return fmt_float(obj)
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        inner = ",\n".join("  " * (indent + 1) + _json_text(v, indent + 1)
                           for v in obj)
        return "[\n" + inner + "\n" + pad + "]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        inner = ",\n".join(
            "  " * (indent + 1) + f'"{k}": ' + _json_text(v, indent + 1)
            for k, v in obj.items())
        return "{\n" + inner + "\n" + pad + "}"
    raise TypeError(f"cannot serialize {type(obj)!r}")


def emit_json(obj) -> str:
    return _json_text(obj) + "\n"


def emit_csv(header, rows) -> str:
    def cell(v):
        if v is None:
            return ""
        if isinstance(v, str):
            return v
        if isinstance(v, (int, np.integer)):
            return str(int(v))
        return fmt_float(v)

    lines = [",".join(header)]
    lines.extend(",".join(cell(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def _write(text, out_path):
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w", newline="") as fh:
            fh.write(text)


def cmd_legendre(args) -> int:
    N, m = args.N, args.m
    if m > N:
        raise ValueError("order exceeds degree")
    if args.x is not None:
        if abs(args.x) > 1.0:
            raise ValueError("x must lie in [-1, 1]")
        sv = leg.legendre_assoc_norm(N, m, args.x)
        phi = None
        x = args.x
    else:
        if not 0.0 < args.phi < math.pi:
            raise ValueError("phi must lie in (0, pi)")
        sv = leg.mode_u(leg.LadderMember(m=m, N=N), args.phi)
        phi = args.phi
        x = math.cos(args.phi)
    collapsed = sv.value
    representable = math.isfinite(collapsed) and (collapsed != 0.0 or sv.mantissa == 0.0)
    value = collapsed if representable else None
    record = {
        "command": "legendre",
        "N": N,
        "m": m,
        "x": x,
        "phi": phi,
        "mantissa": sv.mantissa,
        "exp10": sv.exp10,
        "value": value,
    }
    if args.format == "json":
        _write(emit_json(record), args.out)
    else:
        header = ["N", "m", "x", "phi", "mantissa", "exp10", "value"]
        _write(emit_csv(header, [[record[h] for h in header]]), args.out)
    return EXIT_OK


def _scan_table(args):
    ladder = leg.Ladder(m0=args.m0, N0=args.N0)
    if args.m0 < 1:
        raise ValueError("scan requires m0 >= 1 so that 0 < c < 1")
    ks = args.k
    if not ks:
        raise ValueError("at least one --k is required")
    if args.caustic is not None:
        return semi.caustic_scan(ladder, ks, caustic_points=args.caustic)
    if not args.phi:
        raise ValueError("give --phi values or --caustic n")
    return semi.caustic_scan(ladder, ks, phi_grid=args.phi)


def cmd_scan(args) -> int:
    table = _scan_table(args)
    if args.format == "csv":
        header = ["k", "N", "m", "h", "phi", "exact", "wkb", "airy",
                  "err_wkb", "err_airy"]
        rows = [[r.k, r.N, r.m, r.h, r.phi, r.exact, r.wkb, r.airy,
                 r.err_wkb, r.err_airy] for r in table.rows]
        _write(emit_csv(header, rows), args.out)
    else:
        payload = {
            "command": "scan",
            "m0": args.m0,
            "N0": args.N0,
            "c": table.c,
            "k_list": list(args.k),
            "phi_mode": table.phi_mode,
            "fitted_order_wkb": table.fitted_order_wkb,
            "fitted_order_airy": table.fitted_order_airy,
            "rows": [
                {"k": r.k, "N": r.N, "m": r.m, "h": r.h, "phi": r.phi,
                 "exact": r.exact, "wkb": r.wkb, "airy": r.airy,
                 "err_wkb": r.err_wkb, "err_airy": r.err_airy}
                for r in table.rows
            ],
        }
        _write(emit_json(payload), args.out)
    return EXIT_OK


_F_SPECS = ("one", "t2", "t4")


def _parse_f(spec):
    if spec == "one":
        return spec, (lambda t: 1.0)
    if spec == "t2":
        return spec, (lambda t: t * t)
    if spec == "t4":
        return spec, (lambda t: t ** 4)
    if spec.startswith("cos:"):
        s = float(spec[4:])
        return spec, (lambda t: math.cos(s * t))
    raise ValueError(f"unknown test function {spec!r}; use one, t2, t4 or cos:s")


def _trend_decreasing(gaps):
    """Decreasing over the sweep, allowing one non-monotone step."""
    misses = sum(1 for a, b in zip(gaps, gaps[1:]) if b > a)
    return misses <= 1


def cmd_measure(args) -> int:
    if not 0.0 < args.c0 < 1.0:
        raise ValueError("c0 must lie in (0, 1)")
    n_list = args.N
    if not n_list:
        raise ValueError("at least one --N is required")
    if not args.f and not args.s:
        raise ValueError("give at least one --f or --s")
    fs = [_parse_f(spec) for spec in args.f]
    rows = []
    trends = {}
    measures = {n: meas.empirical_measure(n, args.c0) for n in n_list}
    for label, f in fs:
        limit = meas.arcsine_limit(args.c0, f)
        gaps = []
        for n in n_list:
            emp = meas.integrate_against(measures[n], f)
            gap = abs(emp - limit)
            gaps.append(gap)
            rows.append([n, f"f={label}", emp, limit, gap])
        trends[f"f={label}"] = {"gaps": gaps,
                                "decreasing": _trend_decreasing(gaps)}
    for s in args.s:
        gaps = []
        for n in n_list:
            direct = meas.char_fn_direct(measures[n], s).real
            addition = meas.char_fn_addition(n, args.c0, s)
            gap = abs(direct - addition)
            gaps.append(gap)
            rows.append([n, f"s={fmt_float(s)}", direct, addition, gap])
        limit_gaps = [abs(meas.char_fn_addition(n, args.c0, s)
                          - specfun.bessel_j0(args.c0 * s) / (2.0 * math.pi))
                      for n in n_list]
        trends[f"s={fmt_float(s)}"] = {
            "direct_vs_addition_gaps": gaps,
            "bessel_limit_gaps": limit_gaps,
            "decreasing": _trend_decreasing(limit_gaps),
        }
    if args.format == "csv":
        _write(emit_csv(["N", "f_or_s", "empirical", "limit", "gap"], rows),
               args.out)
    else:
        payload = {
            "command": "measure",
            "c0": args.c0,
            "N_list": list(n_list),
            "rows": [{"N": r[0], "f_or_s": r[1], "empirical": r[2],
                      "limit": r[3], "gap": r[4]} for r in rows],
            "trends": trends,
        }
        _write(emit_json(payload), args.out)
    return EXIT_OK


def _selftest_checks():
    """(name, callable) pairs; each returns (passed, detail)."""

    def gauss_moments():
        rule = gauss_legendre(12)
        worst = 0.0
        for j in range(12):
            val = float(np.sum(rule.weights * rule.nodes ** (2 * j)))
            want = 2.0 / (2 * j + 1)
            worst = max(worst, abs(val - want) / want)
        return worst <= 1e-12, f"max moment rel err {worst:.3e}"

    def quad_arcsine():
        val = integrate(lambda x: 1.0 / math.sqrt(1.0 - x * x), -1.0, 1.0,
                        tol=1e-12, endpoint_singularity="sqrt_at_both")
        err = abs(val - math.pi)
        return err <= 1e-10, f"|integral - pi| = {err:.3e}"

    def airy_constants():
        pair = specfun.airy(0.0)
        c1 = 3.0 ** (-2.0 / 3.0) / math.exp(specfun.log_gamma(2.0 / 3.0))
        c2 = 3.0 ** (-1.0 / 3.0) / math.exp(specfun.log_gamma(1.0 / 3.0))
        err = max(abs(pair.ai - c1), abs(pair.ai_prime + c2))
        return err <= 1e-12, f"max err at 0: {err:.3e}"

    def airy_branch_continuity():
        pairs = [
            (specfun._airy_series(-8.0), specfun._airy_asym_neg(-8.0)),
            (specfun._airy_series(4.2), specfun._airy_march_down(4.2)),
            (specfun._airy_march_down(8.0), specfun._airy_asym_pos(8.0)),
        ]
        worst = max(abs(a.ai - b.ai) / abs(b.ai) for a, b in pairs)
        return worst <= 1e-8, f"max branch disagreement {worst:.3e}"

    def j0_defining_integral():
        worst = 0.0
        for s in (1.0, 20.0):
            oracle = integrate(lambda th: math.cos(s * math.sin(th)),
                               0.0, math.pi, tol=1e-12) / math.pi
            worst = max(worst, abs(specfun.bessel_j0(s) - oracle))
        even = abs(specfun.bessel_j0(-7.3) - specfun.bessel_j0(7.3))
        return worst <= 1e-10 and even == 0.0, f"max gap {worst:.3e}"

    def legendre_orthonormality():
        worst = 0.0
        for N in (5, 50):
            rule = gauss_legendre(N + 1)
            for m in (0, N // 2, N):
                man, e10 = leg.legendre_assoc_norm_batch(N, m, rule.nodes)
                vals = leg.collapse_scaled(man, e10)
                norm = float(np.sum(rule.weights * vals * vals))
                worst = max(worst, abs(norm - 1.0))
        return worst <= 1e-8, f"max |norm-1| = {worst:.3e}"

    def legendre_parity():
        a = leg.legendre_assoc_norm(6, 3, 0.4).value
        b = leg.legendre_assoc_norm(6, 3, -0.4).value
        err = abs(b - ((-1) ** 9) * a)
        return err <= 1e-12 * abs(a), f"parity defect {err:.3e}"

    def ladder_ratio():
        ladder = leg.Ladder(m0=2, N0=2)
        ok = all(
            2 * ladder.member(k).m * (2 * ladder.N0 + 1)
            == 2 * ladder.m0 * (2 * ladder.member(k).N + 1)
            for k in range(6))
        return ok, "2 m_k (2 N0 + 1) == 2 m0 (2 N_k + 1) for k < 6"

    def loop_action():
        geom = semi.LadderGeometry(c=2.0 / 3.0)
        loop = 2.0 * semi.action(geom, geom.phi_minus)
        err = abs(loop - 2.0 * math.pi * (1.0 - geom.c))
        return err <= 1e-10, f"loop defect {err:.3e}"

    def rho_consistency():
        geom = semi.LadderGeometry(c=2.0 / 3.0)
        phi = 2.2
        rho = semi.airy_arg_rho(geom, phi)
        err = abs((2.0 / 3.0) * rho ** 1.5 - semi.action(geom, phi))
        return err <= 1e-10, f"phase defect {err:.3e}"

    def wkb_tracks_mode():
        ladder = leg.Ladder(m0=1, N0=1)
        geom = semi.LadderGeometry.for_ladder(ladder)
        member = ladder.member(63)
        phi = 1.9
        exact = leg.mode_u(member, phi).value
        approx = semi.wkb_leading(member, geom, phi)
        err = min(abs(approx - exact), abs(approx + exact))
        return err <= 5e-3, f"pointwise err {err:.3e}"

    def airy_caustic():
        ladder = leg.Ladder(m0=1, N0=1)
        geom = semi.LadderGeometry.for_ladder(ladder)
        member = ladder.member(63)
        phi = geom.phi_plus - member.h ** (2.0 / 3.0)
        exact = leg.mode_u(member, phi).value
        approx = semi.airy_leading(member, geom, phi)
        rel = min(abs(approx - exact), abs(approx + exact)) / abs(exact)
        return rel <= 0.15, f"relative err {rel:.3e}"

    def measure_mass():
        mu = meas.empirical_measure(300, 0.8)
        err = abs(mu.total_mass() - 1.0)
        return err <= 1e-10, f"mass defect {err:.3e}"

    def char_fn_equality():
        mu = meas.empirical_measure(300, 0.8)
        gap = abs(meas.char_fn_direct(mu, 5.0).real
                  - meas.char_fn_addition(300, 0.8, 5.0))
        return gap <= 1e-9, f"route gap {gap:.3e}"

    def mehler_heine():
        gap = meas.mehler_heine_gap(2000, 5.0)
        return gap <= 0.01, f"gap {gap:.3e}"

    return [
        ("gauss_moments", gauss_moments),
        ("quad_arcsine", quad_arcsine),
        ("airy_constants", airy_constants),
        ("airy_branch_continuity", airy_branch_continuity),
        ("j0_defining_integral", j0_defining_integral),
        ("legendre_orthonormality", legendre_orthonormality),
        ("legendre_parity", legendre_parity),
        ("ladder_ratio", ladder_ratio),
        ("loop_action", loop_action),
        ("rho_consistency", rho_consistency),
        ("wkb_tracks_mode", wkb_tracks_mode),
        ("airy_caustic", airy_caustic),
        ("measure_mass", measure_mass),
        ("char_fn_equality", char_fn_equality),
        ("mehler_heine", mehler_heine),
    ]


def cmd_selftest(args) -> int:
    results = []
    corruption = 1e-3 if args.corrupt_recurrence else 0.0
    with leg.perturbed_recurrence(corruption):
        for name, check in _selftest_checks():
            try:
                passed, detail = check()
            except Exception as exc:  # a check crashing is a failure
                passed, detail = False, f"raised {type(exc).__name__}: {exc}"
            results.append({"name": name, "passed": bool(passed),
                            "detail": detail})
    all_passed = all(r["passed"] for r in results)
    payload = {"command": "selftest", "all_passed": all_passed,
               "checks": results}
    if args.format == "csv":
        rows = [[r["name"], "pass" if r["passed"] else "fail", r["detail"]]
                for r in results]
        _write(emit_csv(["name", "status", "detail"], rows), args.out)
    else:
        _write(emit_json(payload), args.out)
    return EXIT_OK if all_passed else EXIT_SELFTEST


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sphladder",
        description="Ladder sequences of spherical harmonics: exact values, "
                    "WKB/Airy convergence scans, latitude-circle measures.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", metavar="PATH", default=None)

    p_leg = sub.add_parser("legendre", help="evaluate one normalized "
                           "Legendre value or latitude mode")
    p_leg.add_argument("--N", type=int, required=True)
    p_leg.add_argument("--m", type=int, required=True)
    group = p_leg.add_mutually_exclusive_group(required=True)
    group.add_argument("--x", type=float, default=None)
    group.add_argument("--phi", type=float, default=None)
    common(p_leg)
    p_leg.set_defaults(func=cmd_legendre)

    p_scan = sub.add_parser("scan", help="exact-vs-WKB/Airy error table "
                            "along a ladder")
    p_scan.add_argument("--m0", type=int, required=True)
    p_scan.add_argument("--N0", type=int, required=True)
    p_scan.add_argument("--k", type=int, action="append", default=[],
                        help="ladder index, repeatable, ascending")
    grid = p_scan.add_mutually_exclusive_group(required=True)
    grid.add_argument("--phi", type=float, action="append", default=[],
                      help="explicit angle, repeatable")
    grid.add_argument("--caustic", type=int, default=None, metavar="n",
                      help="n per-member points phi_+ - j h^(2/3), j=1..n")
    common(p_scan)
    p_scan.set_defaults(func=cmd_scan)

    p_meas = sub.add_parser("measure", help="empirical measures vs the "
                            "arcsine limit and characteristic functions")
    p_meas.add_argument("--N", type=int, action="append", default=[],
                        help="degree, repeatable")
    p_meas.add_argument("--c0", type=float, required=True)
    p_meas.add_argument("--f", action="append", default=[],
                        help="test function: one, t2, t4, cos:s (repeatable)")
    p_meas.add_argument("--s", type=float, action="append", default=[],
                        help="characteristic-function argument (repeatable)")
    common(p_meas)
    p_meas.set_defaults(func=cmd_measure)

    p_self = sub.add_parser("selftest", help="run the reduced invariant "
                            "suite; exit 1 on any failure")
    p_self.add_argument("--corrupt-recurrence", action="store_true",
                        help="fault-injection hook: perturb the Legendre "
                             "recurrence and expect failures")
    p_self.add_argument("--format", choices=("csv", "json"), default="json")
    p_self.add_argument("--out", metavar="PATH", default=None)
    p_self.set_defaults(func=cmd_selftest)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad flags, which matches the validation code
        return EXIT_VALIDATION if exc.code else EXIT_OK
    try:
        return args.func(args)
    except AccuracyError as exc:
        sys.stderr.write(f"numerical failure: {exc}\n")
        return EXIT_NUMERICAL
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_VALIDATION


def entrypoint():
    raise SystemExit(main())


if __name__ == "__main__":
    raise SystemExit(main())
