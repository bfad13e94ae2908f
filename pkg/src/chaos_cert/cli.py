"""Command-line interface: ``chaos-cert <subcommand> ...``.

Exit codes
    0   OddPeriodCycle (certify, olg reduce) or success
    1   TurbulentSecondIterate only
    2   NoCertificate
    3   BoundaryIndeterminate
    64  usage error
    65  domain error (invalid parameters, peak below the diagonal, ...)

The environment variable CHAOS_CERT_SEED is reserved and ignored; every
algorithm here is deterministic.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__
from .criterion import ChaosVerdict, VerdictKind, certify, compute_pi
from .errors import ChaosCertError, ClassicalCaseViolation
from .interval import CertifyConfig, build_interval, certify_g_class
from .maps import Family, UnimodalMapSpec
from .numeric import RootConfig, find_root, scan_brackets, solve_threshold
from .olg import OLGEconomy, consumption_orbit, economy_verdict
from .oracle import (
    default_interval,
    find_periodic_orbits,
    find_turbulence_witness,
    orbit_simulate,
    smallest_odd_period,
)
from .predicates import PREDICATE_IDS

EXIT_USAGE = 64
EXIT_DOMAIN = 65

VERDICT_EXIT = {
    VerdictKind.ODD_PERIOD_CYCLE: 0,
    VerdictKind.TURBULENT_SECOND_ITERATE: 1,
    VerdictKind.NO_CERTIFICATE: 2,
    VerdictKind.BOUNDARY_INDETERMINATE: 3,
}

BIFURCATION_COLUMNS = ("param", "x", "kind")
REGION_COLUMNS = ("beta", "lambda", "cond9", "cond10", "region")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse exits with 2 by default
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def dumps(obj) -> str:
    """Canonical JSON used by every subcommand."""
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False)


def _fmt(x: float) -> str:
    return repr(float(x))


# -- argument groups ---------------------------------------------------------


def _add_map_args(p: argparse.ArgumentParser, need_family: bool = True) -> None:
    g = p.add_argument_group("map selection")
    g.add_argument("--family", choices=[f.value for f in Family], required=need_family)
    g.add_argument("--r", type=float, help="Ricker growth parameter")
    g.add_argument("--lambda", dest="lam", type=float, help="Hassell scale parameter")
    g.add_argument("--alpha", type=float, default=1.0, help="Hassell alpha (default 1)")
    g.add_argument("--beta", type=float, help="Hassell exponent")


def _add_cfg_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("numerics")
    g.add_argument("--tol-root", type=float, default=1e-12)
    g.add_argument("--eps-strict", type=float, default=1e-9)
    g.add_argument("--n-scan", type=int, default=65536, help="sign-scan subintervals for Pi")
    g.add_argument("--n-grid", type=int, default=4096, help="grid points for G-class sweeps")


def _add_format(p: argparse.ArgumentParser, default: str = "human") -> None:
    p.add_argument("--format", choices=("json", "csv", "human"), default=default)


def _map_from_args(args) -> UnimodalMapSpec:
    if args.family == Family.RICKER.value:
        if args.r is None:
            raise UsageError("--family ricker needs --r")
        return UnimodalMapSpec.ricker(args.r)
    if args.lam is None or args.beta is None:
        raise UsageError("--family hassell needs --lambda and --beta")
    return UnimodalMapSpec.hassell(args.lam, args.beta, args.alpha)


def _configs(args) -> tuple[CertifyConfig, RootConfig]:
    try:
        return (
            CertifyConfig(eps_strict=args.eps_strict, n_grid=args.n_grid),
            RootConfig(tol_root=args.tol_root, n_scan=args.n_scan),
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


# -- certify -------------------------------------------------------------------


CERTIFY_COLUMNS = (
    "family", "parameter", "value", "alpha", "beta", "a", "b", "m",
    "membership", "kind", "g2m", "g3m", "min_pi", "max_pi",
)


def _verdict_csv(v: ChaosVerdict) -> str:
    g, c, w = v.certificate.map, v.certificate, v.witness
    row = [
        g.family.value, g.parameter_name, _fmt(g.parameter),
        _fmt(g.alpha) if g.alpha is not None else "",
        _fmt(g.beta) if g.beta is not None else "",
        _fmt(c.a), _fmt(c.b), _fmt(c.m), c.verdict.value, v.kind.value,
    ]
    row += [_fmt(getattr(w, k)) if w else "" for k in ("g2m", "g3m", "min_pi", "max_pi")]
    return ",".join(CERTIFY_COLUMNS) + "\n" + ",".join(row) + "\n"


def _verdict_human(v: ChaosVerdict) -> str:
    c = v.certificate
    lines = [
        f"map            {c.map}",
        f"interval       [a, b] = [{c.a:.10g}, {c.b:.10g}], peak m = {c.m:.10g}",
        f"membership     {c.verdict.value}"
        + ("" if c.validated_regime else "  (outside validated regime: alpha != 1)"),
    ]
    for ch in c.checks:
        status = "pass" if ch.passed else ("indeterminate" if ch.indeterminate else "FAIL")
        lines.append(f"  {ch.id}  {status:<13} residual {ch.residual:+.6e}")
    if v.pi is not None:
        pts = ", ".join(f"{p:.10g}" for p in v.pi.points)
        lines.append(f"Pi             {{{pts}}}" + (" (singleton)" if v.pi.is_singleton else ""))
    if v.witness is not None:
        w = v.witness
        lines.append(f"g^2(m)         {w.g2m:.10g}   (m - g^2(m) = {w.g2m_margin:+.3e})")
        lines.append(f"g^3(m)         {w.g3m:.10g}   (min Pi - g^3(m) = {w.odd_margin:+.3e},"
                     f" max Pi - g^3(m) = {w.turbulence_margin:+.3e})")
    lines.append(f"verdict        {v.kind.value}: {v.reason}")
    return "\n".join(lines) + "\n"


def emit_verdict(v: ChaosVerdict, fmt: str, extra: dict | None = None) -> None:
    if fmt == "json":
        d = v.to_dict()
        if extra:
            d.update(extra)
        print(dumps(d))
    elif fmt == "csv":
        sys.stdout.write(_verdict_csv(v))
    else:
        if extra:
            for k, val in extra.items():
                print(f"{k:<14} {json.dumps(val)}")
        sys.stdout.write(_verdict_human(v))


def cmd_certify(args) -> int:
    g = _map_from_args(args)
    ccfg, rcfg = _configs(args)
    v = certify(g, ccfg, rcfg)
    emit_verdict(v, args.format)
    return VERDICT_EXIT[v.kind]


# -- threshold -------------------------------------------------------------------


def _reported(value: float, tol: float) -> str:
    decimals = max(0, math.ceil(-math.log10(tol)) - 1)
    return f"{value:.{decimals}f}"


def cmd_threshold(args) -> int:
    if args.family == Family.HASSELL.value and args.beta is None:
        raise UsageError("--family hassell needs --beta")
    ccfg, rcfg = _configs(args)
    lo, hi = args.bracket
    res = solve_threshold(
        args.family, args.predicate, (lo, hi), beta=args.beta, alpha=args.alpha,
        tol=args.tol, n_coarse=args.n_coarse, certify_cfg=ccfg, root_cfg=rcfg,
    )
    if args.format == "json":
        print(dumps(res.to_dict()))
    elif args.format == "csv":
        print(res.CSV_HEADER)
        print(res.to_csv_row())
    else:
        print(_reported(res.critical_value, res.tol))
        lo_, hi_ = res.bracket
        print(f"# {res.parameter}* in [{lo_!r}, {hi_!r}] for predicate {res.predicate_id}"
              + ("" if res.monotone else f"; {len(res.flips)} flips: {res.flips}"))
    return 0


# -- pi-set ----------------------------------------------------------------------


def cmd_pi_set(args) -> int:
    g = _map_from_args(args)
    ccfg, rcfg = _configs(args)
    build_interval(g)
    cert = certify_g_class(g, ccfg)
    pi = compute_pi(cert, rcfg)
    if args.format == "json":
        print(dumps({**pi.to_dict(), "map": g.to_dict(), "membership": cert.verdict.value}))
    elif args.format == "csv":
        print("x,residual,tangency,is_fixed_point")
        for x, r, t in zip(pi.points, pi.residuals, pi.tangency):
            print(f"{x!r},{r!r},{str(t).lower()},{str(x == pi.fixed_point).lower()}")
    else:
        print(f"Pi for {g} on [m, b] = [{cert.m:.10g}, {cert.b:.10g}] (membership {cert.verdict.value}):")
        for x, r in zip(pi.points, pi.residuals):
            tag = "  fixed point" if x == pi.fixed_point else ""
            print(f"  {x:.12g}   |g^2(x) - x| = {r:.1e}{tag}")
        if pi.resolution_warning:
            print("  warning: roots closer than the scan resolution")
    return 0


# -- orbit / witness ------------------------------------------------------------------


def cmd_orbit(args) -> int:
    g = _map_from_args(args)
    iv = None
    try:
        iv = default_interval(g)
    except ChaosCertError:
        pass
    if args.period is not None:
        orbits = find_periodic_orbits(g, iv, args.period)
        if args.format == "json":
            print(dumps({"map": g.to_dict(), "interval": list(iv), "orbits": [o.to_dict() for o in orbits]}))
        elif args.format == "csv":
            print("orbit,index,x,residual,stability")
            for k, o in enumerate(orbits):
                for i, x in enumerate(o.points):
                    print(f"{k},{i},{x!r},{o.residual!r},{o.stability!r}")
        else:
            print(f"{len(orbits)} cycle(s) of minimal period {args.period} for {g} in [{iv[0]:.6g}, {iv[1]:.6g}]")
            for o in orbits:
                print("  " + ", ".join(f"{x:.10g}" for x in o.points)
                      + f"   residual {o.residual:.1e}, |multiplier| {o.stability:.4g}")
        return 0
    if args.smallest_odd is not None:
        found = smallest_odd_period(g, iv, args.smallest_odd)
        out = {"map": g.to_dict(), "max_period": args.smallest_odd,
               "period": found[0] if found else None,
               "orbits": [o.to_dict() for o in found[1]] if found else []}
        if args.format == "json":
            print(dumps(out))
        else:
            print("none found" if not found else f"smallest odd period {found[0]}")
        return 0
    x0 = args.x0 if args.x0 is not None else g.critical_point()
    traj = orbit_simulate(g, x0, args.burn_in, args.n, iv)
    if args.format == "csv":
        sys.stdout.write(traj.to_csv())
    elif args.format == "json":
        print(dumps({"map": g.to_dict(), "x0": x0, "burn_in": args.burn_in,
                     "values": traj.values.tolist(), "min": traj.min, "max": traj.max,
                     "interval": list(iv) if iv else None,
                     "stayed_in_interval": traj.stayed_in_interval}))
    else:
        print(f"{g}, x0={x0:g}, burn-in {args.burn_in}, {args.n} points")
        print(f"  min {traj.min:.10g}  max {traj.max:.10g}  stayed in [a,b]: {traj.stayed_in_interval}")
        print("  last: " + ", ".join(f"{x:.8g}" for x in traj.values[-8:]))
    return 0


def cmd_witness(args) -> int:
    g = _map_from_args(args)
    w = find_turbulence_witness(g, args.order, default_interval(g))
    if args.format == "json":
        print(dumps({"map": g.to_dict(), "witness": w.to_dict() if w else None}))
    elif args.format == "csv":
        print("x1,x2,x3,map_order,ordering")
        if w:
            print(f"{w.x1!r},{w.x2!r},{w.x3!r},{w.map_order},{w.ordering}")
    else:
        if w is None:
            print(f"no turbulence witness for g^{args.order} found for {g}")
        else:
            print(f"g^{w.map_order} is turbulent for {g}: x1={w.x1:.10g}, x2={w.x2:.10g}, "
                  f"x3={w.x3:.10g} ({w.ordering})")
    return 0 if w else 2


# -- olg ---------------------------------------------------------------------------


def cmd_olg(args) -> int:
    econ = OLGEconomy.from_json(args.config)
    ccfg, rcfg = _configs(args)
    dyn, v = economy_verdict(econ, certify_cfg=ccfg, root_cfg=rcfg)
    if args.action == "reduce":
        emit_verdict(v, args.format, {"economy": econ.to_dict(), "reduced": dyn.to_dict()})
        return VERDICT_EXIT[v.kind]
    c0 = args.c0 if args.c0 is not None else econ.w0 + dyn.map.critical_point()
    path = consumption_orbit(econ, dyn, c0, args.n)
    if args.format == "json":
        print(dumps({"economy": econ.to_dict(), "reduced": dyn.to_dict(),
                     "t": path.t.tolist(), "c0": path.c0.tolist(), "c1": path.c1.tolist(),
                     "rho": path.rho.tolist(), "budget_residual": path.budget_residual,
                     "market_residual": path.market_residual,
                     "c1_negative_at": path.c1_negative_at}))
    else:
        sys.stdout.write(path.to_csv())
        if path.c1_negative_at is not None:
            print(f"warning: c1 < 0 first at t={path.c1_negative_at}", file=sys.stderr)
    return 0


# -- bifurcation / region ---------------------------------------------------------------


def period_two_points(g: UnimodalMapSpec, n_scan: int = 4096) -> list[float]:
    """Points of minimal period two of g on (0, g(m)]."""
    m = g.critical_point()
    top = g(m)
    lo = top * 1e-9

    def F(x):
        return g.iterate(x, 2) - x

    try:
        z = g.fixed_point()
    except ChaosCertError:
        z = None
    out = []
    for a, b in scan_brackets(F, lo, top, n_scan):
        x = find_root(F, a, b)
        if abs(g(x) - x) <= 1e-7 * max(1.0, x):
            continue
        if z is not None and abs(x - z) <= 1e-7 * max(1.0, z):
            continue
        out.append(x)
    return out


def bifurcation_rows(
    family: str, lo: float, hi: float, steps: int, beta: float | None = None,
    alpha: float = 1.0, n_scan: int = 4096,
) -> list[tuple[float, float, str]]:
    params = [lo] if steps <= 1 or lo == hi else np.linspace(lo, hi, steps).tolist()
    rows = []
    for p in params:
        if family == Family.RICKER.value:
            g = UnimodalMapSpec.ricker(p)
        else:
            g = UnimodalMapSpec.hassell(p, beta, alpha)
        try:
            rows.append((p, g.fixed_point(), "fixed"))
        except ChaosCertError:
            pass
        rows += [(p, x, "period2") for x in period_two_points(g, n_scan)]
    return rows


PLOT_SCRIPT = '''\
"""Re-plot {what} written by chaos-cert."""
import csv
import sys

import matplotlib.pyplot as plt

path = sys.argv[1] if len(sys.argv) > 1 else {csv!r}
out = sys.argv[2] if len(sys.argv) > 2 else {png!r}
rows = list(csv.DictReader(open(path)))
{body}
plt.savefig(out, dpi=150, bbox_inches="tight")
'''

BIFURCATION_BODY = '''\
for kind, colour in (("fixed", "tab:blue"), ("period2", "tab:red")):
    pts = [(float(r["param"]), float(r["x"])) for r in rows if r["kind"] == kind]
    if pts:
        xs, ys = zip(*pts)
        plt.scatter(ys, xs, s=1, c=colour, label=kind)
plt.xlabel("x")
plt.ylabel({param!r})
plt.legend()'''

REGION_BODY = '''\
colours = {"a": "tab:orange", "b": "tab:green", "c": "tab:purple", "none": "lightgrey"}
for label, colour in colours.items():
    pts = [(float(r["beta"]), float(r["lambda"])) for r in rows if r["region"] == label]
    if pts:
        xs, ys = zip(*pts)
        plt.scatter(xs, ys, s=2, c=colour, label=label)
plt.xlabel("beta")
plt.ylabel("lambda")
plt.legend()'''


def _write_plot_script(path: str, csv_path: str, body: str, what: str) -> None:
    png = str(Path(csv_path).with_suffix(".png")) if csv_path != "-" else "figure.png"
    Path(path).write_text(PLOT_SCRIPT.format(what=what, csv=csv_path, png=png, body=body))


def _write_csv(out: str, header: Sequence[str], rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(v if isinstance(v, str) else repr(float(v)) for v in row))
    text = "\n".join(lines) + "\n"
    if out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def cmd_bifurcation(args) -> int:
    if args.family == Family.HASSELL.value and args.beta is None:
        raise UsageError("--family hassell needs --beta")
    lo, hi = args.range
    if lo > hi or args.steps < 1:
        raise UsageError("--range needs LO <= HI and --steps >= 1")
    rows = bifurcation_rows(args.family, lo, hi, args.steps, args.beta, args.alpha, args.n_scan)
    _write_csv(args.out, BIFURCATION_COLUMNS, rows)
    if args.plot_script:
        param = "r" if args.family == Family.RICKER.value else "lambda"
        _write_plot_script(args.plot_script, args.out, BIFURCATION_BODY.format(param=param),
                           "fixed-point and period-two loci")
    return 0


def region_conditions(beta: float, lam: float) -> tuple[bool, bool]:
    """(h(m) > m, h^2(m) < m) at alpha = 1, evaluated from the closed forms."""
    q = ((beta - 1.0) / beta) ** beta
    cond9 = lam > (1.0 / (beta - 1.0) + 1.0) ** beta
    cond10 = lam**2 * q * (lam / (beta - 1.0) * q + 1.0) ** (-beta) < 1.0
    return cond9, cond10


def region_label(cond9: bool, cond10: bool) -> str:
    """Region c (both), b (peak above diagonal only) or none.

    When h(m) <= m the orbit of m decreases monotonically towards the fixed
    point, so h^2(m) < m holds trivially there and carries no information.
    Such points are labelled none; label a is therefore never produced.
    """
    if not cond9:
        return "none"
    return "c" if cond10 else "b"


def region_rows(beta_range, lam_range, steps: int):
    def axis(lo, hi):
        return [lo] if steps <= 1 or lo == hi else np.linspace(lo, hi, steps).tolist()

    rows = []
    for be in axis(*beta_range):
        for lam in axis(*lam_range):
            c9, c10 = region_conditions(be, lam)
            rows.append((be, lam, str(c9).lower(), str(c10).lower(), region_label(c9, c10)))
    return rows


def cmd_region(args) -> int:
    blo, bhi = args.beta
    llo, lhi = args.lam
    if blo <= 1.0:
        raise UsageError("--beta range must stay above 1")
    if blo > bhi or llo > lhi or llo <= 0 or args.steps < 1:
        raise UsageError("ranges need LO <= HI, lambda > 0 and --steps >= 1")
    rows = region_rows((blo, bhi), (llo, lhi), args.steps)
    _write_csv(args.out, REGION_COLUMNS, rows)
    if args.plot_script:
        _write_plot_script(args.plot_script, args.out, REGION_BODY, "the (beta, lambda) regions")
    return 0


# -- parser ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="chaos-cert",
        description="Certify odd-period cycles and turbulence for Ricker and Hassell maps.",
        epilog="Exit codes: 0 odd cycle / success, 1 turbulent g^2 only, 2 no certificate, "
               "3 boundary-indeterminate, 64 usage error, 65 domain error. "
               "CHAOS_CERT_SEED is reserved and ignored.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("certify", help="G-membership certificate, Pi, and chaos verdict")
    _add_map_args(p)
    _add_cfg_args(p)
    _add_format(p)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("threshold", help="critical parameter where a predicate flips")
    _add_map_args(p)
    _add_cfg_args(p)
    p.add_argument("--predicate", choices=PREDICATE_IDS, required=True)
    p.add_argument("--bracket", nargs=2, type=float, metavar=("LO", "HI"), required=True)
    p.add_argument("--tol", type=float, default=1e-4, help="width of the final bracket")
    p.add_argument("--n-coarse", type=int, default=256)
    _add_format(p)
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("pi-set", help="period-one and period-two points in [m, b]")
    _add_map_args(p)
    _add_cfg_args(p)
    _add_format(p)
    p.set_defaults(func=cmd_pi_set)

    p = sub.add_parser("orbit", help="simulate a trajectory or list periodic orbits")
    _add_map_args(p)
    p.add_argument("--x0", type=float)
    p.add_argument("--burn-in", type=int, default=0)
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--period", type=int, help="list cycles of this minimal period instead")
    p.add_argument("--smallest-odd", type=int, metavar="MAX",
                   help="report the smallest odd period <= MAX instead")
    _add_format(p, "csv")
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("witness", help="search for a turbulence triple of g or g^2")
    _add_map_args(p)
    p.add_argument("--order", type=int, choices=(1, 2), default=2)
    _add_format(p)
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("olg", help="reduce an OLG economy and certify it")
    p.add_argument("action", choices=("reduce", "path"))
    p.add_argument("--config", required=True, help="economy JSON file")
    p.add_argument("--c0", type=float, help="initial young consumption (path)")
    p.add_argument("--n", type=int, default=100, help="path length")
    _add_cfg_args(p)
    _add_format(p, "human")
    p.set_defaults(func=cmd_olg)

    p = sub.add_parser("bifurcation", help="fixed-point and period-two loci as CSV (param,x,kind)")
    _add_map_args(p)
    p.add_argument("--range", nargs=2, type=float, metavar=("LO", "HI"), required=True)
    p.add_argument("--steps", type=int, default=1000)
    p.add_argument("--n-scan", type=int, default=4096)
    p.add_argument("--out", default="-", help="CSV path, '-' for stdout")
    p.add_argument("--plot-script", help="also write a matplotlib script that plots the CSV")
    p.set_defaults(func=cmd_bifurcation)

    p = sub.add_parser("region", help="conditions h(m)>m and h^2(m)<m on a (beta, lambda) grid "
                                      "as CSV (beta,lambda,cond9,cond10,region)")
    p.add_argument("--beta", nargs=2, type=float, metavar=("LO", "HI"), required=True)
    p.add_argument("--lambda", dest="lam", nargs=2, type=float, metavar=("LO", "HI"), required=True)
    p.add_argument("--steps", type=int, default=200)
    p.add_argument("--out", default="-")
    p.add_argument("--plot-script")
    p.set_defaults(func=cmd_region)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"chaos-cert: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ClassicalCaseViolation as exc:
        print(f"chaos-cert: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (ChaosCertError, ValueError, OSError) as exc:
        print(f"chaos-cert: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
