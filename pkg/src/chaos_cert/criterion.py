"""The set Pi and the Deng-Khan-Mitra classification.

For g in G with peak m on [a, b], let Pi be the points x in [m, b] with
g(x) in [m, b] and g^2(x) = x. Then

* g has an odd-period cycle  iff  g^2(m) < m and g^3(m) < min Pi;
* g^2 is turbulent           iff  g^2(m) < m and g^3(m) <= max Pi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import RegimeError
from .interval import (
    CertifyConfig,
    GClassCertificate,
    Membership,
    banded,
    build_interval,
    certify_g_class,
)
from .maps import Family, UnimodalMapSpec
from .numeric import RootConfig, bisect, sign_change_indices

TANGENCY_TOL = 1e-8
MEMBERSHIP_SLACK = 1e-12


@dataclass(frozen=True)
class PiSet:
    points: tuple[float, ...]
    residuals: tuple[float, ...]
    tangency: tuple[bool, ...]
    fixed_point: float
    contains_fixed_point: bool
    z_in_interval: bool
    resolution_warning: bool = False

    @property
    def is_singleton(self) -> bool:
        return len(self.points) == 1

    @property
    def min(self) -> float:
        return self.points[0]

    @property
    def max(self) -> float:
        return self.points[-1]

    def to_dict(self) -> dict:
        return {
            "points": list(self.points),
            "residuals": list(self.residuals),
            "tangency": list(self.tangency),
            "fixed_point": self.fixed_point,
            "contains_fixed_point": self.contains_fixed_point,
            "is_singleton": self.is_singleton,
            "z_in_interval": self.z_in_interval,
            "resolution_warning": self.resolution_warning,
        }


def golden_section_min(f, lo: float, hi: float, iters: int = 80) -> tuple[float, float]:
    """(x, f(x)) minimising a unimodal ``f`` on [lo, hi]."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = hi - invphi * (hi - lo)
    d = lo + invphi * (hi - lo)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc < fd:
            hi, d, fd = d, c, fc
            c = hi - invphi * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + invphi * (hi - lo)
            fd = f(d)
        if hi - lo <= 4 * np.finfo(float).eps * max(1.0, abs(lo)):
            break
    x = 0.5 * (lo + hi)
    return x, f(x)


def compute_pi(cert: GClassCertificate, cfg: RootConfig | None = None) -> PiSet:
    """All period-one and period-two points of g in [m, b] whose image stays in [m, b].

    Roots of g^2(x) - x come from a sign-change scan refined by bisection down
    to adjacent floats. Tangent roots, which a sign scan cannot see, are
    recovered by golden-section polishing of |g^2(x) - x| at grid minima. The
    fixed point is always added from its closed form.

    Requires only that the peak lies above the diagonal (b > m), so it also
    works for certificates that are not members of G.
    """
    cfg = cfg or RootConfig()
    g = cert.map
    m, b = cert.m, cert.b
    raw = g._raw

    def F(x):
        return raw(raw(x)) - x

    z = g.fixed_point()
    z_in = m <= z <= b and m <= raw(z) <= b

    xs = np.linspace(m, b, cfg.n_scan + 1)
    ys = F(xs)
    cell = (b - m) / cfg.n_scan
    found: list[tuple[float, bool]] = []

    for i in sign_change_indices(ys):
        if ys[i] == 0.0:
            found.append((float(xs[i]), False))
            continue
        lo, hi, _ = bisect(F, xs[i], xs[i + 1], tol=0.0, max_iter=cfg.max_iter)
        x = lo if abs(F(lo)) <= abs(F(hi)) else hi
        found.append((x, False))

    # tangent roots: local minima of |F| with no sign change around them
    absy = np.abs(ys)
    small = np.flatnonzero(absy[1:-1] < 1e-3 * max(1.0, b - m)) + 1
    s = np.sign(ys)
    cand = small[
        (absy[small] <= absy[small - 1])
        & (absy[small] <= absy[small + 1])
        & (s[small - 1] == s[small])
        & (s[small] == s[small + 1])
    ]
    for i in cand:
        x, fx = golden_section_min(lambda t: abs(F(t)), float(xs[i - 1]), float(xs[i + 1]))
        if fx < TANGENCY_TOL:
            found.append((x, True))

    merge_tol = 1e-9 * max(1.0, abs(z))
    pts: list[tuple[float, bool]] = []
    if z_in:
        pts.append((z, False))
    for x, tan in sorted(found):
        if abs(x - z) <= merge_tol:
            continue
        if pts and any(abs(x - p) <= merge_tol for p, _ in pts):
            continue
        if not (m <= x <= b):
            continue
        gx = raw(x)
        if not (m - MEMBERSHIP_SLACK <= gx <= b + MEMBERSHIP_SLACK):
            continue
        pts.append((x, tan))
    pts.sort()

    warn = any(pts[k + 1][0] - pts[k][0] < cell for k in range(len(pts) - 1))
    if z_in and not warn:
        # a crossing at z whose direction disagrees with F'(z) = g'(z)^2 - 1
        # means an odd number of further roots share z's cell
        k = int(np.clip(np.searchsorted(xs, z) - 1, 0, cfg.n_scan - 1))
        s_lo, s_hi = np.sign(ys[k]), np.sign(ys[k + 1])
        slope = float(g.derivative(z)) ** 2 - 1.0
        if s_lo != 0 and s_hi != 0 and slope != 0:
            warn = bool((s_hi - s_lo) * slope <= 0)
    points = tuple(p for p, _ in pts)
    return PiSet(
        points=points,
        residuals=tuple(abs(float(F(p))) for p in points),
        tangency=tuple(t for _, t in pts),
        fixed_point=z,
        contains_fixed_point=z_in,
        z_in_interval=z_in,
        resolution_warning=warn,
    )


class VerdictKind(str, Enum):
    ODD_PERIOD_CYCLE = "OddPeriodCycle"
    TURBULENT_SECOND_ITERATE = "TurbulentSecondIterate"
    NO_CERTIFICATE = "NoCertificate"
    BOUNDARY_INDETERMINATE = "BoundaryIndeterminate"


@dataclass(frozen=True)
class Witness:
    g2m: float
    g3m: float
    min_pi: float
    max_pi: float
    # signed margins; positive means the inequality holds
    g2m_margin: float
    odd_margin: float
    turbulence_margin: float

    def to_dict(self) -> dict:
        return {
            "g2m": self.g2m,
            "g3m": self.g3m,
            "min_pi": self.min_pi,
            "max_pi": self.max_pi,
            "residuals": {
                "m_minus_g2m": self.g2m_margin,
                "min_pi_minus_g3m": self.odd_margin,
                "max_pi_minus_g3m": self.turbulence_margin,
            },
        }


@dataclass(frozen=True)
class ChaosVerdict:
    kind: VerdictKind
    certificate: GClassCertificate
    witness: Witness | None = None
    pi: PiSet | None = None
    reason: str = ""

    @property
    def odd_cycle(self) -> bool:
        return self.kind is VerdictKind.ODD_PERIOD_CYCLE

    @property
    def turbulent(self) -> bool:
        return self.kind in (VerdictKind.ODD_PERIOD_CYCLE, VerdictKind.TURBULENT_SECOND_ITERATE)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "reason": self.reason,
            "witness": self.witness.to_dict() if self.witness else None,
            "pi": self.pi.to_dict() if self.pi else None,
            "certificate": self.certificate.to_dict(),
        }


def classify(
    cert: GClassCertificate, pi: PiSet | None, cfg: CertifyConfig | None = None
) -> ChaosVerdict:
    """Apply the odd-cycle and turbulence tests to a certified map."""
    cfg = cfg or CertifyConfig()
    if cert.verdict is Membership.INDETERMINATE:
        return ChaosVerdict(VerdictKind.BOUNDARY_INDETERMINATE, cert, None, pi,
                            "membership in G is indeterminate")
    if cert.verdict is not Membership.MEMBER:
        failed = ",".join(c.id for c in cert.checks if not c.passed)
        return ChaosVerdict(VerdictKind.NO_CERTIFICATE, cert, None, pi,
                            f"not a member of G (failed {failed})")
    if pi is None or not pi.points:
        return ChaosVerdict(VerdictKind.BOUNDARY_INDETERMINATE, cert, None, pi, "Pi is empty")

    g, m = cert.map, cert.m
    g2m = cert.a
    g3m = g(g2m)
    w = Witness(
        g2m=g2m,
        g3m=g3m,
        min_pi=pi.min,
        max_pi=pi.max,
        g2m_margin=m - g2m,
        odd_margin=pi.min - g3m,
        turbulence_margin=pi.max - g3m,
    )
    eps = cfg.eps_strict

    def verdict(kind: VerdictKind, reason: str) -> ChaosVerdict:
        return ChaosVerdict(kind, cert, w, pi, reason)

    ok, indet = banded(w.g2m_margin, True, eps)
    if indet:
        return verdict(VerdictKind.BOUNDARY_INDETERMINATE, "g^2(m) is within eps of m")
    if not ok:
        return verdict(VerdictKind.NO_CERTIFICATE, "g^2(m) >= m")
    if pi.resolution_warning:
        return verdict(VerdictKind.BOUNDARY_INDETERMINATE,
                       "Pi contains roots closer than the scan resolution")
    odd_ok, odd_indet = banded(w.odd_margin, True, eps)
    if odd_indet:
        return verdict(VerdictKind.BOUNDARY_INDETERMINATE, "g^3(m) is within eps of min Pi")
    if odd_ok:
        return verdict(VerdictKind.ODD_PERIOD_CYCLE, "g^2(m) < m and g^3(m) < min Pi")
    turb_ok, turb_indet = banded(w.turbulence_margin, False, eps)
    if turb_indet:
        return verdict(VerdictKind.BOUNDARY_INDETERMINATE, "g^3(m) is within eps of max Pi")
    if turb_ok:
        return verdict(VerdictKind.TURBULENT_SECOND_ITERATE,
                       "g^2(m) < m and min Pi <= g^3(m) <= max Pi")
    return verdict(VerdictKind.NO_CERTIFICATE, "g^3(m) > max Pi")


def certify(
    g: UnimodalMapSpec,
    certify_cfg: CertifyConfig | None = None,
    root_cfg: RootConfig | None = None,
) -> ChaosVerdict:
    """Full pipeline: interval, G-membership, Pi, classification.

    Raises PeakBelowDiagonalError when g(m) <= m.
    """
    build_interval(g)
    cert = certify_g_class(g, certify_cfg)
    pi = compute_pi(cert, root_cfg) if cert.verdict is Membership.MEMBER else None
    return classify(cert, pi, certify_cfg)


def odd_cycle_residual_closed_form(g: UnimodalMapSpec) -> float:
    """g^3(m) - z from the fully expanded expressions, no iteration."""
    if g.family is Family.RICKER:
        r = g.r
        return r**3 * math.exp(-r / math.e - 1.0 - r * r * math.exp(-r / math.e - 1.0)) - math.log(r)
    lam, al, be = g.lam, g.alpha, g.beta
    m = 1.0 / (al * (be - 1.0))
    c = m * (al * m + 1.0) ** (-be)
    h2 = c * lam**2 / (al * c * lam + 1.0) ** be
    h3 = c * lam**3 / ((al * c * lam + 1.0) ** be * (al * h2 + 1.0) ** be)
    return h3 - (lam ** (1.0 / be) - 1.0) / al


def check_odd_cycle_inequality(
    g: UnimodalMapSpec,
    certify_cfg: CertifyConfig | None = None,
    root_cfg: RootConfig | None = None,
) -> float:
    """Signed residual g^3(m) - z, negative exactly when an odd cycle exists.

    Only meaningful where Pi = {z}; outside that regime a RegimeError is raised.
    """
    cert = certify_g_class(g, certify_cfg)
    if cert.verdict is not Membership.MEMBER:
        raise RegimeError(f"{g} is not certified in G; Pi is not a singleton regime")
    pi = compute_pi(cert, root_cfg)
    if not pi.is_singleton:
        raise RegimeError(f"{g}: Pi has {len(pi.points)} points, not a singleton")
    return odd_cycle_residual_closed_form(g)
