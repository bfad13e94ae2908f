"""Brute-force checks that do not go through the Pi/criterion machinery.

Periodic orbits are found as roots of g^p(x) - x on a dense grid, and turbulence
witnesses by explicit preimage search on the monotone branches of g^k. These
searches are one-sided: finding an orbit or witness proves it exists, while
missing one at finite resolution proves nothing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .interval import certify_g_class
from .maps import UnimodalMapSpec
from .numeric import bisect, sign_change_indices

MAX_PERIOD = 41

# fixed cross-validation panel: both sides of every odd-cycle threshold
REGRESSION_PANEL: tuple[UnimodalMapSpec, ...] = (
    *(UnimodalMapSpec.ricker(r) for r in (8.0, 12.0, 17.0, 17.5, 25.0)),
    *(UnimodalMapSpec.hassell(lam, 5.0) for lam in (10.0, 50.0, 85.5, 120.0)),
    *(UnimodalMapSpec.hassell(lam, 10.0) for lam in (20.0, 30.0)),
    *(UnimodalMapSpec.hassell(lam, 15.0) for lam in (12.0, 13.0)),
)


@dataclass(frozen=True)
class OracleConfig:
    n_scan_low: int = 2**17   # periods <= 3
    n_scan_high: int = 2**19  # longer periods oscillate faster
    residual_tol: float = 1e-8
    minimality_tol: float = 1e-6
    distinct_tol: float = 1e-8

    def n_scan(self, period: int) -> int:
        return self.n_scan_low if period <= 3 else self.n_scan_high


@dataclass(frozen=True)
class OrbitRecord:
    period: int
    points: tuple[float, ...]
    residual: float
    stability: float

    def to_dict(self) -> dict:
        return {
            "period": self.period,
            "points": list(self.points),
            "residual": self.residual,
            "stability": self.stability,
        }


@dataclass(frozen=True)
class TurbulenceWitness:
    x1: float
    x2: float
    x3: float
    map_order: int
    residuals: tuple[float, float, float]  # |G(x1)-x1|, |G(x2)-x1|, |G(x3)-x2|
    ordering: str

    def to_dict(self) -> dict:
        return {
            "x1": self.x1,
            "x2": self.x2,
            "x3": self.x3,
            "map_order": self.map_order,
            "residuals": list(self.residuals),
            "ordering": self.ordering,
        }


@dataclass
class Trajectory:
    values: np.ndarray
    burn_in: int
    interval: tuple[float, float] | None = None
    stayed_in_interval: bool | None = None

    @property
    def min(self) -> float:
        return float(self.values.min())

    @property
    def max(self) -> float:
        return float(self.values.max())

    def to_csv(self) -> str:
        lines = ["t,x"]
        lines += [f"{self.burn_in + i},{x!r}" for i, x in enumerate(self.values.tolist())]
        return "\n".join(lines) + "\n"


def default_interval(g: UnimodalMapSpec) -> tuple[float, float]:
    """[g^2(m), g(m)] in increasing order (no membership requirement)."""
    cert = certify_g_class(g)
    return min(cert.a, cert.b), max(cert.a, cert.b)


def _refine(F, lo: float, hi: float) -> float:
    a, b, _ = bisect(F, lo, hi, tol=0.0, max_iter=400)
    return a if abs(F(a)) <= abs(F(b)) else b


def _roots_on_grid(F, xs: np.ndarray, ys: np.ndarray) -> list[float]:
    out = []
    for i in sign_change_indices(ys):
        if ys[i] == 0.0:
            out.append(float(xs[i]))
        else:
            out.append(_refine(F, float(xs[i]), float(xs[i + 1])))
    return out


def _divisors(p: int) -> list[int]:
    return [d for d in range(1, p) if p % d == 0]


def _group_cycles(
    g: UnimodalMapSpec, period: int, roots: list[float], cfg: OracleConfig
) -> list[OrbitRecord]:
    raw = g._raw
    roots = [
        x for x in roots
        if all(abs(g.iterate(x, d) - x) > cfg.minimality_tol for d in _divisors(period))
    ]
    roots.sort()
    orbits: list[OrbitRecord] = []
    claimed: list[float] = []
    for x in roots:
        if any(abs(x - c) <= cfg.distinct_tol * max(1.0, abs(c)) for c in claimed):
            continue
        pts = [x]
        for _ in range(period - 1):
            pts.append(raw(pts[-1]))
        # every cycle point is itself a root; claim them so the cycle is reported once
        claimed.extend(pts)
        start = int(np.argmin(pts))
        pts = pts[start:] + pts[:start]
        resid = max(abs(g.iterate(p, period) - p) for p in pts)
        if resid > cfg.residual_tol:
            continue
        spread = min(
            abs(pts[i] - pts[j]) for i in range(len(pts)) for j in range(i)
        ) if period > 1 else math.inf
        if spread <= cfg.distinct_tol:
            continue
        stab = abs(float(g.iterate_derivative(pts[0], period)))
        orbits.append(OrbitRecord(period, tuple(float(p) for p in pts), float(resid), stab))
    return orbits


def find_periodic_orbits(
    g: UnimodalMapSpec,
    interval: tuple[float, float] | None = None,
    period: int = 3,
    cfg: OracleConfig | None = None,
) -> list[OrbitRecord]:
    """Cycles of minimal period ``period`` with a point in ``interval``."""
    cfg = cfg or OracleConfig()
    if not 1 <= period <= MAX_PERIOD:
        raise ValueError(f"period must be in [1, {MAX_PERIOD}], got {period}")
    lo, hi = interval or default_interval(g)
    xs = np.linspace(lo, hi, cfg.n_scan(period) + 1)
    ys = g.iterate(xs, period) - xs

    def F(x):
        return g.iterate(x, period) - x

    return _group_cycles(g, period, _roots_on_grid(F, xs, ys), cfg)


def smallest_odd_period(
    g: UnimodalMapSpec,
    interval: tuple[float, float] | None = None,
    max_period: int = 9,
    cfg: OracleConfig | None = None,
) -> tuple[int, list[OrbitRecord]] | None:
    """Smallest odd period p in [3, max_period] with a cycle in ``interval``.

    The dense grid is iterated once, so a search up to large periods costs a
    single pass.
    """
    cfg = cfg or OracleConfig()
    if max_period > MAX_PERIOD:
        raise ValueError(f"max_period must be <= {MAX_PERIOD}")
    lo, hi = interval or default_interval(g)
    xs = np.linspace(lo, hi, cfg.n_scan_high + 1)
    y = xs
    for p in range(1, max_period + 1):
        y = g._raw(y)
        if p < 3 or p % 2 == 0:
            continue

        def F(x, p=p):
            return g.iterate(x, p) - x

        orbits = _group_cycles(g, p, _roots_on_grid(F, xs, y - xs), cfg)
        if orbits:
            return p, orbits
    return None


def _branch_preimages(
    g: UnimodalMapSpec, order: int, target: float, lo: float, hi: float, n: int
) -> list[float]:
    """All x in [lo, hi] with g^order(x) = target, one search per monotone branch."""
    xs = np.linspace(lo, hi, n + 1)
    d = np.asarray(g.iterate_derivative(xs, order), dtype=float)

    def D(x):
        return float(g.iterate_derivative(x, order))

    crit = []
    for i in sign_change_indices(d):
        if d[i] == 0.0:
            crit.append(float(xs[i]))
        else:
            crit.append(_refine(D, float(xs[i]), float(xs[i + 1])))
    edges = [lo] + sorted(c for c in crit if lo < c < hi) + [hi]

    def F(x):
        return g.iterate(x, order) - target

    out: list[float] = []
    for a, b in zip(edges[:-1], edges[1:]):
        fa, fb = F(a), F(b)
        if fa == 0.0:
            out.append(a)
        elif fb == 0.0:
            out.append(b)
        elif (fa < 0) != (fb < 0):
            out.append(_refine(F, a, b))
        elif min(abs(fa), abs(fb)) <= 1e-12:
            out.append(a if abs(fa) <= abs(fb) else b)
    uniq: list[float] = []
    for x in sorted(out):
        if not uniq or x - uniq[-1] > 1e-12:
            uniq.append(x)
    return uniq


def find_turbulence_witness(
    g: UnimodalMapSpec,
    iterate_order: int = 2,
    interval: tuple[float, float] | None = None,
    cfg: OracleConfig | None = None,
) -> TurbulenceWitness | None:
    """Search for x1, x2, x3 with G(x2) = G(x1) = x1, G(x3) = x2, x3 strictly between.

    G is the ``iterate_order``-th iterate of g restricted to ``interval``.
    """
    cfg = cfg or OracleConfig()
    if iterate_order not in (1, 2):
        raise ValueError("iterate_order must be 1 or 2")
    k = iterate_order
    lo, hi = interval or default_interval(g)
    n = cfg.n_scan_low

    def G(x):
        return g.iterate(x, k)

    xs = np.linspace(lo, hi, n + 1)
    fixed = _roots_on_grid(lambda x: G(x) - x, xs, G(xs) - xs)
    try:
        z = g.fixed_point()
        if lo <= z <= hi:
            fixed.append(z)
    except Exception:
        pass
    fixed = sorted(set(fixed))

    for x1 in fixed:
        r1 = abs(G(x1) - x1)
        if r1 > cfg.residual_tol:
            continue
        for x2 in _branch_preimages(g, k, x1, lo, hi, n):
            if abs(x2 - x1) <= cfg.distinct_tol:
                continue
            r2 = abs(G(x2) - x1)
            if r2 > cfg.residual_tol:
                continue
            a, b = min(x1, x2), max(x1, x2)
            for x3 in _branch_preimages(g, k, x2, a, b, max(256, n // 4)):
                if not (a + cfg.distinct_tol < x3 < b - cfg.distinct_tol):
                    continue
                r3 = abs(G(x3) - x2)
                if r3 > cfg.residual_tol:
                    continue
                ordering = "x1<x3<x2" if x1 < x2 else "x2<x3<x1"
                return TurbulenceWitness(float(x1), float(x2), float(x3), k,
                                         (float(r1), float(r2), float(r3)), ordering)
    return None


def orbit_simulate(
    g: UnimodalMapSpec,
    x0: float,
    burn_in: int = 0,
    n: int = 100,
    interval: tuple[float, float] | None = None,
) -> Trajectory:
    """n iterates of g after discarding ``burn_in`` of them."""
    if burn_in < 0 or n < 1:
        raise ValueError("need burn_in >= 0 and n >= 1")
    x = float(x0)
    g(x)  # domain check on x0
    for _ in range(burn_in):
        x = g(x)
    vals = np.empty(n)
    for i in range(n):
        vals[i] = x
        x = g(x)
    stayed = None
    if interval is not None:
        lo, hi = interval
        slack = 1e-12 * max(1.0, abs(hi))
        stayed = bool(np.all((vals >= lo - slack) & (vals <= hi + slack)))
    return Trajectory(vals, burn_in, interval, stayed)


@dataclass(frozen=True)
class PanelRecord:
    map: UnimodalMapSpec
    verdict: str
    odd_period: int | None
    odd_residual: float | None
    witness: TurbulenceWitness | None
    period_three: bool

    @property
    def consistent(self) -> bool:
        """Positive verdicts have witnesses; NoCertificate has no 3-cycle."""
        if self.verdict == "OddPeriodCycle":
            return self.odd_period is not None and self.witness is not None
        if self.verdict == "TurbulentSecondIterate":
            return self.witness is not None
        if self.verdict == "NoCertificate":
            return not self.period_three
        return True


def cross_validate(
    g: UnimodalMapSpec, max_odd_period: int = 9, cfg: OracleConfig | None = None
) -> PanelRecord:
    """Compare the criterion's verdict for g against brute-force evidence on [a, b]."""
    from .criterion import certify

    cfg = cfg or OracleConfig()
    verdict = certify(g).kind.value
    interval = default_interval(g)
    odd = smallest_odd_period(g, interval, max_odd_period, cfg)
    witness = find_turbulence_witness(g, 2, interval, cfg)
    three = bool(find_periodic_orbits(g, interval, 3, cfg))
    return PanelRecord(
        map=g,
        verdict=verdict,
        odd_period=odd[0] if odd else None,
        odd_residual=max(o.residual for o in odd[1]) if odd else None,
        witness=witness,
        period_three=three,
    )
