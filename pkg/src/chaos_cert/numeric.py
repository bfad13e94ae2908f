"""Bracketing root finder and parameter-threshold solver.

Only bisection is used. The threshold layer bisects boolean predicates whose
flip points can be non-smooth, so robustness matters more than speed here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import MaxIterationsError, NoFlipError, NoSignChangeError, NumericRangeError

Bracket = tuple[float, float]


@dataclass(frozen=True)
class RootConfig:
    tol_root: float = 1e-12
    max_iter: int = 200
    n_scan: int = 65536

    def __post_init__(self) -> None:
        if not self.tol_root > 0:
            raise ValueError("tol_root must be > 0")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if self.n_scan < 2:
            raise ValueError("n_scan must be >= 2")


def _value(f: Callable[[float], float], x: float) -> float:
    y = float(f(x))
    if math.isnan(y):
        raise NumericRangeError(f"function returned NaN at x={x!r}")
    return y


def bisect(
    f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-12, max_iter: int = 200
) -> tuple[float, float, int]:
    """Shrink a sign-change bracket of ``f`` to width <= tol.

    Returns ``(lo, hi, iterations)``. A bracket collapses to a point when an
    exact zero is hit or when floating point cannot split it further.
    """
    lo, hi = float(lo), float(hi)
    if lo > hi:
        lo, hi = hi, lo
    flo = _value(f, lo)
    if flo == 0.0:
        return lo, lo, 0
    fhi = _value(f, hi)
    if fhi == 0.0:
        return hi, hi, 0
    if (flo < 0) == (fhi < 0):
        raise NoSignChangeError(f"f({lo!r})={flo!r} and f({hi!r})={fhi!r} have the same sign")
    n = 0
    while hi - lo > tol:
        mid = lo + 0.5 * (hi - lo)
        if not lo < mid < hi:
            break
        if n >= max_iter:
            raise MaxIterationsError(f"bisection did not reach width {tol:g} in {max_iter} steps")
        fm = _value(f, mid)
        n += 1
        if fm == 0.0:
            return mid, mid, n
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return lo, hi, n


def find_root(
    f: Callable[[float], float], lo: float, hi: float, cfg: RootConfig | None = None
) -> float:
    """Root of ``f`` inside a sign-change bracket [lo, hi]."""
    cfg = cfg or RootConfig()
    a, b, _ = bisect(f, lo, hi, cfg.tol_root, cfg.max_iter)
    return a + 0.5 * (b - a)


def _evaluate_grid(f, xs: np.ndarray) -> np.ndarray:
    try:
        ys = np.asarray(f(xs), dtype=float)
        if ys.shape == xs.shape:
            return ys
    except (TypeError, ValueError):
        pass
    return np.array([float(f(float(x))) for x in xs])


def sign_change_indices(ys: np.ndarray) -> np.ndarray:
    """Indices i where ys changes sign between i and i+1, or ys[i] is exactly 0."""
    s = np.sign(ys)
    idx = np.nonzero((s[:-1] * s[1:] < 0) | (s[:-1] == 0))[0]
    if s[-1] == 0:
        idx = np.append(idx, len(ys) - 1)
    return idx


def scan_brackets(f, lo: float, hi: float, n: int) -> list[Bracket]:
    """Sign-change brackets of ``f`` on a uniform grid of n subintervals.

    ``f`` may be vectorised over numpy arrays; scalar callables also work.
    A grid point where ``f`` is exactly zero yields the degenerate bracket
    ``(x, x)``.
    """
    if not lo < hi:
        raise ValueError("scan_brackets needs lo < hi")
    if n < 2:
        raise ValueError("scan_brackets needs n >= 2")
    xs = np.linspace(lo, hi, n + 1)
    ys = _evaluate_grid(f, xs)
    out: list[Bracket] = []
    for i in sign_change_indices(ys):
        if ys[i] == 0.0:
            out.append((float(xs[i]), float(xs[i])))
        else:
            out.append((float(xs[i]), float(xs[i + 1])))
    return out


# -- parameter thresholds ----------------------------------------------------


@dataclass(frozen=True)
class ThresholdResult:
    parameter: str
    critical_value: float
    bracket: Bracket
    tol: float
    predicate_id: str
    flips: list[Bracket] = field(default_factory=list)
    monotone: bool = True
    fixed: dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "parameter": self.parameter,
            "critical_value": self.critical_value,
            "bracket": list(self.bracket),
            "tol": self.tol,
            "predicate_id": self.predicate_id,
            "flips": [list(b) for b in self.flips],
            "monotone": self.monotone,
            "fixed": dict(self.fixed),
        }

    CSV_HEADER = "parameter,predicate_id,critical_value,lo,hi,tol,n_flips,monotone"

    def to_csv_row(self) -> str:
        lo, hi = self.bracket
        return (
            f"{self.parameter},{self.predicate_id},{self.critical_value!r},{lo!r},{hi!r},"
            f"{self.tol!r},{len(self.flips)},{str(self.monotone).lower()}"
        )


def bisect_predicate(
    pred: Callable[[float], bool], lo: float, hi: float, tol: float, max_iter: int = 200
) -> Bracket:
    """Shrink [lo, hi] with pred(lo) != pred(hi) to width <= tol."""
    plo = pred(lo)
    if plo == pred(hi):
        raise NoFlipError(f"predicate has the same value at {lo!r} and {hi!r}")
    n = 0
    while hi - lo > tol:
        mid = lo + 0.5 * (hi - lo)
        if not lo < mid < hi:
            break
        if n >= max_iter:
            raise MaxIterationsError("predicate bisection exceeded max_iter")
        n += 1
        if pred(mid) == plo:
            lo = mid
        else:
            hi = mid
    return lo, hi


def predicate_flips(
    pred: Callable[[float], bool], grid: Sequence[float]
) -> list[Bracket]:
    """Consecutive grid pairs where the predicate changes value."""
    vals = [bool(pred(float(p))) for p in grid]
    return [
        (float(grid[i]), float(grid[i + 1]))
        for i in range(len(vals) - 1)
        if vals[i] != vals[i + 1]
    ]


def solve_parameter_threshold(
    pred: Callable[[float], bool],
    bracket: Bracket,
    *,
    tol: float = 1e-4,
    n_coarse: int = 256,
    parameter: str = "p",
    predicate_id: str = "custom",
    fixed: dict[str, float] | None = None,
) -> ThresholdResult:
    """Locate every flip of ``pred`` on a coarse grid and bisect each one."""
    lo, hi = map(float, bracket)
    if not lo < hi:
        raise ValueError("threshold bracket needs lo < hi")
    grid = np.linspace(lo, hi, n_coarse + 1)
    coarse = predicate_flips(pred, grid)
    if not coarse:
        raise NoFlipError(f"predicate {predicate_id!r} is constant on [{lo:g}, {hi:g}]")
    flips = [bisect_predicate(pred, a, b, tol) for a, b in coarse]
    a, b = flips[0]
    return ThresholdResult(
        parameter=parameter,
        critical_value=a + 0.5 * (b - a),
        bracket=(a, b),
        tol=tol,
        predicate_id=predicate_id,
        flips=flips,
        monotone=len(flips) == 1,
        fixed=dict(fixed or {}),
    )


def solve_threshold(
    family,
    predicate_id: str,
    bracket: Bracket,
    *,
    beta: float | None = None,
    alpha: float = 1.0,
    tol: float = 1e-4,
    n_coarse: int = 256,
    certify_cfg=None,
    root_cfg: RootConfig | None = None,
) -> ThresholdResult:
    """Critical value of the family parameter (r or lambda) where a named predicate flips.

    ``predicate_id`` is one of :data:`chaos_cert.predicates.PREDICATE_IDS`.
    Hassell maps need ``beta``.
    """
    from .predicates import parameter_predicate

    pred, pname, fixed = parameter_predicate(
        family, predicate_id, beta=beta, alpha=alpha, certify_cfg=certify_cfg, root_cfg=root_cfg
    )
    return solve_parameter_threshold(
        pred,
        bracket,
        tol=tol,
        n_coarse=n_coarse,
        parameter=pname,
        predicate_id=predicate_id,
        fixed=fixed,
    )


def log_grid(lo: float, hi: float, n: int) -> np.ndarray:
    return np.geomspace(lo, hi, n)
