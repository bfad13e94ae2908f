"""Pure-exchange overlapping-generations economies and their reduced maps.

Agents live two periods, receive endowments (w0, w1) and consume (c0, c1).
With separable utility that is linear in old-age consumption, the forward
dynamics in the classical case (c0 > w0) read

    c0(t+1) = w0 + V(c0(t)) (c0(t) - w0)

where V = U_0 / U_1 is the constrained marginal rate of substitution. Writing
x = c0 - w0 turns the two supported utilities into Ricker and Hassell maps.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Union

import numpy as np

from .criterion import ChaosVerdict, certify
from .errors import ClassicalCaseViolation, InvalidEconomyError
from .maps import UnimodalMapSpec


@dataclass(frozen=True)
class ExponentialUtility:
    """U = A - exp(a (1 - (c0 - w0)/a)) + c1."""

    A: float
    a: float

    def __post_init__(self) -> None:
        if not (self.A > 0 and self.a > 0):
            raise InvalidEconomyError(f"exponential utility needs A > 0 and a > 0, got {self}")


@dataclass(frozen=True)
class CRRAShiftedUtility:
    """U = lambda (c0 + b)^(1 - beta) / (1 - beta) + c1."""

    lam: float
    beta: float
    b: float = 0.0

    def __post_init__(self) -> None:
        if not self.lam > 0:
            raise InvalidEconomyError(f"CRRA utility needs lambda > 0, got {self.lam!r}")
        if not self.beta >= 0 or self.beta == 1.0:
            raise InvalidEconomyError(f"CRRA utility needs beta >= 0, beta != 1, got {self.beta!r}")
        if not self.b >= 0:
            raise InvalidEconomyError(f"CRRA utility needs b >= 0, got {self.b!r}")


Utility = Union[ExponentialUtility, CRRAShiftedUtility]


@dataclass(frozen=True)
class OLGEconomy:
    w0: float
    w1: float
    utility: Utility

    def __post_init__(self) -> None:
        if not (self.w0 >= 0 and self.w1 >= 0):
            raise InvalidEconomyError(f"endowments must be >= 0, got w0={self.w0!r}, w1={self.w1!r}")

    def cmrs(self, c0: float) -> float:
        """V(c0, w0, w1): the interest factor implied by the first-order condition."""
        u = self.utility
        if isinstance(u, ExponentialUtility):
            return math.exp(u.a * (1.0 - (c0 - self.w0) / u.a))
        return u.lam * (c0 + u.b) ** (-u.beta)

    @classmethod
    def from_dict(cls, d: dict) -> OLGEconomy:
        try:
            ud = d["utility"]
            kind = ud["kind"]
            if kind == "exponential":
                utility: Utility = ExponentialUtility(float(ud["A"]), float(ud["a"]))
            elif kind == "crra_shifted":
                utility = CRRAShiftedUtility(float(ud["lambda"]), float(ud["beta"]), float(ud.get("b", 0.0)))
            else:
                raise InvalidEconomyError(f"unknown utility kind {kind!r}")
            return cls(float(d["w0"]), float(d["w1"]), utility)
        except KeyError as exc:
            raise InvalidEconomyError(f"economy config is missing {exc}") from None

    @classmethod
    def from_json(cls, path: str | Path) -> OLGEconomy:
        return cls.from_dict(json.loads(Path(path).read_text()))

    def to_dict(self) -> dict:
        u = self.utility
        if isinstance(u, ExponentialUtility):
            ud = {"kind": "exponential", "A": u.A, "a": u.a}
        else:
            ud = {"kind": "crra_shifted", "lambda": u.lam, "beta": u.beta, "b": u.b}
        return {"w0": self.w0, "w1": self.w1, "utility": ud}


@dataclass(frozen=True)
class ReducedDynamics:
    map: UnimodalMapSpec
    substitution: dict = field(default_factory=dict)
    notes: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {"map": self.map.to_dict(), "substitution": dict(self.substitution),
                "notes": list(self.notes)}


def reduce(econ: OLGEconomy) -> ReducedDynamics:
    """Rewrite the economy's consumption dynamics as x_{t+1} = g(x_t), x = c0 - w0.

    Exponential utility gives exp(a - x) x, i.e. Ricker with r = e^a.
    Shifted CRRA gives lambda x (x + b + w0)^(-beta); factoring out
    (b + w0)^(-beta) yields Hassell with alpha = 1/(b + w0) and
    lambda_eff = lambda alpha^beta (equal to lambda when b + w0 = 1).
    """
    u = econ.utility
    sub = {"x": "c0 - w0", "shift": econ.w0, "scale": 1.0}
    if isinstance(u, ExponentialUtility):
        g = UnimodalMapSpec.ricker(math.exp(u.a))
        return ReducedDynamics(g, {**sub, "r": "exp(a)"})
    if not u.b + econ.w0 > 0:
        raise InvalidEconomyError("b + w0 must be > 0 so that alpha = 1/(b + w0) exists")
    alpha = 1.0 / (u.b + econ.w0)
    notes = []
    if u.beta <= 1.0:
        notes.append("beta <= 1: reduced map has no interior peak, certification impossible")
    if alpha != 1.0:
        notes.append("alpha != 1: outside the regime where thresholds were validated")
    g = UnimodalMapSpec.hassell(u.lam * alpha**u.beta, u.beta, alpha)
    return ReducedDynamics(
        g, {**sub, "alpha": "1/(b + w0)", "lambda": "lambda * alpha**beta"}, tuple(notes)
    )


@dataclass
class ConsumptionPath:
    t: np.ndarray
    c0: np.ndarray
    c1: np.ndarray
    rho: np.ndarray
    budget_residual: float
    market_residual: float
    reduction_residual: float
    c1_negative_at: int | None = None

    def to_csv(self) -> str:
        lines = ["t,c0,c1,rho"]
        for row in zip(self.t.tolist(), self.c0.tolist(), self.c1.tolist(), self.rho.tolist()):
            lines.append("{},{!r},{!r},{!r}".format(*row))
        return "\n".join(lines) + "\n"


def consumption_orbit(
    econ: OLGEconomy, dyn: ReducedDynamics | None, c0_init: float, n: int
) -> ConsumptionPath:
    """Iterate the consumption dynamics and recover (c0, c1, rho) for t = 0..n-1.

    c0 is advanced with the economy's own CMRS; c1 comes from market clearing
    and rho from the budget constraint. The residual fields measure how well
    the budget, market-clearing and reduced-map identities hold on the path.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    dyn = dyn or reduce(econ)
    w0, w1 = econ.w0, econ.w1
    c0 = np.empty(n + 1)
    c0[0] = c0_init
    for t in range(n + 1):
        if not c0[t] > w0:
            raise ClassicalCaseViolation(t, float(c0[t]), w0)
        if t < n:
            c0[t + 1] = w0 + econ.cmrs(c0[t]) * (c0[t] - w0)

    x = c0 - w0
    c1 = w0 + w1 - c0
    rho = (c0[1:] - w0) / (c0[:-1] - w0)
    budget = c1[1:] - (w1 + rho * (w0 - c0[:-1]))
    market = w0 - c0 + w1 - c1
    reduction = x[1:] - dyn.map(x[:-1])
    neg = np.flatnonzero(c1[:n] < 0)
    return ConsumptionPath(
        t=np.arange(n),
        c0=c0[:n],
        c1=c1[:n],
        rho=rho,
        budget_residual=float(np.max(np.abs(budget))),
        market_residual=float(np.max(np.abs(market))),
        reduction_residual=float(np.max(np.abs(reduction) / np.maximum(1.0, np.abs(x[1:])))),
        c1_negative_at=int(neg[0]) if neg.size else None,
    )


def economy_verdict(econ: OLGEconomy, **kwargs) -> tuple[ReducedDynamics, ChaosVerdict]:
    """The chaos verdict of the reduced map, which is also the economy's verdict."""
    dyn = reduce(econ)
    return dyn, certify(dyn.map, **kwargs)
