"""The two unimodal map families and their closed-form properties.

Ricker:   f(x) = r x exp(-x)
Hassell:  h(x) = lambda x (alpha x + 1)^(-beta)

Every function accepts a Python float or a numpy array. Arrays are evaluated
elementwise, which is what the dense scans in the criterion and oracle modules
rely on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Any

import numpy as np

from .errors import DomainError, InvalidParameterError, NoFixedPointError, NumericRangeError


class Family(str, Enum):
    RICKER = "ricker"
    HASSELL = "hassell"


def _check_positive(x, what: str = "x") -> None:
    if isinstance(x, np.ndarray):
        if x.size and not np.all((x > 0) & np.isfinite(x)):
            raise DomainError(f"{what} must be finite and > 0 everywhere")
    elif not (x > 0 and math.isfinite(x)):
        raise DomainError(f"{what} must be finite and > 0, got {x!r}")


def _check_result(y):
    if isinstance(y, np.ndarray):
        if not (np.all(np.isfinite(y)) and np.all(y > 0)):
            raise NumericRangeError("map value overflowed or underflowed to zero")
    elif not (math.isfinite(y) and y > 0):
        raise NumericRangeError(f"map value out of floating-point range: {y!r}")
    return y


@dataclass(frozen=True)
class UnimodalMapSpec:
    """A member of the Ricker or Hassell family.

    Use the :meth:`ricker` and :meth:`hassell` constructors; the unused
    parameters of the other family stay ``None``.
    """

    family: Family
    r: float | None = None
    lam: float | None = None
    alpha: float | None = None
    beta: float | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "family", Family(self.family))
        if self.family is Family.RICKER:
            if self.r is None or not self.r > 0 or not math.isfinite(self.r):
                raise InvalidParameterError(f"Ricker map needs r > 0, got {self.r!r}")
            if any(p is not None for p in (self.lam, self.alpha, self.beta)):
                raise InvalidParameterError("Ricker map takes only r")
        else:
            for name in ("lam", "alpha", "beta"):
                v = getattr(self, name)
                if v is None or not v > 0 or not math.isfinite(v):
                    raise InvalidParameterError(f"Hassell map needs {name} > 0, got {v!r}")
            if self.r is not None:
                raise InvalidParameterError("Hassell map does not take r")

    @classmethod
    def ricker(cls, r: float) -> UnimodalMapSpec:
        return cls(Family.RICKER, r=float(r))

    @classmethod
    def hassell(cls, lam: float, beta: float, alpha: float = 1.0) -> UnimodalMapSpec:
        return cls(Family.HASSELL, lam=float(lam), alpha=float(alpha), beta=float(beta))

    # -- parameter bookkeeping ---------------------------------------------

    @property
    def parameter_name(self) -> str:
        """Name of the bifurcation parameter ("r" or "lambda")."""
        return "r" if self.family is Family.RICKER else "lambda"

    @property
    def parameter(self) -> float:
        return self.r if self.family is Family.RICKER else self.lam

    def with_parameter(self, value: float) -> UnimodalMapSpec:
        """Copy of this map with the bifurcation parameter replaced."""
        if self.family is Family.RICKER:
            return UnimodalMapSpec.ricker(value)
        return UnimodalMapSpec.hassell(value, self.beta, self.alpha)

    @property
    def validated_regime(self) -> bool:
        """False for Hassell maps with alpha != 1; thresholds are only checked at alpha = 1."""
        return self.family is Family.RICKER or self.alpha == 1.0

    def params(self) -> dict[str, float]:
        if self.family is Family.RICKER:
            return {"r": self.r}
        return {"lambda": self.lam, "alpha": self.alpha, "beta": self.beta}

    def to_dict(self) -> dict[str, Any]:
        return {"family": self.family.value, **self.params()}

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> UnimodalMapSpec:
        family = Family(str(d.get("family", "")).lower())
        if family is Family.RICKER:
            return cls.ricker(d["r"])
        return cls.hassell(d["lambda"], d["beta"], d.get("alpha", 1.0))

    def __str__(self) -> str:
        if self.family is Family.RICKER:
            return f"Ricker(r={self.r:g})"
        return f"Hassell(lambda={self.lam:g}, alpha={self.alpha:g}, beta={self.beta:g})"

    # -- evaluation ----------------------------------------------------------

    def __call__(self, x):
        """Evaluate the map at x > 0."""
        _check_positive(x)
        return _check_result(self._raw(x))

    def _raw(self, x):
        # no domain checks; callers guarantee x > 0
        if self.family is Family.RICKER:
            if isinstance(x, np.ndarray):
                return self.r * x * np.exp(-x)
            return self.r * x * math.exp(-x)
        return self.lam * x * (self.alpha * x + 1.0) ** (-self.beta)

    def iterate(self, x, order: int):
        """order-fold composition g^order(x)."""
        if order < 1:
            raise DomainError(f"iterate order must be >= 1, got {order}")
        _check_positive(x)
        y = x
        try:
            for _ in range(order):
                y = _check_result(self._raw(y))
        except OverflowError as exc:
            raise NumericRangeError(str(exc)) from exc
        return y

    def derivative(self, x):
        _check_positive(x)
        if self.family is Family.RICKER:
            ex = np.exp(-x) if isinstance(x, np.ndarray) else math.exp(-x)
            return self.r * ex * (1.0 - x)
        a, b = self.alpha, self.beta
        return self.lam * (a * x + 1.0) ** (-b - 1.0) * (1.0 + a * x - a * b * x)

    def iterate_derivative(self, x, order: int):
        """(g^order)'(x) by the chain rule."""
        d = 1.0
        y = x
        for _ in range(order):
            d = d * self.derivative(y)
            y = self._raw(y)
        return d

    def critical_point(self) -> float:
        """Location m of the unique maximum."""
        if self.family is Family.RICKER:
            return 1.0
        if self.beta <= 1.0:
            raise InvalidParameterError(
                f"Hassell map has no interior maximum for beta <= 1 (beta={self.beta:g})"
            )
        return 1.0 / (self.alpha * (self.beta - 1.0))

    def fixed_point(self) -> float:
        """The unique positive fixed point z."""
        if self.family is Family.RICKER:
            if self.r <= 1.0:
                raise NoFixedPointError(f"Ricker map has no positive fixed point for r={self.r:g} <= 1")
            return math.log(self.r)
        if self.lam <= 1.0:
            raise NoFixedPointError(
                f"Hassell map has no positive fixed point for lambda={self.lam:g} <= 1"
            )
        return (self.lam ** (1.0 / self.beta) - 1.0) / self.alpha


@dataclass(frozen=True)
class Iterate:
    """The order-th compositional power of a map, itself callable."""

    map: UnimodalMapSpec
    order: int

    def __post_init__(self) -> None:
        if self.order < 1:
            raise DomainError(f"iterate order must be >= 1, got {self.order}")

    def __call__(self, x):
        return self.map.iterate(x, self.order)

    def derivative(self, x):
        return self.map.iterate_derivative(x, self.order)


def peak_coefficient(beta: float, alpha: float = 1.0) -> float:
    """c with h(m) = c * lambda for the Hassell family: m (alpha m + 1)^(-beta)."""
    m = 1.0 / (alpha * (beta - 1.0))
    return m * (alpha * m + 1.0) ** (-beta)


def peak_above_diagonal_bound(beta: float) -> float:
    """Smallest lambda with h(m) > m at alpha = 1, namely (1/(beta-1) + 1)^beta."""
    return (1.0 / (beta - 1.0) + 1.0) ** beta


def evaluate(g: UnimodalMapSpec, x):
    """g(x) with domain checks; functional form of ``g(x)``."""
    return g(x)


def eval_iterate(it: Iterate, x):
    """it.map composed it.order times, evaluated at x."""
    return it(x)
