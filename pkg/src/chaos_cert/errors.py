"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class ChaosCertError(Exception):
    """Base class for all errors raised by chaos_cert."""


class DomainError(ChaosCertError, ValueError):
    """Argument outside the domain of a map or operation."""


class InvalidParameterError(DomainError):
    """Map or economy parameters violate their invariants."""


class NoFixedPointError(DomainError):
    """The map has no positive fixed point for these parameters."""


class PeakBelowDiagonalError(DomainError):
    """g(m) <= m, so the interval [g^2(m), g(m)] is not a usable restriction."""


class InvalidEconomyError(InvalidParameterError):
    pass


class NumericRangeError(ChaosCertError, ArithmeticError):
    """Overflow, underflow to zero, or a non-finite value during evaluation."""


class RegimeError(ChaosCertError):
    """A closed form was requested outside the regime where it is valid."""


class NoSignChangeError(ChaosCertError, ValueError):
    pass


class MaxIterationsError(ChaosCertError, RuntimeError):
    pass


class NoFlipError(ChaosCertError, ValueError):
    """A threshold predicate is constant on the requested bracket."""


class ClassicalCaseViolation(ChaosCertError):
    """c0(t) <= w0 at some step of a consumption path."""

    def __init__(self, t: int, c0: float, w0: float):
        super().__init__(f"classical case violated at t={t}: c0={c0!r} <= w0={w0!r}")
        self.t = t
        self.c0 = c0
        self.w0 = w0
