"""Evaluation, derivatives and closed forms of the Ricker and Hassell maps."""

import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chaos_cert import Iterate, UnimodalMapSpec, eval_iterate, evaluate
from chaos_cert.errors import (
    DomainError,
    InvalidParameterError,
    NoFixedPointError,
    NumericRangeError,
)
from chaos_cert.maps import Family, peak_above_diagonal_bound, peak_coefficient

mpmath.mp.dps = 40

ricker = UnimodalMapSpec.ricker
hassell = UnimodalMapSpec.hassell


def mp_eval(g: UnimodalMapSpec, x, order: int = 1):
    """High-precision reference evaluation, independent of the float code path."""
    y = mpmath.mpf(x)
    for _ in range(order):
        if g.family is Family.RICKER:
            y = mpmath.mpf(g.r) * y * mpmath.exp(-y)
        else:
            y = mpmath.mpf(g.lam) * y * (mpmath.mpf(g.alpha) * y + 1) ** (-mpmath.mpf(g.beta))
    return y


class TestEvaluate:
    def test_hassell_peak_value_is_linear_in_lambda(self):
        for lam in (10.0, 50.0, 90.0):
            assert hassell(lam, 5.0)(0.25) == pytest.approx(0.08192 * lam, rel=1e-12)

    def test_ricker_at_one(self):
        assert evaluate(ricker(17.5), 1.0) == pytest.approx(17.5 / math.e, rel=1e-15)
        assert evaluate(ricker(17.5), 1.0) == pytest.approx(float(mp_eval(ricker(17.5), 1.0)), rel=1e-15)

    @pytest.mark.parametrize(
        "g, x",
        [(ricker(17.5), 1.0), (ricker(3.0), 0.3), (hassell(90, 5), 0.25), (hassell(12.5, 15), 2.0)],
    )
    def test_matches_high_precision(self, g, x):
        assert g(x) == pytest.approx(float(mp_eval(g, x)), rel=1e-14)

    def test_array_input(self):
        g = ricker(8.0)
        xs = np.linspace(0.1, 5.0, 7)
        np.testing.assert_allclose(g(xs), [g(float(x)) for x in xs], rtol=1e-15)

    @pytest.mark.parametrize("x", [0.0, -1.0, math.nan, math.inf])
    def test_domain(self, x):
        with pytest.raises(DomainError):
            ricker(5.0)(x)

    def test_underflow_is_reported(self):
        with pytest.raises(NumericRangeError):
            ricker(5.0)(800.0)


class TestIterate:
    def test_hassell_second_iterate_closed_form(self):
        lam = 50.0
        expected = 0.08192 * lam**2 / (0.08192 * lam + 1.0) ** 5
        assert eval_iterate(Iterate(hassell(lam, 5.0), 2), 0.25) == pytest.approx(expected, rel=1e-4)
        assert eval_iterate(Iterate(hassell(lam, 5.0), 2), 0.25) == pytest.approx(
            float(mp_eval(hassell(lam, 5.0), 0.25, 2)), rel=1e-14
        )

    def test_ricker_third_iterate_closed_form(self):
        r = 17.0
        closed = r**3 * math.exp(-r / math.e - 1.0 - r * r * math.exp(-r / math.e - 1.0))
        it = Iterate(ricker(r), 3)
        assert it(1.0) == pytest.approx(closed, rel=1e-13)
        assert it(1.0) == pytest.approx(float(mp_eval(ricker(r), 1.0, 3)), rel=1e-13)

    def test_order_must_be_positive(self):
        with pytest.raises(DomainError):
            Iterate(ricker(3.0), 0)


class TestDerivative:
    @pytest.mark.parametrize("g, m", [(ricker(5.0), 1.0), (hassell(90.0, 5.0), 0.25)])
    def test_vanishes_at_peak(self, g, m):
        assert g.critical_point() == m
        assert g.derivative(m) == pytest.approx(0.0, abs=1e-14)

    def test_ricker_value(self):
        g = ricker(5.0)
        h = 1e-6
        fd = (g(0.5 + h) - g(0.5 - h)) / (2 * h)
        assert g.derivative(0.5) == pytest.approx(5.0 * math.exp(-0.5) * 0.5, rel=1e-15)
        assert g.derivative(0.5) == pytest.approx(fd, rel=1e-6)

    def test_hassell_matches_mpmath_diff(self):
        g = hassell(40.0, 7.0, 0.5)
        for x in (0.05, 0.3, 1.0, 4.0):
            ref = mpmath.diff(lambda t: mp_eval(g, t), x)
            assert g.derivative(x) == pytest.approx(float(ref), rel=1e-12)

    def test_iterate_derivative_chain_rule(self):
        g = ricker(12.0)
        x, h = 0.7, 1e-7
        fd = (g.iterate(x + h, 3) - g.iterate(x - h, 3)) / (2 * h)
        assert g.iterate_derivative(x, 3) == pytest.approx(fd, rel=1e-5)


class TestCriticalAndFixedPoints:
    @pytest.mark.parametrize("beta, m", [(5.0, 0.25), (10.0, 1 / 9), (15.0, 1 / 14)])
    def test_hassell_peak(self, beta, m):
        assert hassell(50.0, beta).critical_point() == pytest.approx(m, rel=1e-15)

    def test_general_alpha_peak(self):
        assert hassell(50.0, 5.0, alpha=2.0).critical_point() == pytest.approx(0.125)

    def test_no_interior_peak(self):
        with pytest.raises(InvalidParameterError):
            hassell(50.0, 1.0).critical_point()

    def test_ricker_fixed_point_by_bisection(self):
        g = ricker(17.0)
        lo, hi = 1.0, 5.0
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if g(mid) > mid:
                lo = mid
            else:
                hi = mid
        assert g.fixed_point() == pytest.approx(lo, abs=1e-12)
        assert g.fixed_point() == pytest.approx(2.83321, abs=1e-5)

    @pytest.mark.parametrize("g", [ricker(1.0), ricker(0.5), hassell(1.0, 5.0), hassell(0.3, 2.0)])
    def test_no_fixed_point(self, g):
        with pytest.raises(NoFixedPointError):
            g.fixed_point()


class TestClosedForms:
    @pytest.mark.parametrize(
        "beta, coef, tol", [(5.0, 0.08192, 5e-6), (10.0, 0.03874, 5e-5), (15.0, 0.02537, 5e-5)]
    )
    def test_peak_coefficient(self, beta, coef, tol):
        assert peak_coefficient(beta) == pytest.approx(coef, abs=tol)

    def test_peak_coefficient_beta5_exact(self):
        assert peak_coefficient(5.0) == pytest.approx(1.25**-5 / 4, rel=1e-15)

    @pytest.mark.parametrize("beta, bound", [(5.0, 3.052), (10.0, 2.868), (15.0, 2.815)])
    def test_peak_above_diagonal_bound(self, beta, bound):
        assert peak_above_diagonal_bound(beta) == pytest.approx(bound, abs=1e-3)


class TestSpec:
    def test_roundtrip(self):
        for g in (ricker(17.0), hassell(90.0, 5.0, 0.5)):
            assert UnimodalMapSpec.from_dict(g.to_dict()) == g

    @pytest.mark.parametrize("kwargs", [{"r": -1.0}, {"r": 0.0}, {"r": math.nan}])
    def test_invalid_ricker(self, kwargs):
        with pytest.raises(InvalidParameterError):
            ricker(**kwargs)

    def test_validated_regime(self):
        assert hassell(90, 5).validated_regime
        assert not hassell(90, 5, alpha=0.5).validated_regime

    def test_large_beta_limit_approaches_ricker(self):
        # lambda x (x/beta + 1)^(-beta) -> lambda x e^(-x) as beta grows
        beta = 1e4
        h = hassell(17.0, beta, alpha=1.0 / beta)
        f = ricker(17.0)
        for x in (0.3, 1.0, 2.5):
            assert h(x) == pytest.approx(f(x), rel=1e-3)


positive = st.floats(min_value=1e-3, max_value=20.0, allow_nan=False)


@settings(max_examples=200, deadline=None)
@given(r=st.floats(min_value=1.01, max_value=60.0), x=positive)
def test_ricker_derivative_matches_finite_difference(r, x):
    g = ricker(r)
    h = 1e-6 * max(1.0, x)
    fd = (g(x + h) - g(x - h)) / (2 * h)
    d = g.derivative(x)
    assert abs(d - fd) <= 1e-5 * max(1.0, abs(d))


@settings(max_examples=200, deadline=None)
@given(
    lam=st.floats(min_value=1.01, max_value=200.0),
    beta=st.floats(min_value=1.1, max_value=20.0),
    x=st.floats(min_value=1e-3, max_value=5.0),
)
def test_hassell_fixed_point_residual(lam, beta, x):
    g = hassell(lam, beta)
    z = g.fixed_point()
    assert abs(g(z) - z) <= 1e-12 * max(1.0, z)


@settings(max_examples=200, deadline=None)
@given(r=st.floats(min_value=1.5, max_value=25.0), x=st.floats(min_value=0.01, max_value=6.0),
       p=st.integers(1, 4), q=st.integers(1, 4))
def test_iterate_composition(r, x, p, q):
    g = ricker(r)
    lhs = g.iterate(x, p + q)
    rhs = g.iterate(g.iterate(x, p), q)
    assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-300)
