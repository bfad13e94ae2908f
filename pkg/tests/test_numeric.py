"""Bisection, bracket scanning and predicate thresholds."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chaos_cert import RootConfig, UnimodalMapSpec, find_root, scan_brackets, solve_threshold
from chaos_cert.errors import MaxIterationsError, NoFlipError, NoSignChangeError, NumericRangeError
from chaos_cert.numeric import bisect, log_grid, predicate_flips, solve_parameter_threshold
from chaos_cert.predicates import PREDICATE_IDS, parameter_predicate


class TestFindRoot:
    def test_linear(self):
        assert find_root(lambda x: x - 2.0, 0.0, 5.0) == pytest.approx(2.0, abs=1e-12)

    def test_g2m_threshold_equation(self):
        r = find_root(lambda r: r * r * math.exp(-r / math.e - 1.0) - 1.0, 5.0, 15.0)
        assert r == pytest.approx(9.549, abs=5e-4)

    def test_period_two_point(self):
        r = 17.0
        x = find_root(lambda x: x * (1.0 + r * math.exp(-x)) - 2.0 * math.log(r), 3.0, 7.0)
        g = UnimodalMapSpec.ricker(r)
        assert g.iterate(x, 2) == pytest.approx(x, rel=1e-11)
        assert x > math.log(r)

    def test_no_sign_change(self):
        with pytest.raises(NoSignChangeError):
            find_root(lambda x: x * x + 1.0, -1.0, 1.0)

    def test_max_iterations(self):
        with pytest.raises(MaxIterationsError):
            find_root(lambda x: x - 0.3, 0.0, 1.0, RootConfig(tol_root=1e-15, max_iter=5))

    def test_nan(self):
        with pytest.raises(NumericRangeError):
            find_root(lambda x: math.nan, 0.0, 1.0)

    def test_config_validation(self):
        with pytest.raises(ValueError):
            RootConfig(tol_root=0.0)
        with pytest.raises(ValueError):
            RootConfig(max_iter=0)


@settings(max_examples=300, deadline=None)
@given(
    root=st.floats(min_value=-50.0, max_value=50.0),
    left=st.floats(min_value=1e-3, max_value=100.0),
    right=st.floats(min_value=1e-3, max_value=100.0),
    tol=st.sampled_from([1e-12, 1e-9, 1e-6]),
)
def test_bisection_contract(root, left, right, tol):
    lo, hi = root - left, root + right
    a, b, n = bisect(lambda x: math.atan(x - root), lo, hi, tol=tol)
    assert b - a <= tol or b <= np.nextafter(a, math.inf)
    assert n <= math.ceil(math.log2((hi - lo) / tol)) + 2
    assert a <= root + 1e-12 * max(1.0, abs(root)) and b >= root - 1e-12 * max(1.0, abs(root))


class TestScanBrackets:
    def test_quadratic(self):
        br = scan_brackets(lambda x: x * x - 1.0, -2.0, 2.0, 8)
        assert len(br) == 2
        assert br[0][0] <= -1.0 <= br[0][1]
        assert br[1][0] <= 1.0 <= br[1][1]

    def test_constant(self):
        assert scan_brackets(lambda x: np.ones_like(x), 0.0, 1.0, 16) == []

    def test_scalar_callable(self):
        assert len(scan_brackets(math.sin, 0.5, 10.0, 100)) == 3

    def test_ricker_second_iterate_at_r8(self):
        g = UnimodalMapSpec.ricker(8.0)
        br = scan_brackets(lambda x: g.iterate(x, 2) - x, 1.0, g(1.0), 4096)
        assert len(br) >= 3
        roots = [find_root(lambda x: g.iterate(x, 2) - x, lo, hi) for lo, hi in br]
        np.testing.assert_allclose(roots, [math.log(4.0), math.log(8.0), math.log(16.0)], atol=1e-10)

    @pytest.mark.parametrize("lo, hi, n", [(1.0, 1.0, 4), (0.0, 1.0, 1)])
    def test_invalid(self, lo, hi, n):
        with pytest.raises(ValueError):
            scan_brackets(lambda x: x, lo, hi, n)


class TestSolveThreshold:
    @pytest.mark.parametrize(
        "family, pid, bracket, beta, expected, tol",
        [
            ("ricker", "g2m-below-m", (math.e, 15.0), None, 9.549, 1e-3),
            ("ricker", "odd-cycle", (10.0, 25.0), None, 16.999, 1e-3),
            ("ricker", "peak-above-diagonal", (1.5, 5.0), None, math.e, 1e-3),
            ("hassell", "odd-cycle", (50.0, 120.0), 5.0, 85.08, 1e-2),
            ("hassell", "g2m-below-m", (5.0, 40.0), 5.0, 20.45, 1e-2),
            ("hassell", "peak-above-diagonal", (1.5, 5.0), 10.0, 2.868, 1e-3),
        ],
    )
    def test_paper_values(self, family, pid, bracket, beta, expected, tol):
        res = solve_threshold(family, pid, bracket, beta=beta)
        assert res.critical_value == pytest.approx(expected, abs=tol)
        assert res.monotone
        lo, hi = res.bracket
        assert lo < res.critical_value < hi
        assert hi - lo <= 1e-4

    def test_flip_brackets_differ(self):
        pred, _, _ = parameter_predicate("ricker", "odd-cycle")
        res = solve_threshold("ricker", "odd-cycle", (10.0, 25.0))
        for lo, hi in res.flips:
            assert pred(lo) != pred(hi)

    def test_non_monotone_predicate_reports_all_flips(self):
        # Pi stops being a singleton at period doubling and becomes one again at 9.549
        res = solve_threshold("ricker", "pi-singleton", (5.0, 15.0))
        assert not res.monotone
        assert len(res.flips) == 2
        assert res.critical_value == pytest.approx(math.exp(2.0), abs=1e-3)
        assert res.flips[1][0] == pytest.approx(9.549, abs=1e-3)

    def test_constant_predicate(self):
        with pytest.raises(NoFlipError):
            solve_threshold("ricker", "peak-above-diagonal", (5.0, 10.0))

    def test_hassell_needs_beta(self):
        with pytest.raises(ValueError):
            solve_threshold("hassell", "odd-cycle", (50.0, 120.0))

    def test_unknown_predicate(self):
        with pytest.raises(ValueError):
            solve_threshold("ricker", "entropy", (1.0, 2.0))

    def test_deterministic(self):
        a = solve_threshold("hassell", "g2m-below-m", (5.0, 40.0), beta=10.0)
        b = solve_threshold("hassell", "g2m-below-m", (5.0, 40.0), beta=10.0)
        assert a == b
        assert a.to_csv_row() == b.to_csv_row()

    def test_serialization(self, validate):
        res = solve_threshold("ricker", "g2m-below-m", (math.e, 15.0))
        validate("threshold", res.to_dict())
        row = res.to_csv_row().split(",")
        assert len(row) == len(res.CSV_HEADER.split(","))

    def test_generic_predicate(self):
        res = solve_parameter_threshold(lambda p: p * p > 2.0, (0.0, 3.0), tol=1e-9)
        assert res.critical_value == pytest.approx(math.sqrt(2.0), abs=1e-9)


def test_predicate_ids():
    assert set(PREDICATE_IDS) == {
        "peak-above-diagonal", "interval-self-map", "g-class-member", "pi-singleton",
        "g2m-below-m", "odd-cycle", "turbulence",
    }


@pytest.mark.parametrize(
    "family, beta, start, last_flip",
    [("ricker", None, 9.7, 16.999), ("hassell", 5.0, 20.5, 85.08),
     ("hassell", 10.0, 13.0, 29.86), ("hassell", 15.0, 11.6, 23.96)],
)
@pytest.mark.parametrize("pid", ["g-class-member", "odd-cycle", "turbulence"])
def test_no_reflip_up_to_1000(family, beta, start, last_flip, pid):
    """Once a predicate holds it keeps holding on a log grid up to 1e3."""
    pred, _, _ = parameter_predicate(family, pid, beta=beta)
    flips = predicate_flips(pred, log_grid(start, 1000.0, 120))
    if pid == "g-class-member":
        assert flips == []
    else:
        assert len(flips) == 1
        lo, hi = flips[0]
        assert lo <= last_flip <= hi
