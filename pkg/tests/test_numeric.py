import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from tamechroma.errors import ConvergenceError, DomainError, NoSignChange
from tamechroma.numeric import Interval, LogReal, bisect, bisect_bracket, log_binomial, newton2

# ln C(n, k) at 40 digits with mpmath
MP_LOG_BINOM = [
    (10**12, 5 * 10**11, 693147180545.90400751),
    (10**12, 10**6, 14815502.231270711917),
    (10**6, 500000, 693140.04701306368255),
    (10**9, 123, 2076.7373065144276696),
    (1000, 15, 75.611546593658232264),
]


class TestLogReal:
    def test_zero_and_one(self):
        assert LogReal.zero().sign == 0 and LogReal.zero().is_zero()
        assert float(LogReal.one()) == 1.0
        assert LogReal.from_log(-math.inf).sign == 0

    def test_invalid_sign(self):
        with pytest.raises(DomainError):
            LogReal(2, 0.0)

    def test_huge_product(self):
        x = LogReal.from_log(1e6)
        assert (x * x).log_abs == 2e6
        assert float(x) == math.inf

    def test_cancellation_gives_exact_zero(self):
        a = LogReal.from_log(50.0)
        assert (a - a).is_zero()
        b = LogReal.from_log(50.0 + 1e-16)
        assert (b - a).is_zero()

    def test_opposite_signs(self):
        assert float(LogReal.from_float(3.0) + LogReal.from_float(-5.0)) == pytest.approx(-2.0)
        assert float(LogReal.from_float(2.0) - 7.0) == pytest.approx(-5.0)

    def test_division_and_power(self):
        assert float(LogReal.from_float(6.0) / 3.0) == pytest.approx(2.0)
        assert float(LogReal.from_float(4.0) ** 0.5) == pytest.approx(2.0)
        with pytest.raises(ZeroDivisionError):
            LogReal.one() / LogReal.zero()
        with pytest.raises(DomainError):
            LogReal.from_float(-1.0) ** 0.5

    def test_ordering(self):
        vals = [-3.0, -0.5, 0.0, 0.25, 7.0]
        lrs = [LogReal.from_float(v) for v in vals]
        assert sorted(lrs) == lrs
        assert LogReal.from_float(-3.0) < LogReal.from_float(-0.5)

    def test_log_of_nonpositive(self):
        with pytest.raises(DomainError):
            LogReal.zero().log()

    @given(st.floats(1e-200, 1e200), st.floats(1e-200, 1e200))
    def test_add_matches_float(self, a, b):
        s = LogReal.from_float(a) + LogReal.from_float(b)
        exact = Fraction(a) + Fraction(b)
        assert abs(Fraction(math.exp(s.log_abs)) - exact) / exact <= Fraction(1, 10**12)

    @given(st.floats(-1e100, 1e100, allow_nan=False), st.floats(-1e100, 1e100, allow_nan=False))
    def test_mul_matches_float(self, a, b):
        p = float(LogReal.from_float(a) * LogReal.from_float(b))
        assert p == pytest.approx(a * b, rel=1e-12, abs=0)


class TestInterval:
    def test_invalid(self):
        with pytest.raises(DomainError):
            Interval(1.0, 0.0)

    def test_point_is_tight_around_is_outward(self):
        p = Interval.point(0.1)
        assert p.lo == p.hi == 0.1
        a = Interval.around(0.1)
        assert a.lo < 0.1 < a.hi

    def test_contains_true_sum(self):
        # 0.1 + 0.2 is not exactly representable; the enclosure must hold the rational sum
        s = Interval.point(0.1) + Interval.point(0.2)
        exact = Fraction(0.1) + Fraction(0.2)
        assert Fraction(s.lo) <= exact <= Fraction(s.hi)

    def test_log_of_nonpositive(self):
        with pytest.raises(DomainError):
            Interval(-1.0, 1.0).log()

    def test_division_by_interval_with_zero(self):
        with pytest.raises((DomainError, ZeroDivisionError)):
            Interval.point(1.0) / Interval(-1.0, 1.0)

    def test_hull_and_intersects(self):
        a, b = Interval(0, 1), Interval(2, 3)
        assert not a.intersects(b)
        assert a.hull(b) == Interval(0, 3)
        assert Interval(0.5, 2.5).intersects(b)

    @given(st.floats(-100, 100), st.floats(0, 10), st.floats(-100, 100), st.floats(0, 10),
           st.sampled_from(["+", "-", "*", "/"]))
    def test_arithmetic_contains_midpoint_result(self, a, wa, b, wb, op):
        x, y = Interval(a, a + wa), Interval(b, b + wb)
        if op == "/" and y.lo <= 0 <= y.hi:
            return
        mx, my = Fraction(x.lo + x.hi) / 2, Fraction(y.lo + y.hi) / 2
        ops = {"+": (lambda u, v: u + v), "-": (lambda u, v: u - v),
               "*": (lambda u, v: u * v), "/": (lambda u, v: u / v)}
        res, exact = ops[op](x, y), ops[op](mx, my)
        assert Fraction(res.lo) <= exact <= Fraction(res.hi)

    @given(st.floats(-50, 50), st.floats(0, 5))
    def test_exp_contains(self, a, w):
        x = Interval(a, a + w)
        e = x.exp()
        assert e.lo <= math.exp(x.lo) and math.exp(x.hi) <= e.hi
        assert math.exp(x.mid) in e

    @given(st.floats(1e-100, 1e100), st.floats(0, 10))
    def test_log_contains(self, a, w):
        x = Interval(a, a + w * a)
        lg = x.log()
        assert math.log(x.mid) in lg


class TestLogBinomial:
    def test_examples(self):
        assert log_binomial(6, 3) == pytest.approx(math.log(20), abs=1e-12)
        assert log_binomial(10**9, 0) == 0.0
        assert log_binomial(52, 5) == pytest.approx(math.log(2598960), abs=1e-12)

    def test_domain(self):
        with pytest.raises(DomainError):
            log_binomial(5, 6)
        with pytest.raises(DomainError):
            log_binomial(5, -1)

    @pytest.mark.parametrize("n,k,ref", MP_LOG_BINOM)
    def test_against_mpmath(self, n, k, ref):
        assert log_binomial(n, k) == pytest.approx(ref, rel=1e-14, abs=1e-9)

    @given(st.integers(0, 400), st.data())
    def test_exact_small(self, n, data):
        k = data.draw(st.integers(0, n))
        assert log_binomial(n, k) == pytest.approx(math.log(math.comb(n, k)), abs=1e-9)

    @given(st.integers(1, 2000))
    def test_symmetry(self, n):
        k = n // 3
        assert log_binomial(n, k) == pytest.approx(log_binomial(n, n - k), abs=1e-9)


class TestRootFinders:
    def test_bisect_sqrt2(self):
        assert bisect(lambda x: x * x - 2, 1, 2, 1e-12) == pytest.approx(math.sqrt(2), abs=1e-12)

    def test_bisect_identity(self):
        assert bisect(lambda x: x, -1, 1) == 0.0

    def test_bisect_no_sign_change(self):
        with pytest.raises(NoSignChange):
            bisect(lambda x: x * x + 1, -1, 1)

    @given(st.floats(-10, 10))
    def test_bracket_holds_sign_change(self, r):
        f = lambda x: x - r  # noqa: E731
        a, b = bisect_bracket(f, -20, 20, 1e-9)
        assert f(a) <= 0 <= f(b)
        assert b - a <= 1e-9

    def test_newton_linear(self):
        x, y = newton2(lambda x, y: (x - 1, y - 2), lambda x, y: ((1, 0), (0, 1)), (0, 0))
        assert (x, y) == pytest.approx((1, 2))
        x, y = newton2(lambda x, y: (x + y - 3, x - y - 1), lambda x, y: ((1, 1), (1, -1)), (0, 0))
        assert (x, y) == pytest.approx((2, 1))

    def test_newton_damped(self):
        # atan needs damping from far away
        x, y = newton2(lambda x, y: (math.atan(x), y), lambda x, y: ((1 / (1 + x * x), 0), (0, 1)),
                       (10.0, 1.0))
        assert abs(x) < 1e-12 and abs(y) < 1e-12

    def test_newton_failure_carries_residual(self):
        with pytest.raises(ConvergenceError) as info:
            newton2(lambda x, y: (x * x + 1, y), lambda x, y: ((2 * x, 0), (0, 1)), (1.0, 0.0),
                    max_iter=5)
        assert info.value.residual > 0


def test_containment_sweep_10k_pairs():
    import numpy as np
    rng = np.random.default_rng(2024)
    lo = rng.uniform(-20, 20, size=(10_000, 2))
    w = rng.uniform(0, 3, size=(10_000, 2))
    for (a, b), (wa, wb) in zip(lo.tolist(), w.tolist()):
        x, y = Interval(a, a + wa), Interval(b, b + wb)
        mx, my = Fraction(x.lo + x.hi) / 2, Fraction(y.lo + y.hi) / 2
        for res, exact in ((x + y, mx + my), (x - y, mx - my), (x * y, mx * my)):
            assert Fraction(res.lo) <= exact <= Fraction(res.hi)
        assert math.exp(x.mid) in x.exp()
        pos = Interval(abs(a) + 1e-3, abs(a) + 1e-3 + wa)
        assert math.log(pos.mid) in pos.log()
