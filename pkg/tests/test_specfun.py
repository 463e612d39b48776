import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad
from scipy.special import dawsn

from morse_thermo.specfun import (
    ConvergenceError,
    QuadratureError,
    _dawson_cf,
    _dawson_series,
    dawson,
    dawson_prime,
    erfi,
    erfi_scaled,
    integrate_adaptive,
    kummer_1f1,
    log_erfi,
)

mpmath.mp.dps = 40


def erfi_series(x):
    """Maclaurin series (2/sqrt(pi)) sum x^(2k+1)/(k!(2k+1)) at 40 digits."""
    x = mpmath.mpf(x)
    total, k = mpmath.mpf(0), 0
    while True:
        term = x ** (2 * k + 1) / (mpmath.factorial(k) * (2 * k + 1))
        total += term
        if abs(term) < mpmath.mpf(10) ** -45 * max(abs(total), 1):
            return 2 / mpmath.sqrt(mpmath.pi) * total
        k += 1


def dawson_oracle(x):
    return float(mpmath.exp(-mpmath.mpf(x) ** 2) * erfi_series(x) * mpmath.sqrt(mpmath.pi) / 2)


finite = st.floats(min_value=-25.0, max_value=25.0, allow_nan=False)


class TestErfiDawsonExamples:
    def test_zero(self):
        assert erfi(0.0) == 0.0
        assert dawson(0.0) == 0.0

    def test_erfi_odd(self):
        assert erfi(-0.7) == -erfi(0.7)

    def test_erfi_one(self):
        assert erfi(1.0) == pytest.approx(1.650425758797543, rel=1e-14)
        assert erfi(1.0) == pytest.approx(float(erfi_series(1)), rel=1e-15)

    def test_dawson_one(self):
        # e^{-1} * integral_0^1 e^{t^2} dt by independent quadrature
        ref = math.exp(-1.0) * quad(lambda t: math.exp(t * t), 0, 1, epsabs=1e-15)[0]
        assert dawson(1.0) == pytest.approx(ref, rel=1e-13)
        assert dawson(1.0) == pytest.approx(0.538079506912768, abs=1e-14)

    def test_dawson_fifty(self):
        asym = 1 / 100 + 1 / (4 * 50**3)
        assert dawson(50.0) == pytest.approx(asym, rel=1e-6)
        assert dawson(50.0) == pytest.approx(0.010002001201201202, rel=1e-12)

    def test_dawson_maximum(self):
        xs = np.linspace(0.9, 0.95, 5001)
        d = dawson(xs)
        i = int(np.argmax(d))
        assert xs[i] == pytest.approx(0.9241388730, abs=2e-5)
        assert d[i] == pytest.approx(0.5410442246, abs=1e-9)

    def test_vectorised(self):
        xs = np.linspace(-3, 3, 7)
        assert np.array_equal(dawson(xs), np.array([dawson(float(x)) for x in xs]))

    def test_erfi_overflow_signalled(self):
        with pytest.raises(OverflowError):
            erfi(30.0)
        assert math.isfinite(erfi_scaled(30.0))
        assert log_erfi(30.0) == pytest.approx(
            float(mpmath.log(erfi_series(30))), rel=1e-14)

    def test_nonfinite_rejected(self):
        with pytest.raises(ValueError):
            dawson(math.nan)


class TestErfiDawsonOracles:
    @pytest.mark.parametrize("x", np.linspace(0.0, 6.0, 61))
    def test_against_series(self, x):
        assert abs(dawson(x) - dawson_oracle(x)) <= 1e-14
        ref = float(erfi_series(x))
        assert abs(erfi(x) - ref) <= 1e-10 * max(1.0, abs(ref)) * 1e-3

    def test_against_scipy_dense(self):
        xs = np.linspace(-40, 40, 20001)
        assert np.max(np.abs(dawson(xs) - dawsn(xs))) < 5e-15

    def test_seam_branches_agree(self):
        assert _dawson_series(1.0) == pytest.approx(_dawson_cf(1.0), abs=1e-12)

    @pytest.mark.parametrize("x", [1e-300, 1e-8, 0.3, 2.5, 7.0, 26.0])
    def test_erfi_scaled(self, x):
        ref = float(erfi_series(x) * mpmath.exp(-mpmath.mpf(x) ** 2))
        assert erfi_scaled(x) == pytest.approx(ref, rel=1e-13)


class TestErfiDawsonProperties:
    @settings(max_examples=300, deadline=None)
    @given(finite)
    def test_odd(self, x):
        assert dawson(-x) == -dawson(x)
        assert erfi_scaled(-x) == -erfi_scaled(x)

    @settings(max_examples=300, deadline=None)
    @given(st.floats(min_value=-6.0, max_value=6.0))
    def test_identity(self, x):
        lhs = erfi(x)
        rhs = 2.0 * math.exp(x * x) * dawson(x) / math.sqrt(math.pi)
        assert abs(lhs - rhs) <= 1e-12 * abs(rhs) + 1e-300

    @settings(max_examples=300, deadline=None)
    @given(st.floats(min_value=-20.0, max_value=20.0))
    def test_ode_residual(self, x):
        h = 1e-5
        fd = (dawson(x + h) - dawson(x - h)) / (2 * h)
        assert abs(fd - (1.0 - 2.0 * x * dawson(x))) <= 1e-9
        assert dawson_prime(x) == pytest.approx(1.0 - 2.0 * x * dawson(x), abs=1e-15)

    @settings(max_examples=200, deadline=None)
    @given(st.floats(min_value=0.0, max_value=1e6))
    def test_bounded(self, x):
        assert 0.0 <= dawson(x) <= 0.5410442246 + 1e-12

    @settings(max_examples=200, deadline=None)
    @given(st.floats(min_value=10.0, max_value=1e8))
    def test_asymptotic(self, x):
        asym = 1 / (2 * x) + 1 / (4 * x**3) + 3 / (8 * x**5)
        assert dawson(x) == pytest.approx(asym, rel=2e-6)


class TestKummer:
    def test_empty_series(self):
        assert kummer_1f1(0, 2, 3.7) == 1.0

    def test_linear(self):
        assert kummer_1f1(-1, 2, 1.0) == 0.5

    def test_exponential(self):
        assert kummer_1f1(1, 1, 2.0) == pytest.approx(math.exp(2.0), rel=1e-15)
        assert kummer_1f1(1, 1, 2.0) == pytest.approx(7.389056, abs=1e-6)

    def test_laguerre(self):
        # 1F1(-n; 1; x) = L_n(x)
        for n in range(6):
            for x in (0.3, 2.0, 9.5):
                assert kummer_1f1(-n, 1, x) == pytest.approx(
                    float(mpmath.laguerre(n, 0, x)), rel=1e-12, abs=1e-13)

    def test_forbidden_b(self):
        with pytest.raises(ValueError):
            kummer_1f1(0.5, -2, 1.0)
        with pytest.raises(ValueError):
            kummer_1f1(-3, -2, 1.0)
        assert kummer_1f1(-2, -3, 1.0) == pytest.approx(float(mpmath.hyp1f1(-2, -3, 1)), rel=1e-15)

    def test_convergence_cap(self):
        with pytest.raises(ConvergenceError):
            kummer_1f1(0.5, 1.5, 400.0, max_terms=20)

    @pytest.mark.parametrize("a,b,x", [(0.3, 2.5, -5.0), (2.2, 3.0, 4.0), (-2.5, 1.5, 3.0),
                                       (1.5, 4.0, -20.0), (0.5, 1.5, 30.0)])
    def test_against_mpmath(self, a, b, x):
        assert kummer_1f1(a, b, x) == pytest.approx(float(mpmath.hyp1f1(a, b, x)), rel=1e-12)

    @settings(max_examples=300, deadline=None)
    @given(st.floats(-2.0, 2.0), st.integers(1, 5), st.floats(-5.0, 5.0))
    def test_recurrence(self, a, b, x):
        lhs = kummer_1f1(a, b, x)
        rhs = kummer_1f1(a + 1, b, x) - (x / b) * kummer_1f1(a + 1, b + 1, x)
        scale = max(abs(lhs), abs(kummer_1f1(a + 1, b, x)), 1e-300)
        assert abs(lhs - rhs) <= 1e-10 * scale

    @settings(max_examples=200, deadline=None)
    @given(st.integers(0, 12), st.floats(0.5, 20.0), st.floats(-30.0, 30.0))
    def test_polynomial_exact(self, n, b, x):
        # exact rational evaluation of the terminating sum
        bq, xq = Fraction(b), Fraction(x)
        term, total, magnitude = Fraction(1), Fraction(1), Fraction(1)
        for k in range(n):
            term *= Fraction(k - n) * xq / ((bq + k) * (k + 1))
            total += term
            magnitude += abs(term)
        assert abs(kummer_1f1(-n, b, x) - float(total)) <= 1e-14 * float(magnitude)


class TestQuadrature:
    def test_polynomial(self):
        r = integrate_adaptive(lambda t: t * t, 0.0, 1.0)
        assert r.value == pytest.approx(1 / 3, rel=1e-14)
        assert r.abs_error_estimate >= 0 and r.evaluations >= 1

    def test_semi_infinite(self):
        assert integrate_adaptive(lambda t: np.exp(-t), 0.0, math.inf).value == pytest.approx(1.0, rel=1e-12)

    def test_full_line(self):
        r = integrate_adaptive(lambda t: np.exp(-t * t), -math.inf, math.inf)
        assert r.value == pytest.approx(math.sqrt(math.pi), rel=1e-12)

    def test_exp_square(self):
        ref = sum(1 / (math.factorial(k) * (2 * k + 1)) for k in range(30))
        assert integrate_adaptive(lambda t: np.exp(t * t), 0.0, 1.0).value == pytest.approx(ref, rel=1e-13)
        assert ref == pytest.approx(1.462652, abs=1e-6)

    def test_reversed_limits(self):
        assert integrate_adaptive(lambda t: t, 1.0, 0.0).value == pytest.approx(-0.5, rel=1e-14)

    def test_endpoint_singularity(self):
        r = integrate_adaptive(lambda t: 1 / np.sqrt(t), 0.0, 1.0, rel_tol=1e-8)
        assert r.value == pytest.approx(2.0, rel=1e-7)

    def test_failure_carries_estimate(self):
        with pytest.raises(QuadratureError) as info:
            integrate_adaptive(lambda t: np.sin(1 / t) / t, 1e-6, 1.0, rel_tol=1e-14,
                               max_intervals=20)
        assert math.isfinite(info.value.value)
        assert info.value.abs_error > 0

    @pytest.mark.parametrize("x", [0.5, 1.0, 2.0])
    def test_reproduces_erfi_within_bound(self, x):
        r = integrate_adaptive(lambda t: np.exp(t * t), 0.0, x)
        c = 2 / math.sqrt(math.pi)
        assert abs(c * r.value - erfi(x)) <= c * r.abs_error_estimate + 4e-16 * erfi(x)

    @settings(max_examples=50, deadline=None)
    @given(st.floats(0.2, 10.0), st.floats(-3.0, 3.0))
    def test_gaussian_moments(self, s, shift):
        r = integrate_adaptive(lambda t: np.exp(-((t - shift) / s) ** 2), -math.inf, math.inf)
        assert r.value == pytest.approx(s * math.sqrt(math.pi), rel=1e-9)
