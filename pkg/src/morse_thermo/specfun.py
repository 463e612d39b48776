"""Special functions and adaptive quadrature used throughout the package.

Everything here is a pure function of its arguments. The Dawson integral is
the workhorse: every quantity that would otherwise carry a bare ``exp(x**2)``
(erfi, the continuum partition function and its derivatives) is routed
through it so that nothing overflows for large arguments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

SQRT_PI = math.sqrt(math.pi)

# Largest x for which exp(x**2) is finite in double precision.
_ERFI_OVERFLOW_X = math.sqrt(math.log(np.finfo(float).max))

_DAWSON_SERIES_MAX = 1.0
_DAWSON_ASYMPTOTIC_MIN = 10.0
_INFINITE_PANELS = 8


class QuadratureError(ArithmeticError):
    """Adaptive quadrature could not reach the requested tolerance."""

    def __init__(self, message: str, value: float, abs_error: float):
        super().__init__(f"{message} (best estimate {value!r}, error bound {abs_error!r})")
        self.value = value
        self.abs_error = abs_error


class ConvergenceError(ArithmeticError):
    """A series or continued fraction failed to converge within its cap."""


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    abs_error_estimate: float
    evaluations: int


# --------------------------------------------------------------------------
# Dawson integral / imaginary error function
# --------------------------------------------------------------------------


def _dawson_series(x: float) -> float:
    # F(x) = sum_k (-1)^k 2^k x^(2k+1) / (2k+1)!!
    term = x
    total = x
    x2 = 2.0 * x * x
    k = 0
    while abs(term) > 1e-18 * abs(total):
        k += 1
        term *= -x2 / (2 * k + 1)
        total += term
    return total


def _dawson_cf(x: float) -> float:
    """Laplace continued fraction, evaluated bottom-up.

    F(x) = x / (1 + 2x^2 - 4x^2 / (3 + 2x^2 - 8x^2 / (5 + 2x^2 - ...)))
    Depth 40 + 2x^2 converges to rounding level for 1 < x <= 10.
    """
    x2 = x * x
    tail = 0.0
    for k in range(40 + math.ceil(2.0 * x2), 0, -1):
        tail = -4.0 * k * x2 / (2 * k + 1 + 2.0 * x2 + tail)
    return x / (1.0 + 2.0 * x2 + tail)


def _dawson_asymptotic(x: float) -> float:
    # F(x) ~ (1/2x) sum_k (2k-1)!! / (2x^2)^k; smallest term ~ exp(-x^2)
    inv = 0.5 / x / x
    term = 1.0
    total = 1.0
    k = 0
    while abs(term) > 1e-17:
        k += 1
        term *= (2 * k - 1) * inv
        total += term
    return total * (0.5 / x)


def _dawson_scalar(x: float) -> float:
    if not math.isfinite(x):
        raise ValueError(f"dawson requires a finite argument, got {x!r}")
    ax = abs(x)
    if ax <= _DAWSON_SERIES_MAX:
        return _dawson_series(x)
    if ax > _DAWSON_ASYMPTOTIC_MIN:
        return math.copysign(_dawson_asymptotic(ax), x)
    return math.copysign(_dawson_cf(ax), x)


def dawson(x):
    """Dawson's integral ``exp(-x**2) * integral_0^x exp(t**2) dt``.

    Accepts scalars or array-likes; returns the same shape.
    """
    if np.ndim(x) == 0:
        return _dawson_scalar(float(x))
    arr = np.asarray(x, dtype=float)
    return np.vectorize(_dawson_scalar, otypes=[float])(arr)


def dawson_prime(x):
    """Derivative of Dawson's integral from its ODE, ``1 - 2 x F(x)``."""
    x = np.asarray(x, dtype=float) if np.ndim(x) else float(x)
    return 1.0 - 2.0 * x * dawson(x)


def erfi_scaled(x):
    """``exp(-x**2) * erfi(x)``, finite for every finite x."""
    return 2.0 * dawson(x) / SQRT_PI


def _square_split(x: float) -> tuple[float, float]:
    """``x*x == hi + lo`` exactly (Dekker product)."""
    hi = x * x
    c = 134217729.0 * x  # 2**27 + 1
    xh = c - (c - x)
    xl = x - xh
    lo = ((xh * xh - hi) + 2.0 * xh * xl) + xl * xl
    return hi, lo


def _erfi_scalar(x: float) -> float:
    if not math.isfinite(x):
        raise ValueError(f"erfi requires a finite argument, got {x!r}")
    if abs(x) > _ERFI_OVERFLOW_X:
        raise OverflowError(
            f"erfi({x!r}) exceeds the double range; use erfi_scaled or log_erfi"
        )
    if abs(x) <= _DAWSON_SERIES_MAX:
        # (2/sqrt(pi)) * sum x^(2k+1) / (k! (2k+1)), no cancellation here
        x2 = x * x
        term = x
        total = x
        k = 0
        while abs(term) > 1e-18 * abs(total):
            k += 1
            term *= x2 / k
            total += term / (2 * k + 1)
        return 2.0 * total / SQRT_PI
    hi, lo = _square_split(x)
    # exp(x^2) = exp(hi) * exp(lo); rounding of x*x alone costs ~x^2 ulps
    value = 2.0 * math.exp(hi) * (1.0 + lo) * _dawson_scalar(x) / SQRT_PI
    if math.isinf(value):
        raise OverflowError(f"erfi({x!r}) exceeds the double range")
    return value


def erfi(x):
    """Imaginary error function ``(2/sqrt(pi)) * integral_0^x exp(t**2) dt``.

    Raises OverflowError instead of returning inf when the value is not
    representable.
    """
    if np.ndim(x) == 0:
        return _erfi_scalar(float(x))
    arr = np.asarray(x, dtype=float)
    return np.vectorize(_erfi_scalar, otypes=[float])(arr)


def log_erfi(x: float) -> float:
    """Natural log of erfi(x) for x > 0, valid far past the overflow point."""
    if x <= 0:
        raise ValueError(f"log_erfi needs x > 0, got {x!r}")
    return x * x + math.log(2.0 * _dawson_scalar(x) / SQRT_PI)


# --------------------------------------------------------------------------
# Kummer's confluent hypergeometric function
# --------------------------------------------------------------------------


def _nonpositive_int(v: float) -> int | None:
    if v <= 0 and float(v).is_integer():
        return int(-v)
    return None


def _kummer_poly(n: int, b: float, x):
    # 1F1(-n; b; x) = sum_{j=0}^{n} (-n)_j / (b)_j x^j / j!, Horner from the top
    coeffs = [1.0]
    c = 1.0
    for j in range(n):
        c *= (j - n) / ((b + j) * (j + 1))
        coeffs.append(c)
    result = np.zeros_like(np.asarray(x, dtype=float)) + coeffs[-1]
    for c in reversed(coeffs[:-1]):
        result = result * x + c
    return result if np.ndim(x) else float(result)


def kummer_1f1(a: float, b: float, x: float, *, rtol: float = 1e-16,
               max_terms: int = 10000) -> float:
    """Confluent hypergeometric function 1F1(a; b; x) for real arguments.

    When ``a`` is a non-positive integer the series terminates and is evaluated
    as that polynomial (x may then be an array). Otherwise the Maclaurin series
    is summed, after Kummer's transformation for x < 0 so that the summed
    terms do not alternate.
    """
    n = _nonpositive_int(a)
    nb = _nonpositive_int(b)
    if nb is not None and (n is None or n > nb):
        raise ValueError(f"1F1 undefined for b={b!r} with a={a!r}")
    if n is not None:
        return _kummer_poly(n, b, x)
    if np.ndim(x):
        return np.array([kummer_1f1(a, b, float(xi), rtol=rtol, max_terms=max_terms)
                         for xi in np.ravel(x)]).reshape(np.shape(x))
    if x < 0:
        return math.exp(x) * kummer_1f1(b - a, b, -x, rtol=rtol, max_terms=max_terms)
    term = 1.0
    total = 1.0
    for j in range(max_terms):
        term *= (a + j) * x / ((b + j) * (j + 1))
        total += term
        if term == 0.0 or (abs(term) <= rtol * abs(total) and j > abs(a) + x):
            return total
    raise ConvergenceError(f"1F1({a}; {b}; {x}) series did not converge in {max_terms} terms")


# --------------------------------------------------------------------------
# Adaptive Gauss-Kronrod quadrature
# --------------------------------------------------------------------------

_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KRONROD_W = np.concatenate([_WGK[:-1], _WGK[::-1]])
# Gauss nodes are the odd-indexed Kronrod nodes (1, 3, 5, 7 from the outside in)
_GAUSS_W = np.zeros(15)
_GAUSS_W[[1, 3, 5]] = _WG[:3]
_GAUSS_W[[13, 11, 9]] = _WG[:3]
_GAUSS_W[7] = _WG[3]


def _eval(f: Callable, x: np.ndarray) -> np.ndarray:
    vals = np.asarray(f(x), dtype=float)
    if vals.shape != x.shape:
        vals = np.array([float(f(xi)) for xi in x])
    return vals


def _gk15(f, a, b):
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    fx = _eval(f, mid + half * _NODES)
    if not np.all(np.isfinite(fx)):
        raise QuadratureError(f"non-finite integrand on [{a}, {b}]", math.nan, math.inf)
    k = half * np.dot(_KRONROD_W, fx)
    g = half * np.dot(_GAUSS_W, fx)
    return k, abs(k - g)


def _transform(f, a, b):
    """Map an (semi-)infinite range onto a finite one."""
    if math.isinf(a) and math.isinf(b):
        def g(u):
            t = u / (1.0 - u * u)
            return f(t) * (1.0 + u * u) / (1.0 - u * u) ** 2
        return g, -1.0, 1.0
    if math.isinf(b):
        def g(u):
            return f(a + u / (1.0 - u)) / (1.0 - u) ** 2
        return g, 0.0, 1.0
    if math.isinf(a):
        def g(u):
            return f(b - u / (1.0 - u)) / (1.0 - u) ** 2
        return g, 0.0, 1.0
    return f, a, b


def integrate_adaptive(f: Callable, a: float, b: float, rel_tol: float = 1e-10,
                       abs_tol: float = 1e-14, max_intervals: int = 2000) -> QuadratureResult:
    """Globally adaptive 15-point Gauss-Kronrod quadrature.

    Infinite limits are mapped to a finite interval (``t = a + u/(1-u)`` for
    ``[a, inf)``). ``f`` may be vectorized; scalar callables also work.
    Raises QuadratureError carrying the best estimate if the tolerance
    ``max(rel_tol*|I|, abs_tol)`` is not met within ``max_intervals``.
    Isolated peaks much narrower than the initial panels can be missed;
    split the range at such features.
    """
    if rel_tol <= 0:
        raise ValueError("rel_tol must be positive")
    if math.isnan(a) or math.isnan(b):
        raise ValueError("integration limits must not be NaN")
    if a == b:
        return QuadratureResult(0.0, 0.0, 1)
    sign = 1.0
    if a > b:
        a, b, sign = b, a, -1.0
    g, lo, hi = _transform(f, a, b)

    panels = 1 if g is f else _INFINITE_PANELS
    edges = np.linspace(lo, hi, panels + 1)
    intervals = []
    for l0, h0 in zip(edges[:-1], edges[1:]):
        v, e = _gk15(g, float(l0), float(h0))
        intervals.append((e, float(l0), float(h0), v))
    evaluations = 15 * panels
    total = math.fsum(iv[3] for iv in intervals)
    total_err = math.fsum(iv[0] for iv in intervals)
    while total_err > max(rel_tol * abs(total), abs_tol):
        if len(intervals) >= max_intervals:
            raise QuadratureError("tolerance not met", sign * total, total_err)
        # split the interval with the largest error
        idx = max(range(len(intervals)), key=lambda i: intervals[i][0])
        e0, l0, h0, v0 = intervals.pop(idx)
        m = 0.5 * (l0 + h0)
        if not l0 < m < h0:
            raise QuadratureError("interval too small to bisect", sign * total, total_err)
        v1, e1 = _gk15(g, l0, m)
        v2, e2 = _gk15(g, m, h0)
        evaluations += 30
        intervals += [(e1, l0, m, v1), (e2, m, h0, v2)]
        total = math.fsum(iv[3] for iv in intervals)
        total_err = math.fsum(iv[0] for iv in intervals)
    return QuadratureResult(float(sign * total), float(total_err), evaluations)
