"""Canonical-ensemble thermodynamics of a truncated Morse ladder.

Levels are ``E_n = D - ((4n - Xi)/4)**2 / tau**2`` for ``n = 0..n_max``.
Three routes to (U, F, S, C_v):

* ``discrete``: exact Boltzmann sums over the finite spectrum;
* ``continuum-analytic``: the sum replaced by an integral,
  ``Z = exp(-beta D) (tau / sqrt(beta)) integral_0^x exp(t**2) dt`` with
  ``x = a sqrt(beta)``, ``a = |Xi| / (4 tau)``, differentiated in closed form
  through Dawson's integral;
* ``continuum-numeric``: the same log Z differentiated by Richardson-extrapolated
  central differences in beta.

All partition functions are handled as logarithms.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from morse_thermo.specfun import dawson
from morse_thermo.spectrum import ChannelParams


class ThermoError(ArithmeticError):
    pass


class SweepError(ThermoError):
    """A sweep failed at temperature ``T``; ``partial`` holds the points before it."""

    def __init__(self, T: float, partial: list, cause: Exception):
        super().__init__(f"thermodynamics failed at T={T!r}: {cause}")
        self.T = T
        self.partial = partial
        self.cause = cause


class ThermoMethod(str, enum.Enum):
    DISCRETE = "discrete"
    CONTINUUM_ANALYTIC = "continuum-analytic"
    CONTINUUM_NUMERIC = "continuum-numeric"


@dataclass(frozen=True)
class EnsembleSpec:
    Xi: float
    tau: float
    D_shift: float
    n_max: int
    k_B: float = 1.0
    N_particles: int = 1
    high_t_approx: bool = False

    def __post_init__(self):
        if not self.tau > 0:
            raise ValueError(f"tau must be positive, got {self.tau!r}")
        if not self.k_B > 0:
            raise ValueError(f"k_B must be positive, got {self.k_B!r}")
        if self.N_particles < 1 or int(self.N_particles) != self.N_particles:
            raise ValueError(f"N_particles must be a positive integer, got {self.N_particles!r}")
        if self.Xi == 0:
            raise ValueError("Xi must be nonzero")
        if self.n_max < 0:
            raise ValueError(f"n_max must be >= 0, got {self.n_max!r}")

    @classmethod
    def from_channel(cls, cp: ChannelParams, k_B: float = 1.0, N_particles: int = 1,
                     high_t_approx: bool = False) -> "EnsembleSpec":
        return cls(Xi=cp.Xi, tau=cp.tau, D_shift=cp.D_shift, n_max=cp.n_max, k_B=k_B,
                   N_particles=N_particles, high_t_approx=high_t_approx)

    @property
    def a(self) -> float:
        return abs(self.Xi) / (4.0 * self.tau)

    @property
    def shift(self) -> float:
        """The energy offset kept in Boltzmann factors (0 under high_t_approx)."""
        return 0.0 if self.high_t_approx else self.D_shift

    def level_energies(self) -> np.ndarray:
        """The ladder implied by (Xi, tau, D) alone."""
        n = np.arange(self.n_max + 1)
        return self.D_shift - ((4.0 * n - abs(self.Xi)) / 4.0) ** 2 / self.tau**2


@dataclass(frozen=True)
class ThermoPoint:
    T: float
    beta: float
    sigma: float
    log_Z: float
    U: float
    F: float
    S: float
    C_v: float
    method: ThermoMethod

    @property
    def Z(self) -> float:
        try:
            return math.exp(self.log_Z)
        except OverflowError:
            return math.inf


def _beta(ens: EnsembleSpec, T: float) -> float:
    if not (T > 0 and math.isfinite(T)):
        raise ValueError(f"temperature must be positive and finite, got {T!r}")
    beta = 1.0 / (ens.k_B * T)
    if not (0.0 < beta < math.inf):
        raise ThermoError(f"beta = 1/(k_B T) is not representable at T={T!r}")
    return beta


def _effective_levels(ens: EnsembleSpec, spectrum) -> np.ndarray:
    E = np.asarray(spectrum, dtype=float)
    if E.ndim != 1 or E.size == 0:
        raise ValueError("spectrum must be a non-empty 1-d sequence of energies")
    return E - (ens.D_shift - ens.shift)


# --------------------------------------------------------------------------
# partition functions
# --------------------------------------------------------------------------


def log_partition_discrete(ens: EnsembleSpec, spectrum, T: float) -> float:
    beta = _beta(ens, T)
    E = _effective_levels(ens, spectrum)
    return ens.N_particles * float(logsumexp(-beta * E))


def partition_discrete(ens: EnsembleSpec, spectrum, T: float) -> float:
    return math.exp(log_partition_discrete(ens, spectrum, T))


def _log_z1_continuum(ens: EnsembleSpec, beta: float) -> float:
    x = ens.a * math.sqrt(beta)
    # ln[(tau/sqrt(beta)) * integral_0^x exp(t^2) dt] = ln tau - ln(beta)/2 + x^2 + ln F(x)
    return -beta * ens.shift + math.log(ens.tau) - 0.5 * math.log(beta) + x * x + math.log(dawson(x))


def _log_z_continuum_beta(ens: EnsembleSpec, beta: float) -> float:
    return ens.N_particles * _log_z1_continuum(ens, beta)


def log_partition_continuum(ens: EnsembleSpec, T: float) -> float:
    return _log_z_continuum_beta(ens, _beta(ens, T))


def partition_continuum(ens: EnsembleSpec, T: float) -> float:
    """``(tau sqrt(pi) / (2 sqrt(beta))) erfi(a sqrt(beta)) exp(-beta D)``.

    Raises OverflowError if the value itself is not representable; the
    logarithm is always available from log_partition_continuum.
    """
    return math.exp(log_partition_continuum(ens, T))


# --------------------------------------------------------------------------
# closed forms for the continuum ensemble
# --------------------------------------------------------------------------

_SMALL_X = 0.5


def _dawson_deficits(x: float) -> tuple[float, float]:
    """Return ``t = 1 - F(x)/x`` and ``u = t - 2x^2/3`` by series (small x)."""
    w = -2.0 * x * x
    term = w / 3.0
    t = -term
    u = 0.0
    k = 1
    while True:
        k += 1
        term *= w / (2 * k + 1)
        t -= term
        u -= term
        if abs(term) <= 1e-17 * abs(u):
            return t, u


def _continuum_u_c(ens: EnsembleSpec, beta: float) -> tuple[float, float]:
    """Single-particle (U, C_v) from the Dawson closed forms."""
    x = ens.a * math.sqrt(beta)
    if x < _SMALL_X:
        t, u = _dawson_deficits(x)
        s = 1.0 - t
        one_minus_ratio = -t / s  # 1 - x/F
        c = (-3.0 * u + 2.0 * t * (t - x * x)) / (4.0 * s * s)
    else:
        F = dawson(x)
        one_minus_ratio = 1.0 - x / F
        c = 0.5 * one_minus_ratio + 0.25 * x * (F - x + 2.0 * x * x * F) / (F * F)
    U = ens.shift + one_minus_ratio / (2.0 * beta)
    return U, ens.k_B * c


# --------------------------------------------------------------------------
# Richardson-extrapolated central differences
# --------------------------------------------------------------------------


def _ridders(f, x: float, h: float, order: int, shrink: float = 1.4, ntab: int = 10):
    """Neville-tableau extrapolation of central differences (order 1 or 2)."""
    if order == 1:
        def diff(step):
            return (f(x + step) - f(x - step)) / (2.0 * step)
    else:
        fx = f(x)

        def diff(step):
            return (f(x + step) - 2.0 * fx + f(x - step)) / (step * step)

    c2 = shrink * shrink
    table = [[diff(h)]]
    best, err = table[0][0], math.inf
    for i in range(1, ntab):
        h /= shrink
        if h == 0.0 or x + h == x:
            raise ThermoError(f"finite-difference step underflowed at beta={x!r}")
        row = [diff(h)]
        fac = c2
        for j in range(1, i + 1):
            row.append((row[j - 1] * fac - table[i - 1][j - 1]) / (fac - 1.0))
            fac *= c2
            e = max(abs(row[j] - row[j - 1]), abs(row[j] - table[i - 1][j - 1]))
            if e <= err:
                err, best = e, row[j]
        table.append(row)
        if abs(row[i] - table[i - 1][i - 1]) >= 2.0 * err:
            break
    return best, err


def _continuum_numeric_u_c(ens: EnsembleSpec, beta: float) -> tuple[float, float]:
    """Single-particle (U, C_v) by differentiating log Z in beta."""
    h = 0.1 * beta
    if h == 0.0 or beta + h == beta:
        raise ThermoError(f"finite-difference step underflowed at beta={beta!r}")

    def f(b):
        return _log_z1_continuum(ens, b)

    d1, _ = _ridders(f, beta, h, 1)
    d2, _ = _ridders(f, beta, h, 2)
    return -d1, ens.k_B * beta * beta * d2


def thermo_point(ens: EnsembleSpec, spectrum, T: float,
                 method: ThermoMethod | str = ThermoMethod.DISCRETE) -> ThermoPoint:
    """U, F, S, C_v at one temperature. ``spectrum`` is only read by ``discrete``."""
    method = ThermoMethod(method)
    beta = _beta(ens, T)
    if method is ThermoMethod.DISCRETE:
        E = _effective_levels(ens, spectrum)
        # energies above the lowest level: every term below is non-negative,
        # so U and S keep full relative precision when the ground state dominates
        low = int(np.argmin(E))
        E_low = float(E[low])
        gaps = E - E_low
        boltz = np.exp(-beta * gaps)
        log_z_rel = math.log1p(float(np.sum(np.delete(boltz, low))))
        w = boltz / math.exp(log_z_rel)
        excess = float(np.dot(w, gaps))
        log_z1 = -beta * E_low + log_z_rel
        U1 = E_low + excess
        C1 = ens.k_B * beta * beta * float(np.dot(w, (gaps - excess) ** 2))
        S1 = ens.k_B * (beta * excess + log_z_rel)
    else:
        log_z1 = _log_z1_continuum(ens, beta)
        if method is ThermoMethod.CONTINUUM_ANALYTIC:
            U1, C1 = _continuum_u_c(ens, beta)
        else:
            U1, C1 = _continuum_numeric_u_c(ens, beta)
        S1 = (U1 + log_z1 / beta) / T
    F1 = -log_z1 / beta
    # ln Z_N = N ln Z_1: every output is N times its single-particle value
    N = ens.N_particles
    return ThermoPoint(T=T, beta=beta, sigma=ens.tau / math.sqrt(beta), log_Z=N * log_z1,
                       U=N * U1, F=N * F1, S=N * S1, C_v=N * C1, method=method)


def thermo_sweep(ens: EnsembleSpec, spectrum, T_grid,
                 method: ThermoMethod | str = ThermoMethod.DISCRETE) -> list[ThermoPoint]:
    T_grid = [float(t) for t in T_grid]
    if any(t <= 0 for t in T_grid):
        raise ValueError("temperature grid must be strictly positive")
    if any(b <= a for a, b in zip(T_grid, T_grid[1:])):
        raise ValueError("temperature grid must be strictly ascending")
    points: list[ThermoPoint] = []
    for T in T_grid:
        try:
            points.append(thermo_point(ens, spectrum, T, method))
        except (ArithmeticError, ValueError) as exc:
            raise SweepError(T, points, exc) from exc
    return points


def sweep_flags(points: list[ThermoPoint], tol: float = 1e-12) -> dict[str, bool]:
    """Shape checks on a sweep: U and S non-decreasing, C_v non-negative."""
    U = np.array([p.U for p in points])
    S = np.array([p.S for p in points])
    C = np.array([p.C_v for p in points])
    scale = max(1.0, float(np.max(np.abs(U))))
    return {
        "U_nondecreasing": bool(np.all(np.diff(U) >= -tol * scale)),
        "S_nondecreasing": bool(np.all(np.diff(S) >= -tol * max(1.0, float(np.max(np.abs(S)))))),
        "C_nonnegative": bool(np.all(C >= -1e-9)),
    }


def heat_capacity_from_sweep(T, U) -> np.ndarray:
    """dU/dT across neighbouring sweep points.

    Five-point stencil in ln T when the grid is log-uniform, second-order
    non-uniform differences otherwise. The two outermost points on each side
    are NaN for the five-point case.
    """
    T = np.asarray(T, dtype=float)
    U = np.asarray(U, dtype=float)
    s = np.log(T)
    ds = np.diff(s)
    if T.size >= 5 and np.allclose(ds, ds[0], rtol=1e-9):
        h = ds[0]
        out = np.full_like(U, np.nan)
        out[2:-2] = (-U[4:] + 8.0 * U[3:-1] - 8.0 * U[1:-3] + U[:-4]) / (12.0 * h) / T[2:-2]
        return out
    return np.gradient(U, T, edge_order=2)
