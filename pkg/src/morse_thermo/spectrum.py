"""Bound states of the generalized Morse and Cusp potentials.

The radial problem is written in the scaled coordinate ``z = (r - r_e)/r_e``::

    d2R/dz2 = (V_eff(z) - E) / eps * R,      eps = hbar**2 / (2 mu r_e**2)

With the centrifugal term replaced by its three-term exponential (Pekeris)
expansion, ``V_eff/eps = A y**2 + B y + ell(ell+1) a1`` with ``y = exp(-alpha z)``
and the spectrum and wavefunctions follow in closed form. ``ode_oracle`` solves
the same ODE (or the one with the true centrifugal term) on a finite-difference
grid and is used to check the closed forms.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.linalg import eigh_tridiagonal

from morse_thermo.specfun import integrate_adaptive, kummer_1f1


class SpectrumError(Exception):
    pass


class NoBoundChannel(SpectrumError):
    """The channel supports no normalizable level (lambda_ell <= 1/2)."""

    def __init__(self, ell: int, lambda_ell: float):
        super().__init__(
            f"no bound channel for ell={ell}: lambda_ell={lambda_ell:.10g} <= 1/2"
        )
        self.ell = ell
        self.lambda_ell = lambda_ell


class NoSuchLevel(SpectrumError):
    def __init__(self, n: int, n_max: int):
        super().__init__(f"level n={n} does not exist (n_max={n_max})")
        self.n = n
        self.n_max = n_max


class AnalyticPathUnavailable(SpectrumError):
    """The closed form is singular here; use ode_oracle instead."""


class GridTooCoarse(SpectrumError):
    pass


class PotentialKind(str, enum.Enum):
    GENERALIZED_MORSE = "morse"
    CUSP = "cusp"


class OracleMode(str, enum.Enum):
    PEKERIS_VALIDATION = "pekeris"
    PHYSICAL_CENTRIFUGAL = "physical"


@dataclass(frozen=True)
class PotentialSpec:
    """``V(z) = V1 exp(-2 alpha z) - 2 V2 exp(-alpha z)`` plus unit constants.

    Cusp specs are built with :func:`cusp_map` and keep ``V0``/``A_tilde``
    for reference alongside the mapped Morse parameters.
    """

    V1: float
    V2: float
    alpha: float
    r_e: float = 1.0
    mu: float = 1.0
    hbar: float = 1.0
    k_B: float = 1.0
    kind: PotentialKind = PotentialKind.GENERALIZED_MORSE
    V0: float | None = None
    A_tilde: float | None = None

    def __post_init__(self):
        for name in ("alpha", "r_e", "mu", "hbar", "k_B"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be positive and finite, got {value!r}")
        if not (math.isfinite(self.V1) and math.isfinite(self.V2)):
            raise ValueError("V1 and V2 must be finite")
        if self.kind is PotentialKind.GENERALIZED_MORSE and self.V1 <= 0:
            raise ValueError(f"generalized Morse needs V1 > 0, got {self.V1!r}")

    @property
    def energy_scale(self) -> float:
        """``hbar**2 / (2 mu r_e**2)``, the unit of the scaled kinetic term."""
        return self.hbar**2 / (2.0 * self.mu * self.r_e**2)

    def potential(self, z):
        """The bare potential (no centrifugal term); Cusp uses ``exp(-alpha|z|)``."""
        z = np.asarray(z, dtype=float)
        if self.kind is PotentialKind.CUSP:
            return -2.0 * self.V2 * np.exp(-self.alpha * np.abs(z))
        y = np.exp(-self.alpha * z)
        return self.V1 * y * y - 2.0 * self.V2 * y


@dataclass(frozen=True)
class GridSpec:
    z_min: float = -6.0
    z_max: float = 30.0
    points: int = 8001

    def __post_init__(self):
        if self.points < 3:
            raise ValueError(f"grid needs at least 3 points, got {self.points}")
        if not self.z_max > self.z_min:
            raise ValueError(f"grid needs z_max > z_min, got [{self.z_min}, {self.z_max}]")

    def nodes(self) -> np.ndarray:
        return np.linspace(self.z_min, self.z_max, self.points)

    def refined(self) -> "GridSpec":
        return replace(self, points=2 * self.points - 1)


@dataclass(frozen=True)
class PekerisCoeffs:
    a1: float
    a2: float
    a3: float


@dataclass(frozen=True)
class ChannelParams:
    """Closed-form data for one rotational channel.

    ``A_coeff``, ``B_coeff`` are the (dimensionless) coefficients of ``y**2``
    and ``y`` in ``V_eff/eps``; the per-level ``C`` is ``k**2 alpha**2``.
    """

    ell: int
    A_coeff: float
    B_coeff: float
    D_shift: float
    lambda_ell: float
    n_max: int
    Xi: float
    tau: float
    alpha: float
    energy_scale: float

    @property
    def level_count(self) -> int:
        return self.n_max + 1

    def k_exponent(self, n: int) -> float:
        return self.lambda_ell - n - 0.5

    def C_coeff(self, n: int) -> float:
        return (self.alpha * self.k_exponent(n)) ** 2


@dataclass(frozen=True, eq=False)
class BoundState:
    """One normalized level; ``radial`` samples R(z) on ``z``."""

    n: int
    ell: int
    energy: float
    k_exponent: float
    z: np.ndarray = field(repr=False)
    radial: np.ndarray = field(repr=False)
    r_e: float = 1.0
    norm: float = 1.0

    @property
    def edge_amplitude(self) -> float:
        """Largest |R| at the two grid ends, relative to max |R|."""
        peak = np.max(np.abs(self.radial))
        return float(max(abs(self.radial[0]), abs(self.radial[-1])) / peak)

    def node_count(self, rel_floor: float = 1e-12) -> int:
        r = self.radial[np.abs(self.radial) > rel_floor * np.max(np.abs(self.radial))]
        return int(np.count_nonzero(np.signbit(r[1:]) != np.signbit(r[:-1])))


def pekeris_coeffs(alpha: float) -> PekerisCoeffs:
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha!r}")
    # a1 + a2 + a3 != 1 with this a2; the Taylor-matched expansion of
    # 1/(1+z)**2 uses a2 = 4/alpha - 6/alpha**2 (see ode_oracle physical mode).
    return PekerisCoeffs(
        a1=1.0 - 3.0 / alpha + 3.0 / alpha**2,
        a2=4.0 / alpha + 6.0 / alpha**2,
        a3=-1.0 / alpha + 3.0 / alpha**2,
    )


def channel_params(spec: PotentialSpec, ell: int) -> ChannelParams:
    """Closed-form channel data: D, lambda_ell, n_max and the (Xi, tau) recast.

    Raises AnalyticPathUnavailable for the Cusp ell=0 case (V1 = 0 makes the
    closed form singular), ValueError when ``V1 + eps*ell(ell+1)*a3 <= 0`` and
    NoBoundChannel when lambda_ell <= 1/2.
    """
    if ell < 0 or int(ell) != ell:
        raise ValueError(f"ell must be a non-negative integer, got {ell!r}")
    ell = int(ell)
    if spec.kind is PotentialKind.CUSP and ell == 0:
        raise AnalyticPathUnavailable(
            "analytic path unavailable for Cusp with ell=0 (V1 = 0); use ode_oracle"
        )
    c = pekeris_coeffs(spec.alpha)
    eps = spec.energy_scale
    L = ell * (ell + 1)
    root_arg = spec.V1 + eps * L * c.a3
    if root_arg <= 0:
        raise ValueError(
            f"V1 + ell(ell+1)*eps*a3 = {root_arg!r} must be positive for the analytic path"
        )
    A = root_arg / eps
    B = (eps * L * c.a2 - 2.0 * spec.V2) / eps
    lam = -B / (2.0 * spec.alpha * math.sqrt(A))
    if lam <= 0.5:
        raise NoBoundChannel(ell, lam)
    n_max = math.floor(lam - 0.5)
    if n_max == lam - 0.5:
        # k = 0 at the top is not normalizable
        n_max -= 1
    return ChannelParams(
        ell=ell,
        A_coeff=A,
        B_coeff=B,
        D_shift=eps * L * c.a1,
        lambda_ell=lam,
        n_max=n_max,
        Xi=4.0 * lam - 2.0,
        tau=math.sqrt(2.0 * spec.mu) * spec.r_e / (spec.hbar * spec.alpha),
        alpha=spec.alpha,
        energy_scale=eps,
    )


def energy(spec: PotentialSpec, n: int, ell: int) -> float:
    """``E = D - (eps alpha**2) (lambda_ell - n - 1/2)**2`` for 0 <= n <= n_max."""
    cp = channel_params(spec, ell)
    return _level_energy(cp, n)


def _level_energy(cp: ChannelParams, n: int) -> float:
    if n < 0 or n > cp.n_max:
        raise NoSuchLevel(n, cp.n_max)
    return cp.D_shift - cp.energy_scale * cp.alpha**2 * (cp.lambda_ell - n - 0.5) ** 2


def energies(spec: PotentialSpec, ell: int) -> list[float]:
    cp = channel_params(spec, ell)
    return [_level_energy(cp, n) for n in range(cp.n_max + 1)]


def radial_function(spec: PotentialSpec, n: int, ell: int):
    """Unnormalized closed-form R(z) for level n, as a vectorized callable.

    ``R = y**k exp(-rho/2) 1F1(-n; 2k+1; rho)`` with ``rho = 2 sqrt(A) y / alpha``.
    """
    cp = channel_params(spec, ell)
    if n < 0 or n > cp.n_max:
        raise NoSuchLevel(n, cp.n_max)
    k = cp.k_exponent(n)
    alpha = spec.alpha
    scale = 2.0 * math.sqrt(cp.A_coeff) / alpha

    def R(z):
        z = np.asarray(z, dtype=float)
        log_y = np.clip(-alpha * z, -700.0, 700.0)
        rho = scale * np.exp(log_y)
        log_env = k * log_y - 0.5 * rho
        with np.errstate(over="ignore", invalid="ignore", under="ignore"):
            poly = kummer_1f1(-n, 2.0 * k + 1.0, rho)
            out = np.where(log_env < -740.0, 0.0, poly * np.exp(np.maximum(log_env, -740.0)))
        return out if out.ndim else float(out)

    return R


def wavefunction(spec: PotentialSpec, n: int, ell: int,
                 grid: GridSpec | None = None) -> BoundState:
    """Closed-form level n, normalized so that ``integral R**2 r_e dz = 1``.

    The normalization integral runs over the whole line by adaptive
    quadrature; the result is sampled on ``grid``.
    """
    grid = grid or GridSpec()
    cp = channel_params(spec, ell)
    R = radial_function(spec, n, ell)
    # split at the classical well minimum so the quadrature sees both tails
    z_split = math.log(max(cp.A_coeff, 1e-300) / max(-cp.B_coeff / 2.0, 1e-300)) / spec.alpha \
        if cp.B_coeff < 0 else 0.0
    left = integrate_adaptive(lambda t: R(t) ** 2, -math.inf, z_split, rel_tol=1e-13)
    right = integrate_adaptive(lambda t: R(t) ** 2, z_split, math.inf, rel_tol=1e-13)
    norm = 1.0 / math.sqrt((left.value + right.value) * spec.r_e)
    z = grid.nodes()
    radial = norm * R(z)
    z.setflags(write=False)
    radial.setflags(write=False)
    return BoundState(
        n=n,
        ell=ell,
        energy=_level_energy(cp, n),
        k_exponent=cp.k_exponent(n),
        z=z,
        radial=radial,
        r_e=spec.r_e,
        norm=norm,
    )


def bound_states(spec: PotentialSpec, ell: int, grid: GridSpec | None = None) -> list[BoundState]:
    cp = channel_params(spec, ell)
    return [wavefunction(spec, n, ell, grid) for n in range(cp.n_max + 1)]


def cusp_map(V0: float, A_tilde: float, base: PotentialSpec | None = None) -> PotentialSpec:
    """``V0 exp(-|z|/A_tilde)`` as a Morse spec: V1 = 0, V2 = -V0/2, alpha = 1/A_tilde."""
    if not A_tilde > 0:
        raise ValueError(f"A_tilde must be positive, got {A_tilde!r}")
    base = base or PotentialSpec(V1=1.0, V2=0.0, alpha=1.0)
    return PotentialSpec(
        V1=0.0,
        V2=-V0 / 2.0,
        alpha=1.0 / A_tilde,
        r_e=base.r_e,
        mu=base.mu,
        hbar=base.hbar,
        k_B=base.k_B,
        kind=PotentialKind.CUSP,
        V0=V0,
        A_tilde=A_tilde,
    )


# --------------------------------------------------------------------------
# finite-difference oracle
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class _OracleProblem:
    z_lo: float
    z_hi: float
    physical_left_wall: bool
    threshold: float
    veff: object


def _oracle_problem(spec: PotentialSpec, ell: int, mode: OracleMode,
                    grid: GridSpec) -> _OracleProblem:
    eps = spec.energy_scale
    L = ell * (ell + 1)
    alpha = spec.alpha
    if spec.kind is PotentialKind.CUSP and (ell == 0 or mode is OracleMode.PHYSICAL_CENTRIFUGAL):
        # half-line radial problem, Dirichlet at z = 0
        def veff(z):
            return spec.potential(z) + eps * L / z**2
        return _OracleProblem(max(grid.z_min, 0.0), grid.z_max, grid.z_min <= 0.0, 0.0, veff)

    if mode is OracleMode.PEKERIS_VALIDATION or ell == 0:
        c = pekeris_coeffs(alpha)

        def veff(z):
            y = np.exp(-alpha * z)
            return eps * L * (c.a1 + c.a2 * y + c.a3 * y * y) + spec.V1 * y * y - 2.0 * spec.V2 * y
        return _OracleProblem(grid.z_min, grid.z_max, False, eps * L * c.a1, veff)

    # true centrifugal term, r > 0 only
    def veff(z):
        return spec.potential(z) + eps * L / (1.0 + z) ** 2
    return _OracleProblem(max(grid.z_min, -1.0), grid.z_max, grid.z_min <= -1.0, 0.0, veff)


def _fd_solve(problem: _OracleProblem, points: int, eps: float):
    z = np.linspace(problem.z_lo, problem.z_hi, points)[1:-1]
    h = z[1] - z[0]
    V = problem.veff(z)
    diag = 2.0 * eps / h**2 + V
    off = np.full(z.size - 1, -eps / h**2)
    if not V.min() < problem.threshold:
        return np.empty(0), np.empty((z.size, 0))
    vals, vecs = eigh_tridiagonal(
        diag, off, select="v", select_range=(V.min() - 1.0, problem.threshold),
        check_finite=False,
    )
    keep = vals < problem.threshold
    return vals[keep], vecs[:, keep]


def ode_oracle(spec: PotentialSpec, ell: int,
               mode: OracleMode = OracleMode.PEKERIS_VALIDATION,
               grid: GridSpec | None = None, *, drift_tol: float = 1e-3,
               edge_tol: float = 1e-4) -> list[float]:
    """Bound energies of the radial ODE from a 3-point finite-difference grid.

    The problem is solved on ``grid`` and on its refinement (halved step);
    the returned energies are the Richardson-extrapolated pairs, ascending.
    PEKERIS_VALIDATION solves exactly the ODE behind the closed form;
    PHYSICAL_CENTRIFUGAL keeps ``ell(ell+1)/(1+z)**2`` on z > -1. Cusp
    specs with ell = 0 (or physical mode) use the half-line z > 0.

    Raises GridTooCoarse if the two grids disagree by more than ``drift_tol``
    (relative to ``max(|E|, eps*alpha**2)``) or a state has relative amplitude above ``edge_tol`` at an
    artificial box edge.
    """
    grid = grid or GridSpec()
    mode = OracleMode(mode)
    problem = _oracle_problem(spec, ell, mode, grid)
    eps = spec.energy_scale
    coarse, _ = _fd_solve(problem, grid.points, eps)
    fine, vecs = _fd_solve(problem, grid.refined().points, eps)
    m = min(coarse.size, fine.size)
    if m == 0:
        return []
    coarse, fine, vecs = coarse[:m], fine[:m], vecs[:, :m]
    # levels near E = 0 are measured against the ladder's energy unit
    drift = np.abs(fine - coarse) / np.maximum(np.abs(fine), eps * spec.alpha**2)
    if drift.max() > drift_tol:
        worst = int(np.argmax(drift))
        raise GridTooCoarse(
            f"level {worst} drifts by {drift[worst]:.3g} (relative) between "
            f"{grid.points} and {grid.refined().points} points; tolerance {drift_tol:g}"
        )
    peak = np.max(np.abs(vecs), axis=0)
    right = np.abs(vecs[-1]) / peak
    left = np.zeros_like(right) if problem.physical_left_wall else np.abs(vecs[0]) / peak
    edge = np.maximum(left, right)
    if edge.max() > edge_tol:
        worst = int(np.argmax(edge))
        raise GridTooCoarse(
            f"level {worst} has relative amplitude {edge[worst]:.3g} at the grid edge "
            f"(tolerance {edge_tol:g}); widen [z_min, z_max]"
        )
    return [float(e) for e in (4.0 * fine - coarse) / 3.0]
