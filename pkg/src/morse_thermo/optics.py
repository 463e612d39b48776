"""Two-level optical response built from the bound states of one channel."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.integrate import simpson

from morse_thermo.spectrum import BoundState, GridSpec, PotentialSpec, bound_states


class OpticsError(Exception):
    pass


class ChannelMismatch(OpticsError):
    pass


class PerturbationInvalid(OpticsError):
    pass


@dataclass(frozen=True)
class FieldSpec:
    rho_s: float = 1.0
    n_r: float = 1.0
    intensity: float = 0.0
    gamma0: float = 0.05
    E_static: float = 0.0
    e_charge: float = 1.0
    c_light: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        if not self.rho_s > 0:
            raise ValueError(f"rho_s must be positive, got {self.rho_s!r}")
        if not self.n_r >= 1:
            raise ValueError(f"n_r must be >= 1, got {self.n_r!r}")
        if not self.intensity >= 0:
            raise ValueError(f"intensity must be >= 0, got {self.intensity!r}")
        if not self.gamma0 > 0:
            raise ValueError(f"gamma0 must be positive, got {self.gamma0!r}")
        if not self.E_static >= 0:
            raise ValueError(f"E_static is a magnitude, got {self.E_static!r}")
        for name in ("e_charge", "c_light", "hbar"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")


@dataclass(frozen=True)
class SusceptibilityPoint:
    omega: float
    eta1: complex
    eta3: complex
    eta_total: complex
    E10: float
    M10: float
    M00: float
    M11: float


def _check_pair(a: BoundState, b: BoundState):
    if a.ell != b.ell:
        raise ChannelMismatch(f"dipole elements need one channel, got ell={a.ell} and ell={b.ell}")
    if a.z.shape != b.z.shape or not np.array_equal(a.z, b.z):
        raise ValueError("states must be sampled on a common grid")


def dipole_element(state_i: BoundState, state_j: BoundState, e_charge: float = 1.0) -> float:
    """``M_ij = e r_e integral R_i z R_j r_e dz`` (Simpson on the shared grid)."""
    _check_pair(state_i, state_j)
    r_e = state_i.r_e
    # symmetric product so M_ij and M_ji round identically
    integrand = (state_i.radial * state_j.radial) * state_i.z
    return float(e_charge * r_e * r_e * simpson(integrand, x=state_i.z))


def dipole_matrix(states: list[BoundState], e_charge: float = 1.0) -> np.ndarray:
    m = len(states)
    out = np.zeros((m, m))
    for i in range(m):
        for j in range(i, m):
            out[i, j] = out[j, i] = dipole_element(states[i], states[j], e_charge)
    return out


def stark_shift(states: list[BoundState], field: FieldSpec, n: int,
                basis_size: int | None = None, validity: float = 0.1) -> float:
    """Static-field shift of level n through second order.

    ``e|E| z_nn + e^2|E|^2 sum_{j != n} |z_nj|^2 / (E_n - E_j)`` over the first
    ``basis_size`` states. Raises PerturbationInvalid unless
    ``e|E| max|z_ij| < validity * |E_0 - E_1|``.
    """
    basis = states if basis_size is None else states[:basis_size]
    if basis_size is not None and basis_size > len(states):
        raise ValueError(f"basis_size {basis_size} exceeds the {len(states)} bound states")
    if not 0 <= n < len(basis):
        raise ValueError(f"level {n} is outside the basis of size {len(basis)}")
    z = dipole_matrix(basis, 1.0)
    eE = field.e_charge * field.E_static
    if eE == 0.0:
        return 0.0
    if len(basis) >= 2:
        gap = abs(basis[0].energy - basis[1].energy)
        coupling = eE * float(np.max(np.abs(z)))
        if not coupling < validity * gap:
            raise PerturbationInvalid(
                f"e|E|*max|z| = {coupling:.3g} is not small against |E0 - E1| = {gap:.3g}"
            )
    second = sum(z[n, j] ** 2 / (basis[n].energy - basis[j].energy)
                 for j in range(len(basis)) if j != n)
    return eE * z[n, n] + eE * eE * second


def stark_levels(spec: PotentialSpec, field: FieldSpec, n: int, ell: int,
                 basis_size: int | None = None, grid: GridSpec | None = None) -> float:
    """Second-order static-field shift of level (n, ell) over the bound basis."""
    return stark_shift(bound_states(spec, ell, grid), field, n, basis_size)


def susceptibility_first(field: FieldSpec, E10: float, M10: float, omega: float) -> complex:
    detuning = complex(E10 - field.hbar * omega, -field.hbar * field.gamma0)
    return field.rho_s * abs(M10) ** 2 / detuning


def susceptibility_third(field: FieldSpec, E10: float, M10: float, M00: float, M11: float,
                         omega: float) -> complex:
    hg = field.hbar * field.gamma0
    delta = E10 - field.hbar * omega
    detuning = complex(delta, -hg)
    prefactor = 2.0 * math.pi * field.intensity * field.rho_s / (field.n_r * field.c_light * detuning)
    m2 = abs(M10) ** 2
    # |M10|^4 carried into the bracket so |M10| -> 0 has no 0/0
    resonant = 4.0 * m2 * m2 / (delta * delta + hg * hg)
    asym = m2 * abs(M11 - M00) ** 2 / (complex(E10, -hg) * detuning)
    return prefactor * (resonant - asym)


def susceptibility_total(field: FieldSpec, E10: float, M10: float, M00: float, M11: float,
                         omega: float) -> SusceptibilityPoint:
    eta1 = susceptibility_first(field, E10, M10, omega)
    eta3 = susceptibility_third(field, E10, M10, M00, M11, omega)
    return SusceptibilityPoint(omega=omega, eta1=eta1, eta3=eta3, eta_total=eta1 + eta3,
                               E10=E10, M10=M10, M00=M00, M11=M11)


def two_level(states: list[BoundState], lower: int = 0, upper: int = 1,
              e_charge: float = 1.0) -> tuple[float, float, float, float]:
    """(E10, M10, M00, M11) for the chosen pair of levels."""
    if len(states) < 2:
        raise OpticsError(f"two-level response needs two bound states, got {len(states)}")
    lo, hi = states[lower], states[upper]
    return (
        hi.energy - lo.energy,
        dipole_element(hi, lo, e_charge),
        dipole_element(lo, lo, e_charge),
        dipole_element(hi, hi, e_charge),
    )


def susceptibility_sweep(field: FieldSpec, E10: float, M10: float, M00: float, M11: float,
                         omegas) -> list[SusceptibilityPoint]:
    return [susceptibility_total(field, E10, M10, M00, M11, float(w)) for w in omegas]


def fwhm(x, y) -> float:
    """Full width at half maximum of a single peak, with linear interpolation."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    i = int(np.argmax(y))
    half = 0.5 * y[i]
    left = i
    while left > 0 and y[left] > half:
        left -= 1
    right = i
    while right < y.size - 1 and y[right] > half:
        right += 1
    if y[left] > half or y[right] > half:
        raise ValueError("peak is not resolved inside the sampled range")
    xl = np.interp(half, [y[left], y[left + 1]], [x[left], x[left + 1]])
    xr = np.interp(half, [y[right], y[right - 1]], [x[right], x[right - 1]])
    return float(xr - xl)


def intensity_crossover(field: FieldSpec, E10: float, M10: float, M00: float, M11: float,
                        omegas, intensities) -> float | None:
    """Smallest intensity at which max Im(eta_total) drops below max Im(eta1).

    Returns None if no intensity in ``intensities`` does so.
    """
    base = max(susceptibility_first(field, E10, M10, float(w)).imag for w in omegas)
    for intensity in sorted(intensities):
        f = replace(field, intensity=float(intensity))
        peak = max(p.eta_total.imag for p in susceptibility_sweep(f, E10, M10, M00, M11, omegas))
        if peak < base:
            return float(intensity)
    return None
