"""Oracle cross-checks for one configuration (backs ``morse-thermo validate``)."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from morse_thermo.config import RunConfig
from morse_thermo.optics import dipole_matrix
from morse_thermo.spectrum import (
    AnalyticPathUnavailable,
    GridTooCoarse,
    NoBoundChannel,
    OracleMode,
    bound_states,
    channel_params,
    energies,
    ode_oracle,
)
from morse_thermo.thermo import (
    EnsembleSpec,
    ThermoMethod,
    heat_capacity_from_sweep,
    sweep_flags,
    thermo_point,
    thermo_sweep,
)

PASS, FAIL, SKIP, INFO = "pass", "fail", "skip", "info"

SPECTRUM_RTOL = 1e-4
IDENTITY_RTOL = 1e-9
HEAT_CAPACITY_RTOL = 1e-4
CONTINUUM_RTOL = 1e-6
DIPOLE_SYM_TOL = 1e-10
NORM_TOL = 1e-8
ORTHO_TOL = 1e-6


@dataclass(frozen=True)
class CheckResult:
    name: str
    status: str
    deviation: float
    tolerance: float
    detail: str = ""

    @property
    def failed(self) -> bool:
        return self.status == FAIL


def _check(name, deviation, tolerance, detail="") -> CheckResult:
    ok = math.isfinite(deviation) and deviation <= tolerance
    return CheckResult(name, PASS if ok else FAIL, float(deviation), tolerance, detail)


def _max_rel(a, b) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return float(np.max(np.abs(a - b) / np.abs(b)))


def _oracle_only(cfg: RunConfig, reason: str) -> list[CheckResult]:
    results = [CheckResult("analytic_spectrum", SKIP, math.nan, math.nan, reason)]
    try:
        levels = ode_oracle(cfg.potential, cfg.ell, OracleMode.PHYSICAL_CENTRIFUGAL, cfg.grid)
        finer = ode_oracle(cfg.potential, cfg.ell, OracleMode.PHYSICAL_CENTRIFUGAL,
                           cfg.grid.refined())
    except GridTooCoarse as exc:
        return results + [CheckResult("oracle_grid", FAIL, math.nan, math.nan,
                                      f"GridTooCoarse: {exc}")]
    if not levels:
        return results + [CheckResult("oracle_bound_levels", FAIL, 0.0, 1.0,
                                      "no bound level found")]
    m = min(len(levels), len(finer))
    detail = "E = " + ", ".join(f"{e:.10g}" for e in levels)
    results.append(CheckResult("oracle_bound_levels", PASS, float(len(levels)), 1.0, detail))
    results.append(_check("oracle_refinement_stability", _max_rel(levels[:m], finer[:m]),
                          SPECTRUM_RTOL))
    return results


def run_checks(cfg: RunConfig) -> list[CheckResult]:
    spec, ell = cfg.potential, cfg.ell
    try:
        cp = channel_params(spec, ell)
    except AnalyticPathUnavailable:
        return _oracle_only(cfg, "unavailable (V1 = 0)")
    except NoBoundChannel as exc:
        results = [CheckResult("analytic_spectrum", SKIP, exc.lambda_ell, 0.5,
                               f"no bound channel (lambda_ell={exc.lambda_ell:.10g})")]
        try:
            found = ode_oracle(spec, ell, OracleMode.PEKERIS_VALIDATION, cfg.grid)
        except GridTooCoarse as err:
            return results + [CheckResult("oracle_grid", FAIL, math.nan, math.nan,
                                          f"GridTooCoarse: {err}")]
        results.append(_check("oracle_confirms_no_bound_state", float(len(found)), 0.0))
        return results

    results: list[CheckResult] = []
    E = energies(spec, ell)

    # spectrum versus the finite-difference oracle
    try:
        oracle = ode_oracle(spec, ell, OracleMode.PEKERIS_VALIDATION, cfg.grid)
    except GridTooCoarse as exc:
        results.append(CheckResult("spectrum_vs_oracle", FAIL, math.nan, SPECTRUM_RTOL,
                                   f"GridTooCoarse: {exc}"))
        oracle = None
    if oracle is not None:
        if len(oracle) != len(E):
            results.append(CheckResult("spectrum_vs_oracle", FAIL, abs(len(oracle) - len(E)),
                                       0.0, f"oracle found {len(oracle)} levels, closed form {len(E)}"))
        else:
            results.append(_check("spectrum_vs_oracle", _max_rel(oracle, E), SPECTRUM_RTOL))
    if ell > 0:
        try:
            physical = ode_oracle(spec, ell, OracleMode.PHYSICAL_CENTRIFUGAL, cfg.grid)
            m = min(len(physical), len(E))
            dev = _max_rel(physical[:m], E[:m]) if m else math.nan
            results.append(CheckResult("pekeris_approximation_error", INFO, dev, math.nan,
                                       f"{len(physical)} levels with the true centrifugal term"))
        except GridTooCoarse as exc:
            results.append(CheckResult("pekeris_approximation_error", INFO, math.nan, math.nan,
                                       f"GridTooCoarse: {exc}"))

    xi_rule = math.floor(abs(cp.Xi) / 4.0)
    if xi_rule == abs(cp.Xi) / 4.0:
        xi_rule -= 1
    results.append(_check("n_max_rule", abs(cp.n_max - xi_rule), 0.0,
                          f"n_max={cp.n_max}, Xi={cp.Xi:.10g}"))
    gaps = np.diff(E)
    results.append(_check("levels_increasing", 0.0 if np.all(gaps > 0) else 1.0, 0.0))
    results.append(_check("level_spacing_shrinks",
                          0.0 if np.all(np.diff(gaps) < 0) or len(gaps) < 2 else 1.0, 0.0))

    states = bound_states(spec, ell, cfg.grid)
    overlaps = np.array([[np.trapezoid(a.radial * b.radial, a.z) * spec.r_e for b in states]
                         for a in states])
    results.append(_check("wavefunction_normalization",
                          float(np.max(np.abs(np.diag(overlaps) - 1.0))), NORM_TOL))
    off = overlaps - np.diag(np.diag(overlaps))
    results.append(_check("wavefunction_orthogonality", float(np.max(np.abs(off))), ORTHO_TOL))
    results.append(_check("node_count",
                          float(sum(s.node_count() != s.n for s in states)), 0.0))
    M = dipole_matrix(states, cfg.optics.field.e_charge)
    results.append(_check("dipole_symmetry", float(np.max(np.abs(M - M.T))), DIPOLE_SYM_TOL))

    ens = EnsembleSpec.from_channel(cp, spec.k_B, cfg.n_particles, cfg.high_t_approx)
    T = cfg.t_sweep.values()
    pts = thermo_sweep(ens, E, T, ThermoMethod.DISCRETE)
    identity = max(abs(p.F - (p.U - p.T * p.S)) / max(abs(p.U), abs(p.F), 1.0) for p in pts)
    results.append(_check("free_energy_identity", identity, IDENTITY_RTOL))
    flags = sweep_flags(pts)
    for key, ok in flags.items():
        results.append(_check(key, 0.0 if ok else 1.0, 0.0))
    results.extend(heat_capacity_checks(pts, E, spec.k_B))
    results.append(continuum_agreement(ens, T))
    return results


def heat_capacity_checks(pts, E, k_B: float) -> list[CheckResult]:
    """C_v against cross-point dU/dT where k_B T >= (E1 - E0)/5."""
    T = np.array([p.T for p in pts])
    U = np.array([p.U for p in pts])
    C = np.array([p.C_v for p in pts])
    fd = heat_capacity_from_sweep(T, U)
    gap = E[1] - E[0] if len(E) > 1 else math.inf
    window = np.isfinite(fd) & (k_B * T >= gap / 5.0)
    if not np.any(window):
        return [CheckResult("heat_capacity_vs_dU_dT", SKIP, math.nan, HEAT_CAPACITY_RTOL,
                            "no sweep points at moderate temperature")]
    rel = np.abs(fd[window] - C[window]) / np.abs(C[window])
    return [_check("heat_capacity_vs_dU_dT", float(np.max(rel)), HEAT_CAPACITY_RTOL,
                   f"{int(window.sum())} points with k_B T >= (E1-E0)/5")]


def continuum_agreement(ens: EnsembleSpec, T) -> CheckResult:
    worst = 0.0
    for t in T:
        a = thermo_point(ens, None, float(t), ThermoMethod.CONTINUUM_ANALYTIC)
        n = thermo_point(ens, None, float(t), ThermoMethod.CONTINUUM_NUMERIC)
        for q in ("U", "F", "S", "C_v"):
            va, vn = getattr(a, q), getattr(n, q)
            worst = max(worst, abs(va - vn) / abs(va))
    return _check("continuum_analytic_vs_numeric", worst, CONTINUUM_RTOL)
