import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from morse_thermo.optics import (
    ChannelMismatch,
    FieldSpec,
    OpticsError,
    PerturbationInvalid,
    dipole_element,
    dipole_matrix,
    fwhm,
    intensity_crossover,
    stark_levels,
    stark_shift,
    susceptibility_first,
    susceptibility_sweep,
    susceptibility_third,
    susceptibility_total,
    two_level,
)
from morse_thermo.spectrum import GridSpec, bound_states, radial_function, wavefunction

M10_DESK = 0.37267799624996495  # sqrt(5)/6
M00_DESK = 0.20665720658


@pytest.fixture(scope="module")
def desk_states():
    from morse_thermo.spectrum import PotentialSpec
    return bound_states(PotentialSpec(V1=8.0, V2=8.0, alpha=1.0), 0)


@pytest.fixture(scope="module")
def desk_two_level(desk_states):
    return two_level(desk_states)


class TestDipole:
    def test_symmetric(self, desk_states):
        M = dipole_matrix(desk_states)
        assert np.max(np.abs(M - M.T)) <= 1e-10
        assert dipole_element(desk_states[0], desk_states[1]) == \
            dipole_element(desk_states[1], desk_states[0])

    def test_diagonal_nonzero(self, desk_states):
        assert dipole_element(desk_states[0], desk_states[0]) == pytest.approx(M00_DESK, rel=1e-9)

    def test_m10_closed_form(self, desk_states):
        assert abs(dipole_element(desk_states[1], desk_states[0])) == pytest.approx(M10_DESK, rel=1e-10)

    def test_m10_independent_quadrature(self, desk):
        R0 = radial_function(desk, 0, 0)
        R1 = radial_function(desk, 1, 0)
        n0 = wavefunction(desk, 0, 0).norm
        n1 = wavefunction(desk, 1, 0).norm
        val = quad(lambda z: n0 * R0(z) * z * n1 * R1(z), -10, 60, limit=400, epsabs=1e-14)[0]
        assert abs(val) == pytest.approx(M10_DESK, rel=1e-9)

    def test_m10_two_resolutions(self, desk):
        vals = []
        for points in (8001, 16001):
            s = bound_states(desk, 0, GridSpec(-6.0, 30.0, points))
            vals.append(np.trapezoid(s[1].radial * s[1].z * s[0].radial, s[0].z))
        assert abs(vals[0] - vals[1]) <= 1e-7
        assert abs(vals[1]) == pytest.approx(M10_DESK, rel=1e-7)

    def test_charge_scaling(self, desk_states):
        assert dipole_element(desk_states[0], desk_states[1], 2.5) == \
            pytest.approx(2.5 * dipole_element(desk_states[0], desk_states[1]), rel=1e-15)

    def test_channel_mismatch(self, morse50):
        a = wavefunction(morse50, 0, 1)
        b = wavefunction(morse50, 0, 2)
        with pytest.raises(ChannelMismatch):
            dipole_element(a, b)

    def test_grid_mismatch(self, desk):
        a = wavefunction(desk, 0, 0)
        b = wavefunction(desk, 1, 0, GridSpec(-6.0, 30.0, 4001))
        with pytest.raises(ValueError):
            dipole_element(a, b)


class TestStark:
    def test_zero_field(self, desk):
        assert stark_levels(desk, FieldSpec(), 0, 0) == 0.0

    def test_ground_second_order_negative(self, desk_states):
        f = FieldSpec(E_static=1e-3)
        total = stark_shift(desk_states, f, 0)
        first = 1e-3 * dipole_element(desk_states[0], desk_states[0])
        assert total - first < 0

    def test_linear_coefficient_by_fit(self, desk_states):
        fields = np.linspace(2e-4, 1e-3, 5)
        shifts = [stark_shift(desk_states, FieldSpec(E_static=E), 0) for E in fields]
        c2, c1, c0 = np.polyfit(fields, shifts, 2)
        assert c1 == pytest.approx(dipole_element(desk_states[0], desk_states[0]), rel=1e-4)
        assert abs(c0) < 1e-12
        assert c2 < 0

    def test_gate(self, desk_states):
        with pytest.raises(PerturbationInvalid):
            stark_shift(desk_states, FieldSpec(E_static=1.0), 0)

    def test_basis_size(self, desk, desk_states):
        full = stark_levels(desk, FieldSpec(E_static=1e-3), 1, 0)
        two = stark_levels(desk, FieldSpec(E_static=1e-3), 1, 0, basis_size=2)
        assert full != two
        with pytest.raises(ValueError):
            stark_levels(desk, FieldSpec(E_static=1e-3), 0, 0, basis_size=5)


fields = st.builds(FieldSpec, rho_s=st.floats(0.1, 10), n_r=st.floats(1, 3),
                   intensity=st.floats(0, 10), gamma0=st.floats(1e-3, 1),
                   c_light=st.floats(0.5, 5), hbar=st.floats(0.5, 2))


class TestSusceptibility:
    def test_static_limit(self):
        f = FieldSpec(gamma0=1e-12)
        eta = susceptibility_first(f, 3.0, 0.4, 0.0)
        assert eta.real == pytest.approx(0.16 / 3.0, rel=1e-12)
        assert abs(eta.imag) < 1e-12

    def test_resonance_pure_imaginary(self):
        f = FieldSpec(gamma0=0.05)
        eta = susceptibility_first(f, 3.0, 0.4, 3.0)
        assert eta.real == 0.0
        assert eta.imag == pytest.approx(0.16 / 0.05, rel=1e-14)

    def test_dipole_squared(self):
        f = FieldSpec()
        assert abs(susceptibility_first(f, 3.0, 0.8, 2.7)) == pytest.approx(
            4 * abs(susceptibility_first(f, 3.0, 0.4, 2.7)), rel=1e-14)

    def test_zero_intensity(self):
        p = susceptibility_total(FieldSpec(intensity=0.0), 3.0, 0.4, 0.2, 0.7, 2.9)
        assert p.eta3 == 0
        assert p.eta_total == p.eta1

    def test_doubling_intensity_exact(self):
        a = susceptibility_third(FieldSpec(intensity=0.01), 3.0, 0.4, 0.2, 0.7, 2.9)
        b = susceptibility_third(FieldSpec(intensity=0.02), 3.0, 0.4, 0.2, 0.7, 2.9)
        assert b == 2 * a

    def test_symmetric_dipoles_collapse(self):
        f = FieldSpec(intensity=0.3, gamma0=0.05)
        w = 2.8
        delta = 3.0 - w
        eta = susceptibility_third(f, 3.0, 0.4, 0.5, 0.5, w)
        prefactor = 2 * math.pi * 0.3 * 0.4**4 / complex(delta, -0.05)
        assert eta == pytest.approx(prefactor * 4 / (delta**2 + 0.05**2), rel=1e-13)

    @settings(max_examples=200, deadline=None)
    @given(fields, st.floats(0.1, 10), st.floats(-2, 2), st.floats(-2, 2), st.floats(-2, 2),
           st.floats(0, 10))
    def test_additive(self, f, E10, M10, M00, M11, w):
        p = susceptibility_total(f, E10, M10, M00, M11, w)
        assert p.eta_total == p.eta1 + p.eta3

    @settings(max_examples=200, deadline=None)
    @given(fields, st.floats(0.1, 10), st.floats(0.1, 10), st.floats(0, 6))
    def test_scaling_laws(self, f, s_rho, s_int, w):
        base = replace(f, intensity=max(f.intensity, 0.1))
        scaled = replace(base, rho_s=base.rho_s * s_rho, intensity=base.intensity * s_int)
        e1 = susceptibility_first(base, 3.0, 0.4, w)
        e1s = susceptibility_first(scaled, 3.0, 0.4, w)
        assert e1s == pytest.approx(s_rho * e1, rel=1e-12)
        e3 = susceptibility_third(base, 3.0, 0.4, 0.2, 0.7, w)
        e3s = susceptibility_third(scaled, 3.0, 0.4, 0.2, 0.7, w)
        assert e3s == pytest.approx(s_rho * s_int * e3, rel=1e-12)

    @settings(max_examples=100, deadline=None)
    @given(fields, st.floats(0.5, 5))
    def test_absorption_positive_at_resonance(self, f, E10):
        assert susceptibility_first(f, E10, 0.4, E10 / f.hbar).imag > 0


class TestDeskResponse:
    def test_two_level(self, desk_two_level):
        E10, M10, M00, M11 = desk_two_level
        assert E10 == pytest.approx(3.0, abs=1e-14)
        assert abs(M10) == pytest.approx(M10_DESK, rel=1e-10)

    def test_resonance_and_width(self, desk_two_level):
        E10, M10, M00, M11 = desk_two_level
        f = FieldSpec(gamma0=0.05)
        w = np.linspace(2.0, 4.0, 4001)
        im = np.array([p.eta1.imag for p in susceptibility_sweep(f, E10, M10, M00, M11, w)])
        step = w[1] - w[0]
        assert abs(w[int(np.argmax(im))] - E10) <= step
        assert fwhm(w, im) == pytest.approx(2 * f.gamma0, rel=0.02)

    def test_no_crossover_regression(self, desk_two_level):
        E10, M10, M00, M11 = desk_two_level
        w = np.linspace(2.5, 3.5, 1001)
        assert intensity_crossover(FieldSpec(), E10, M10, M00, M11, w,
                                   [1e-3, 1e-2, 0.1, 1.0, 10.0]) is None

    def test_needs_two_states(self, desk_states):
        with pytest.raises(OpticsError):
            two_level(desk_states[:1])

    def test_fwhm_unresolved(self):
        x = np.linspace(0, 1, 11)
        with pytest.raises(ValueError):
            fwhm(x, np.ones_like(x))


class TestFieldSpec:
    @pytest.mark.parametrize("kw", [dict(rho_s=0), dict(n_r=0.5), dict(intensity=-1),
                                    dict(gamma0=0), dict(E_static=-1), dict(hbar=0)])
    def test_invalid(self, kw):
        with pytest.raises(ValueError):
            FieldSpec(**kw)
