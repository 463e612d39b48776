"""Generalized Morse / Cusp potentials: spectra, thermodynamics, optics."""

from morse_thermo.optics import (
    FieldSpec,
    SusceptibilityPoint,
    dipole_element,
    dipole_matrix,
    stark_levels,
    susceptibility_first,
    susceptibility_third,
    susceptibility_total,
)
from morse_thermo.specfun import dawson, erfi, erfi_scaled, integrate_adaptive, kummer_1f1
from morse_thermo.spectrum import (
    BoundState,
    ChannelParams,
    GridSpec,
    OracleMode,
    PotentialKind,
    PotentialSpec,
    channel_params,
    cusp_map,
    energies,
    energy,
    ode_oracle,
    pekeris_coeffs,
    wavefunction,
)
from morse_thermo.thermo import (
    EnsembleSpec,
    ThermoMethod,
    ThermoPoint,
    partition_continuum,
    partition_discrete,
    thermo_point,
    thermo_sweep,
)

__version__ = "0.1.0"

__all__ = [
    "BoundState",
    "channel_params",
    "ChannelParams",
    "cusp_map",
    "dawson",
    "dipole_element",
    "dipole_matrix",
    "energies",
    "energy",
    "EnsembleSpec",
    "erfi",
    "erfi_scaled",
    "FieldSpec",
    "GridSpec",
    "integrate_adaptive",
    "kummer_1f1",
    "ode_oracle",
    "OracleMode",
    "partition_continuum",
    "partition_discrete",
    "pekeris_coeffs",
    "PotentialKind",
    "PotentialSpec",
    "stark_levels",
    "susceptibility_first",
    "susceptibility_third",
    "susceptibility_total",
    "SusceptibilityPoint",
    "thermo_point",
    "thermo_sweep",
    "ThermoMethod",
    "ThermoPoint",
    "wavefunction",
]
