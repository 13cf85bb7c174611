"""Relativistic Morse oscillators: closed-form spectra, Pekeris mappings,
Riccati-closed couplings, Schottky thermodynamics and a finite-difference
oracle that checks them."""

__version__ = "0.1.0"

from .errors import RelMorseError
from .units import (CONSTANTS, OscillatorParams, PhysicalConstants, amu_to_energy,
                    dimensionless)
from .molecules import MoleculeRecord, get_molecule, load_molecules, shipped_molecules
from .spectra import (MorseLevel, MorseWavefunction, dirac_oscillator_energy,
                      eta_of_x, kg_oscillator_energy, kgmo_energy_1d, morse_lambda,
                      qmo_energy, qmo_wavefunction, x_of_eta)
from .couplings import CouplingSpec, builtin_coupling, tabulated_coupling
from .pekeris import (EffectiveMorse, MappedProblem, SpinAngularChannel,
                      channel_constants, classic_expansion, effective_morse,
                      generalized_coeffs, nmax, pekeris_energy, pekeris_map)
from .riccati import (FactorizedForm, RiccatiSpec, factorize, solve_riccati,
                      riccati_coupling, verify_ode)
from .thermo import (SchottkyPeak, SpectrumTable, ThermoSweep, build_spectrum,
                     partition, schottky_peaks, sweep)
from .oracle import GridProblem, eigensolve, richardson_refine

__all__ = [
    "RelMorseError", "CONSTANTS", "OscillatorParams", "PhysicalConstants",
    "amu_to_energy", "dimensionless", "MoleculeRecord", "get_molecule",
    "load_molecules", "shipped_molecules", "MorseLevel", "MorseWavefunction",
    "dirac_oscillator_energy", "eta_of_x", "kg_oscillator_energy", "kgmo_energy_1d",
    "morse_lambda", "qmo_energy", "qmo_wavefunction", "x_of_eta", "CouplingSpec",
    "builtin_coupling", "tabulated_coupling", "EffectiveMorse", "MappedProblem",
    "SpinAngularChannel", "channel_constants", "classic_expansion",
    "effective_morse", "generalized_coeffs", "nmax", "pekeris_energy", "pekeris_map",
    "FactorizedForm", "RiccatiSpec", "factorize", "solve_riccati", "riccati_coupling",
    "verify_ode", "SchottkyPeak", "SpectrumTable", "ThermoSweep", "build_spectrum",
    "partition", "schottky_peaks", "sweep", "GridProblem", "eigensolve",
    "richardson_refine",
]
