"""Physical constants, unit conversion and the (alpha, delta) parameterization.

Everything internal is expressed in eV and Angstrom with hbar*c carried
explicitly, so hbar*omega and m*c^2 are both energies in eV.
"""

import json
import math
import os
from dataclasses import dataclass
from importlib import resources
from types import MappingProxyType

from .errors import DomainError

CONSTANTS_ENV = "PEKERIS_CONSTANTS"


@dataclass(frozen=True)
class PhysicalConstants:
    hbar_c: float  # eV * Angstrom
    amu_to_eV: float  # eV per atomic mass unit
    kB: float  # eV / K
    electron_mass_amu: float
    source: str = ""

    def __post_init__(self):
        for name in ("hbar_c", "amu_to_eV", "kB", "electron_mass_amu"):
            if not getattr(self, name) > 0:
                raise DomainError(f"constant {name} must be positive",
                                  invariant="all constants strictly positive")


def _read_constants():
    path = os.environ.get(CONSTANTS_ENV)
    if path:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    else:
        raw = json.loads(resources.files("relmorse").joinpath(
            "data/constants.json").read_text(encoding="utf-8"))
    return PhysicalConstants(
        hbar_c=float(raw["hbar_c"]),
        amu_to_eV=float(raw["amu_to_eV"]),
        kB=float(raw["kB"]),
        electron_mass_amu=float(raw["electron_mass_amu"]),
        source=str(raw.get("source", "")),
    )


# Read once at import; never re-read per call.
CONSTANTS = _read_constants()
HBAR_C = CONSTANTS.hbar_c
AMU_TO_EV = CONSTANTS.amu_to_eV
KB = CONSTANTS.kB
ELECTRON_MC2 = CONSTANTS.electron_mass_amu * CONSTANTS.amu_to_eV

constants_table = MappingProxyType({
    "hbar_c": HBAR_C, "amu_to_eV": AMU_TO_EV, "kB": KB,
})


def amu_to_energy(mass):
    """Rest energy in eV of a mass given in atomic mass units."""
    if not mass > 0:
        raise DomainError(f"mass must be positive, got {mass!r}",
                          invariant="mass > 0")
    return mass * AMU_TO_EV


def kelvin_to_celsius(T):
    return T - 273.15


@dataclass(frozen=True)
class OscillatorParams:
    """Dimensionful oscillator inputs.

    Parameters
    ----------
    mass : float
        Rest energy m c^2 in eV.
    hbar_omega : float
        Oscillator quantum in eV.
    gamma : float
        Deformation parameter in 1/Angstrom (negative for a bound
        radial Morse problem, alpha = -gamma * r_e > 0).
    r_e : float
        Equilibrium length in Angstrom.
    hbar_c : float
        Defaults to the constants table; override (e.g. 1.0) to work in
        natural units where hbar = m = omega = 1.
    """

    mass: float
    hbar_omega: float
    gamma: float
    r_e: float
    hbar_c: float = HBAR_C

    def __post_init__(self):
        if not self.mass > 0:
            raise DomainError("mass must be positive", invariant="mass > 0")
        if not self.hbar_omega > 0:
            raise DomainError("hbar_omega must be positive",
                              invariant="hbar*omega > 0")
        if not self.r_e > 0:
            raise DomainError("r_e must be positive", invariant="r_e > 0")
        if not math.isfinite(self.gamma):
            raise DomainError("gamma must be finite", invariant="gamma finite")

    @property
    def kappa(self):
        """gamma^2 hbar / (m omega); equals alpha^2 * delta."""
        return self.gamma ** 2 * self.hbar_c ** 2 / (self.mass * self.hbar_omega)

    @property
    def morse_depth(self):
        """m omega^2 / (2 gamma^2) in eV; infinite when gamma == 0."""
        if self.gamma == 0:
            return math.inf
        return self.hbar_omega ** 2 * self.mass / (
            2 * self.gamma ** 2 * self.hbar_c ** 2)

    def replace(self, **changes):
        fields = dict(mass=self.mass, hbar_omega=self.hbar_omega,
                      gamma=self.gamma, r_e=self.r_e, hbar_c=self.hbar_c)
        fields.update(changes)
        return OscillatorParams(**fields)

    @classmethod
    def from_dimensionless(cls, alpha, delta, r_e, mass, hbar_c=HBAR_C):
        """Build parameters with prescribed alpha, delta for a given r_e and m c^2."""
        if not (alpha > 0 and delta > 0):
            raise DomainError("alpha and delta must be positive",
                              invariant="alpha > 0, delta > 0")
        hbar_omega = hbar_c ** 2 / (mass * r_e ** 2 * delta)
        return cls(mass=mass, hbar_omega=hbar_omega, gamma=-alpha / r_e,
                   r_e=r_e, hbar_c=hbar_c)


def dimensionless(params):
    """Return ``(alpha, delta)`` with alpha = -gamma r_e, delta = hbar/(m omega r_e^2)."""
    alpha = -params.gamma * params.r_e
    if not alpha > 0:
        raise DomainError(f"alpha = -gamma*r_e = {alpha!r} must be positive "
                          "for a bound Morse problem", invariant="alpha > 0")
    delta = params.hbar_c ** 2 / (params.mass * params.hbar_omega * params.r_e ** 2)
    return alpha, delta
