"""Canonical-ensemble thermodynamics of the finite S-wave spectra.

Statistical energies are dimensionless: the reduced energy E~/hbar w in the
non-relativistic regime (control gamma' = hbar w / kB T) and the full
energy E/mc^2 = sqrt(1 + 2 (hbar w/mc^2) E~) in the relativistic one
(control gamma' = mc^2 / kB T).  Boltzmann weights are exp(-gamma' E) and
all moments are taken relative to the lowest level, so large gamma' never
overflows.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, EmptySpectrumError, GridError
from .pekeris import Branch, Equation, nmax, pekeris_energy
from .units import KB, kelvin_to_celsius

REGIMES = ("nonrelativistic", "relativistic")


@dataclass(frozen=True)
class SpectrumTable:
    """Levels kept for the ensemble, with their dimensionless statistical energies.

    ``levels`` holds (N, branch, reduced energy E~/hbar w) sorted by branch
    then N.  ``offsets`` are statistical energies minus ``ground``.
    """

    levels: tuple
    regime: str
    gamma_ratio: float | None
    energy_unit: float | None
    ground: float
    offsets: np.ndarray = field(repr=False)
    dropped: int = 0
    equation: str = "dirac"

    @property
    def energies(self):
        return self.ground + self.offsets

    def __len__(self):
        return len(self.levels)


def _statistical(reduced, regime, gamma_ratio):
    """Return (ground, offsets, keep mask) for reduced energies in hbar*omega units."""
    reduced = np.asarray(reduced, dtype=float)
    if regime == "nonrelativistic":
        keep = reduced > 0
        x = reduced[keep]
        if x.size == 0:
            return 0.0, x, keep
        return float(x.min()), x - x.min(), keep
    arg = 1 + 2 * gamma_ratio * reduced
    keep = arg > 0
    red = reduced[keep]
    if red.size == 0:
        return 0.0, red, keep
    eps = np.sqrt(arg[keep])
    i0 = int(np.argmin(red))
    # difference of square roots without cancellation
    offsets = 2 * gamma_ratio * (red - red[i0]) / (eps + eps[i0])
    return float(eps[i0]), offsets, keep


def spectrum_from_levels(levels, regime="nonrelativistic", gamma_ratio=None,
                         energy_unit=None, equation="custom"):
    """Build a table from explicit (N, branch, reduced energy) triples."""
    if regime not in REGIMES:
        raise DomainError(f"unknown regime {regime!r}", invariant="regime")
    if regime == "relativistic" and not (gamma_ratio and gamma_ratio > 0):
        raise DomainError("relativistic regime needs gamma_ratio = hbar w / mc^2 > 0",
                          invariant="gamma_ratio > 0")
    levels = sorted(levels, key=lambda t: (str(t[1]), t[0]))
    reduced = [t[2] for t in levels]
    ground, offsets, keep = _statistical(reduced, regime, gamma_ratio)
    kept = tuple(t for t, k in zip(levels, keep) if k)
    if not kept:
        raise EmptySpectrumError("no level survives the positivity filter")
    order = np.argsort(offsets, kind="stable")
    return SpectrumTable(tuple(kept[i] for i in order), regime, gamma_ratio,
                         energy_unit, ground, offsets[order],
                         dropped=len(levels) - len(kept), equation=equation)


def build_spectrum(alpha, delta, equation="dirac", regime="nonrelativistic",
                   gamma_ratio=None, hbar_omega=None):
    """Recast S-wave ladders for the ensemble.

    Dirac combines the plus and minus branches; Klein-Gordon carries f = 0
    in both spin labels, i.e. the plus ladder counted twice.
    """
    equation = Equation(equation)
    if equation is Equation.dirac:
        branches = [(Branch.plus, Branch.plus), (Branch.minus, Branch.minus)]
    else:
        branches = [(Branch.plus, Branch.plus), (Branch.minus, Branch.plus)]
    levels = []
    for label, formula in branches:
        for N in range(nmax(alpha, delta, formula) + 1):
            levels.append((N, label.value, pekeris_energy(N, alpha, delta, formula)))
    if not levels:
        raise EmptySpectrumError(f"no bound levels for alpha={alpha}, delta={delta}")
    if regime == "relativistic":
        unit = None if hbar_omega is None else hbar_omega / gamma_ratio
    else:
        unit = hbar_omega
    return spectrum_from_levels(levels, regime, gamma_ratio, unit, equation.value)


def molecule_spectrum(record, equation="dirac", regime=None):
    """Spectrum for a stored molecule or preset (tabulated delta when available)."""
    delta = record.delta_ref if record.delta_ref is not None else record.delta
    regime = regime or record.regime
    hw = record.hbar_omega
    return build_spectrum(record.alpha, delta, equation, regime,
                          gamma_ratio=hw / record.mc2, hbar_omega=hw)


# -- ensemble sums ------------------------------------------------------------

def _moments(spectrum, gp):
    gp = np.atleast_1d(np.asarray(gp, dtype=float))
    if np.any(~(gp > 0)):
        raise DomainError("gamma' must be positive", invariant="gamma' > 0")
    d = spectrum.offsets
    w = np.exp(-gp[:, None] * d[None, :])
    z = w.sum(axis=1)
    mean = (w @ d) / z
    # centred second moment avoids cancellation at low temperature
    var = np.einsum("ij,ij->i", w, (d[None, :] - mean[:, None]) ** 2) / z
    # subnormal weights carry no precision and fake tiny peaks
    var[var < np.finfo(float).tiny] = 0.0
    return gp, z, mean, var


def log_partition(spectrum, gamma_prime):
    gp, z, _, _ = _moments(spectrum, gamma_prime)
    out = -gp * spectrum.ground + np.log(z)
    return out[0] if np.ndim(gamma_prime) == 0 else out


def partition(spectrum, gamma_prime):
    """Z = sum exp(-gamma' E) over the kept levels."""
    return np.exp(log_partition(spectrum, gamma_prime))


@dataclass(frozen=True)
class SchottkyPeak:
    index: int
    Tc_K: float
    C_peak: float

    @property
    def Tc_C(self):
        return kelvin_to_celsius(self.Tc_K)

    def as_dict(self):
        return {"index": self.index, "Tc_K": self.Tc_K, "Tc_C": self.Tc_C,
                "C_peak": self.C_peak}


@dataclass(frozen=True)
class ThermoSweep:
    """U, F in units of the spectrum's energy unit; S, C in kB.

    ``control`` is gamma' at each grid point and ``temperature`` is kB T in
    the same energy unit (1/gamma'); ``T`` holds kelvin when known.
    ``excitation`` is U minus the ground energy, kept separately because
    it is far smaller than U at low temperature.
    """

    control: np.ndarray
    U: np.ndarray
    F: np.ndarray
    S: np.ndarray
    C: np.ndarray
    T: np.ndarray | None = None
    spectrum: SpectrumTable | None = field(default=None, repr=False)
    excitation: np.ndarray | None = field(default=None, repr=False)

    @property
    def temperature(self):
        return 1.0 / self.control

    def peaks(self):
        return schottky_peaks(self)


def sweep_control(spectrum, gamma_prime, T=None):
    gp, z, mean, var = _moments(spectrum, gamma_prime)
    U = spectrum.ground + mean
    F = spectrum.ground - np.log(z) / gp
    S = gp * mean + np.log(z)
    C = gp * gp * var
    return ThermoSweep(gp, U, F, S, C, T, spectrum, excitation=mean)


def sweep(spectrum, T_grid):
    """Thermodynamic functions on a kelvin grid (needs the spectrum's energy unit)."""
    T = np.asarray(T_grid, dtype=float)
    if T.ndim != 1 or T.size < 1 or np.any(~(T > 0)):
        raise GridError("temperatures must be positive", invariant="T > 0")
    if T.size > 1 and np.any(np.diff(T) <= 0):
        raise GridError("temperature grid must be ascending",
                        invariant="T ascending")
    if spectrum.energy_unit is None:
        raise DomainError("spectrum has no energy unit; use sweep_control",
                          invariant="energy unit known")
    return sweep_control(spectrum, spectrum.energy_unit / (KB * T), T)


def default_temperature_grid(tmin=1.0, tmax=1e8, points_per_decade=2000):
    if not (0 < tmin < tmax):
        raise GridError("need 0 < tmin < tmax", invariant="0 < tmin < tmax")
    n = int(round(math.log10(tmax / tmin) * points_per_decade)) + 1
    return np.logspace(math.log10(tmin), math.log10(tmax), max(n, 3))


def schottky_peaks(result):
    """Strict interior maxima of C, refined by a parabola through three points.

    The parabola is fitted in log T (log of kB T / unit when kelvin are not
    available), where the sweep grid is uniform.
    """
    C = result.C
    if C.size < 3:
        return []
    temps = result.T if result.T is not None else result.temperature
    x = np.log(temps)
    idx = np.nonzero((C[1:-1] > C[:-2]) & (C[1:-1] > C[2:]))[0] + 1
    peaks = []
    for k, i in enumerate(idx, start=1):
        x0, x1, x2 = x[i - 1:i + 2]
        c0, c1, c2 = C[i - 1:i + 2]
        denom = (x0 - x1) * (x0 - x2) * (x1 - x2)
        a = (x2 * (c1 - c0) + x1 * (c0 - c2) + x0 * (c2 - c1)) / denom
        b = (x2 * x2 * (c0 - c1) + x1 * x1 * (c2 - c0) + x0 * x0 * (c1 - c2)) / denom
        if a < 0:
            xv = -b / (2 * a)
            xv = min(max(xv, x0), x2)
            cv = c1 + a * (xv - x1) ** 2 + (2 * a * x1 + b) * (xv - x1)
        else:
            xv, cv = x1, c1
        peaks.append(SchottkyPeak(k, float(math.exp(xv)), float(cv)))
    return peaks
