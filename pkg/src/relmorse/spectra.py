"""Closed-form one-dimensional spectra.

Covers the quantum Morse oscillator (QMO) obtained from the deformed
momentum, the Klein-Gordon and Dirac oscillators, their one-dimensional
Morse-deformed versions (KGMO/DMO) and the H2-fitted Morse binding
energies.
"""

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np
from scipy import integrate

from .errors import DomainError, LevelOutOfRangeError, UnboundLevelError

SERIES_THRESHOLD = 1e-8


class MorseBranch(str, Enum):
    plain = "plain"
    kg_morse = "kg_morse"
    dirac_morse = "dirac_morse"


@dataclass(frozen=True)
class MorseLevel:
    n: int
    energy: float
    branch: MorseBranch = MorseBranch.plain


def _check_index(n, name="n"):
    if isinstance(n, bool) or int(n) != n or n < 0:
        raise LevelOutOfRangeError(f"{name} must be a non-negative integer, got {n!r}")
    return int(n)


# -- coordinate transform ---------------------------------------------------

def eta_of_x(x, gamma):
    """Map x to eta = ln(1 + gamma x) / gamma (identity as gamma -> 0)."""
    x = np.asarray(x, dtype=float)
    u = gamma * x
    if np.any(1 + u <= 0):
        raise DomainError("1 + gamma*x must be positive",
                          invariant="1 + gamma*x > 0")
    small = np.abs(u) < SERIES_THRESHOLD
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(small, x * (1 - u / 2 + u * u / 3),
                       np.log1p(u) / np.where(gamma == 0, 1.0, gamma))
    return out[()] if out.ndim == 0 else out


def x_of_eta(eta, gamma):
    """Inverse of :func:`eta_of_x`."""
    eta = np.asarray(eta, dtype=float)
    u = gamma * eta
    small = np.abs(u) < SERIES_THRESHOLD
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(small, eta * (1 + u / 2 + u * u / 6),
                       np.expm1(u) / np.where(gamma == 0, 1.0, gamma))
    return out[()] if out.ndim == 0 else out


# -- quantum Morse oscillator ---------------------------------------------

def qmo_nmax(params):
    """Largest n with 2n <= 2 m omega / (gamma^2 hbar) - 1, or -1 if none."""
    k = params.kappa
    if k == 0:
        return math.inf
    return math.floor(1 / k - 0.5 + 1e-12)


def qmo_energy(n, params):
    n = _check_index(n)
    nmax = qmo_nmax(params)
    if n > nmax:
        raise LevelOutOfRangeError(
            f"level n={n} exceeds the Morse bound N_max={nmax}")
    x = n + 0.5
    return params.hbar_omega * x * (1 - 0.5 * params.kappa * x)


def morse_potential(params):
    """V(eta) = m omega^2 / (2 gamma^2) (exp(gamma eta) - 1)^2 in eV."""
    k_spring = params.hbar_omega ** 2 * params.mass / params.hbar_c ** 2
    g = params.gamma

    def V(eta):
        eta = np.asarray(eta, dtype=float)
        w = eta if g == 0 else np.expm1(g * eta) / g
        return 0.5 * k_spring * w * w
    return V


def genlaguerre(n, a, z):
    """Generalized Laguerre polynomial L_n^a(z) by upward three-term recurrence."""
    z = np.asarray(z, dtype=float)
    prev = np.ones_like(z)
    if n == 0:
        return prev
    cur = 1 + a - z
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 + a - z) * cur - (k + a) * prev) / (k + 1)
    return cur


@dataclass(frozen=True)
class MorseWavefunction:
    """Phi_n(eta) = A_n z^s exp(-z/2) L_n^{2s}(z), z = (2/kappa) exp(gamma eta)."""

    n: int
    s: float
    kappa: float
    gamma: float
    log_norm: float

    @property
    def norm(self):
        return math.exp(self.log_norm)

    def z_of_eta(self, eta):
        return (2.0 / self.kappa) * np.exp(self.gamma * np.asarray(eta, dtype=float))

    def _log_envelope(self, z):
        return self.log_norm + self.s * np.log(z) - 0.5 * z

    def __call__(self, eta):
        z = self.z_of_eta(eta)
        return np.exp(self._log_envelope(z)) * genlaguerre(self.n, 2 * self.s, z)

    def derivative(self, eta):
        """d Phi / d eta, analytic."""
        z = self.z_of_eta(eta)
        L = genlaguerre(self.n, 2 * self.s, z)
        dL = -genlaguerre(self.n - 1, 2 * self.s + 1, z) if self.n > 0 else 0.0
        dphi_dz = np.exp(self._log_envelope(z)) * ((self.s / z - 0.5) * L + dL)
        return dphi_dz * self.gamma * z

    def window(self, tol=1e-14):
        """eta interval outside which |Phi|^2 is negligible."""
        # z^(2s) e^-z is below tol of its peak outside [z_lo, z_hi]
        zc = max(2 * self.s + self.n, 1.0)
        z_lo = zc * tol ** (1 / max(2 * self.s, 1e-3))
        z_hi = zc + 10 * math.sqrt(zc) + 80
        etas = sorted(math.log(z * self.kappa / 2) / self.gamma for z in (z_lo, z_hi))
        return etas[0], etas[1]


def _z_integral(n, s):
    """int_0^inf z^(2s-1) e^-z [L_n^{2s}(z)]^2 dz, returned as a log."""
    a = 2 * s
    peak = max(a - 1, 1e-300)
    shift = (a - 1) * math.log(peak) - peak if a > 1 else 0.0

    def f(z):
        if z == 0:
            return 0.0 if a > 1 else (1.0 if a == 1 else math.inf)
        L = genlaguerre(n, a, z)
        return math.exp((a - 1) * math.log(z) - z - shift) * float(L) ** 2

    breaks = [0.0, max(peak, 1.0), max(peak, 1.0) + 20 * math.sqrt(max(peak, 1.0)) + 60]
    total = 0.0
    for lo, hi in zip(breaks[:-1], breaks[1:]):
        total += integrate.quad(f, lo, hi, epsabs=0, epsrel=1e-13, limit=400)[0]
    total += integrate.quad(f, breaks[-1], math.inf, epsabs=0, epsrel=1e-13,
                            limit=400)[0]
    return shift + math.log(total)


def qmo_wavefunction(n, params):
    n = _check_index(n)
    if params.gamma == 0:
        raise DomainError("Morse eigenfunctions need gamma != 0",
                          invariant="gamma != 0")
    k = params.kappa
    s = 1 / k - n - 0.5
    if not s > 0:
        raise DomainError(f"s = {s!r} must be positive (level n={n} unbound)",
                          invariant="s > 0")
    # int |Phi|^2 d eta = A^2 / |gamma| * int z^(2s-1) e^-z L^2 dz
    log_norm = 0.5 * (math.log(abs(params.gamma)) - _z_integral(n, s))
    return MorseWavefunction(n=n, s=s, kappa=k, gamma=params.gamma,
                             log_norm=log_norm)


# -- relativistic oscillators ---------------------------------------------

def kg_oscillator_energy(N, hbar_omega):
    """Reduced energy (E^2 - m^2 c^4) / (2 m c^2) = N hbar omega."""
    N = _check_index(N, "N")
    return N * hbar_omega


def relativistic_energy(reduced, mc2):
    """Full energy E = m c^2 sqrt(1 + 2 reduced / m c^2) (positive root)."""
    arg = 1 + 2 * np.asarray(reduced, dtype=float) / mc2
    if np.any(arg < 0):
        raise DomainError("1 + 2*reduced/mc2 must be non-negative",
                          invariant="E^2 >= 0")
    out = mc2 * np.sqrt(arg)
    return out[()] if out.ndim == 0 else out


def _half_integer(j):
    j = Fraction(j).limit_denominator(4)
    if j.denominator != 2 or j < Fraction(1, 2):
        raise DomainError(f"j must be a positive half-integer, got {j}",
                          invariant="j >= 1/2, 2j odd")
    return j


def dirac_oscillator_energy(N, l, j, hbar_omega, mc2):
    """Positive root E of E^2 - m^2c^4 = hbar omega [2(N+1-j) -+ 1] m c^2.

    The upper sign belongs to l = j - 1/2, the lower one to l = j + 1/2.
    """
    N = _check_index(N, "N")
    j = _half_integer(j)
    if l == j - Fraction(1, 2):
        sign = -1
    elif l == j + Fraction(1, 2):
        sign = 1
    else:
        raise DomainError(f"inconsistent pair l={l}, j={j}: need l = j -+ 1/2",
                          invariant="l = j -+ 1/2")
    e2 = mc2 ** 2 + hbar_omega * float(2 * (N + 1 - j) + sign) * mc2
    if e2 < 0:
        raise DomainError("E^2 < 0 for this (N, l, j)", invariant="E^2 >= 0")
    return math.sqrt(e2)


def modified_frequency(params):
    """Return (hbar omega_tilde, eta_0) of the 1D KG/Dirac Morse oscillator."""
    half_k = 0.5 * params.kappa
    hw_t = params.hbar_omega * (1 + half_k)
    # log1p keeps ln(w~/w)/gamma accurate down to gamma -> 0
    eta0 = 0.0 if params.gamma == 0 else math.log1p(half_k) / params.gamma
    return hw_t, eta0


def kgmo_nmax(params):
    hw_t, _ = modified_frequency(params)
    k_t = params.kappa * params.hbar_omega / hw_t
    if k_t == 0:
        return math.inf
    return math.floor(1 / k_t - 0.5 + 1e-12)


def kgmo_energy_1d(N, params, convention="literal"):
    """Reduced energy of the 1D Klein-Gordon (and Dirac) Morse oscillator.

    ``convention="literal"`` evaluates
        hbar w~ (N+1/2)[1 - gamma^2 hbar/(2 m w~) (N+1/2)] + hbar w~ / 2
    literally. ``convention="exact"`` returns the eigenvalue of the
    eta-space operator the 1D oscillator actually maps to: the same Morse
    ladder minus (hbar omega / 2)(1 + gamma^2 hbar / (4 m omega)); it
    reduces to N hbar omega as gamma -> 0.
    """
    N = _check_index(N, "N")
    nmax = kgmo_nmax(params)
    if N > nmax:
        raise LevelOutOfRangeError(f"level N={N} exceeds the KGMO bound {nmax}")
    hw_t, _ = modified_frequency(params)
    k_t = params.kappa * params.hbar_omega / hw_t
    x = N + 0.5
    ladder = hw_t * x * (1 - 0.5 * k_t * x)
    if convention == "literal":
        return ladder + 0.5 * hw_t
    if convention == "exact":
        return ladder - 0.5 * params.hbar_omega * (1 + 0.25 * params.kappa)
    raise ValueError(f"unknown convention {convention!r}")


# One dimension carries no spin-orbit term: the Dirac spectrum coincides.
dmo_energy_1d = kgmo_energy_1d


def kgmo_potential(params):
    """Potential of the eta-space KG Morse operator, before the origin shift.

    V(eta) = m w^2/(2 g^2) (e^{g eta} - 1)^2 - (hbar w / 2) e^{g eta}
    """
    morse = morse_potential(params)
    g = params.gamma

    def V(eta):
        eta = np.asarray(eta, dtype=float)
        return morse(eta) - 0.5 * params.hbar_omega * np.exp(g * eta)
    return V


# -- H2 fit -----------------------------------------------------------------

def morse_big_lambda(mol, E0=None):
    """Lambda = r_e sqrt(2 m De) / (alpha hbar) = sqrt(2 De / E0) / alpha."""
    E0 = mol.E0 if E0 is None else E0
    return math.sqrt(2 * mol.De / E0) / mol.alpha


def morse_lambda(N, mol, E0=None):
    """Binding energy -lambda_N = (alpha^2 E0 / 2)(Lambda - 1/2 - N)^2 in eV.

    ``E0`` overrides hbar^2/(m r_e^2) computed from the record.
    """
    N = _check_index(N, "N")
    E0 = mol.E0 if E0 is None else E0
    gap = morse_big_lambda(mol, E0) - 0.5 - N
    if gap <= 0:
        raise UnboundLevelError(f"level N={N} is unbound for {mol.name} "
                                f"(Lambda - 1/2 - N = {gap:.6g})")
    return 0.5 * mol.alpha ** 2 * E0 * gap ** 2


def morse_levels(mol, E0=None):
    out = []
    N = 0
    while morse_big_lambda(mol, E0) - 0.5 - N > 0:
        out.append(MorseLevel(N, morse_lambda(N, mol, E0)))
        N += 1
    return out
