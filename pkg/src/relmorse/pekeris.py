"""Pekeris reduction of the 3D radial Klein-Gordon/Dirac Morse problem.

Two layers live here:

* the classical expansion of r_e/r and (r_e/r)^2 in y = exp(gamma (r - r_e))
  and the effective Morse well it produces (``effective_morse``), together
  with the recast closed-form energies and level count used for
  thermodynamics (``pekeris_energy``, ``nmax``);
* the generalized mapping for an arbitrary invertible coupling U(r)
  (``generalized_coeffs``, ``pekeris_map``), which reduces the radial
  equation to a 1D problem quadratic in U.

The radial operator being approximated is

    V(r) = (m w^2 / 2) U^2 - (hbar w / 2) U' - (1 + f) hbar w U / r
           + hbar^2 l (l + 1) / (2 m r^2)

with f = f(j, l) the spin/angular channel factor.
"""

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np

from .couplings import CouplingSpec
from .errors import (ChannelError, DegenerateChannelError, DomainError,
                     LevelOutOfRangeError, SingularExpansionError)
from .units import dimensionless

CONVENTIONS = ("reference", "derived")


class Equation(str, Enum):
    kg = "kg"
    dirac = "dirac"


class Branch(str, Enum):
    plus = "plus"
    minus = "minus"


def _sign(branch):
    return 1 if Branch(branch) is Branch.plus else -1


@dataclass(frozen=True)
class SpinAngularChannel:
    """Wave equation, orbital number l and the j = l +- 1/2 label.

    Klein-Gordon carries no spin, so both labels give f = 0.  For Dirac
    with l = 0 the minus label is kept as the formal value f = -2, which
    is what the recast energy's lower sign corresponds to.
    """

    equation: Equation = Equation.kg
    l: int = 0
    j_branch: Branch = Branch.plus

    def __post_init__(self):
        object.__setattr__(self, "equation", Equation(self.equation))
        object.__setattr__(self, "j_branch", Branch(self.j_branch))
        if isinstance(self.l, bool) or int(self.l) != self.l or self.l < 0:
            raise ChannelError(f"l must be a non-negative integer, got {self.l!r}",
                               invariant="l >= 0")
        object.__setattr__(self, "l", int(self.l))

    @property
    def j(self):
        if self.equation is Equation.kg:
            return None
        return self.l + Fraction(_sign(self.j_branch), 2)

    @property
    def f(self):
        if self.equation is Equation.kg:
            return 0
        # 2[j(j+1) - l(l+1) - 3/4] evaluated for j = l +- 1/2
        return 2 * self.l if self.j_branch is Branch.plus else -2 * (self.l + 1)

    @property
    def L(self):
        return self.l * (self.l + 1)


# -- classical Pekeris expansion ------------------------------------------

@dataclass(frozen=True)
class PekerisExpansion:
    """r_e/r ~ h0 + a1 t + a2 t^2 and (r_e/r)^2 ~ k0 + b1 t + b2 t^2, t = y - 1."""

    a1: float
    a2: float
    b1: float
    b2: float
    h0: float = 1.0
    k0: float = 1.0

    def inverse(self, y):
        t = np.asarray(y, dtype=float) - 1
        return self.h0 + t * (self.a1 + t * self.a2)

    def inverse_square(self, y):
        t = np.asarray(y, dtype=float) - 1
        return self.k0 + t * (self.b1 + t * self.b2)


def classic_expansion(alpha):
    """Second-order expansion of r_e/r, (r_e/r)^2 in y = exp(-alpha (r/r_e - 1))."""
    if not alpha > 0:
        raise DomainError("alpha must be positive", invariant="alpha > 0")
    g = -float(alpha)
    return PekerisExpansion(a1=-1 / g, a2=(2 + g) / (2 * g * g),
                            b1=-2 / g, b2=(3 + g) / (g * g))


def generalized_coeffs(coupling: CouplingSpec):
    """Expansion coefficients for y = gamma U(r) + 1 around y = 1.

    Includes the constant terms h0 = g/(g + f(1)) and k0 = h0^2 with
    g = gamma r_e, which equal 1 whenever f(1) = 0.
    """
    f0, f1, f2 = coupling.f_derivatives()
    g = coupling.gamma * coupling.r_e
    G = g + f0
    if G == 0 or abs(G) < 1e-14 * max(1.0, abs(g)):
        raise SingularExpansionError(
            "gamma*r_e + f(1) = 0: r_e/r diverges at the expansion point")
    a1 = -g * f1 / G ** 2
    a2 = -g * (g * f2 + f0 * f2 - 2 * f1 ** 2) / (2 * G ** 3)
    b1 = -2 * g * g * f1 / G ** 3
    b2 = -g * g * (g * f2 + f0 * f2 - 3 * f1 ** 2) / G ** 4
    h0 = g / G
    return PekerisExpansion(a1, a2, b1, b2, h0, h0 * h0)


# -- effective Morse reduction ----------------------------------------------

def channel_constants(alpha, delta, channel, convention="reference",
                      linearized=False):
    """Dimensionless (A, B, C) with V / D = A (y-1)^2 + B (y-1) + C.

    ``convention="reference"`` uses the standard closed forms, linear in
    delta.  ``convention="derived"`` follows from the classical expansion
    substituted into the radial operator (D = m w^2 / 2 gamma^2); with
    ``linearized=True`` its O(delta^2) terms are dropped.
    """
    if not (alpha > 0 and delta > 0):
        raise DomainError("alpha and delta must be positive",
                          invariant="alpha > 0, delta > 0")
    f, L = channel.f, channel.L
    if convention == "reference":
        A = 1 + delta * (2 * (1 + f) + L * (3 - alpha))
        B = -delta * (1 - 2 * (1 + f) / alpha - 2 * L / alpha)
        C = delta * (L - 1)
        return A, B, C
    if convention != "derived":
        raise ValueError(f"unknown convention {convention!r}")
    d2 = 0.0 if linearized else delta * delta
    A = 1 + 2 * delta * (1 + f) + d2 * L * (3 - alpha)
    B = -alpha ** 2 * delta + 2 * alpha * delta * (1 + f) + 2 * alpha * d2 * L
    C = alpha ** 2 * (d2 * L - delta)
    return A, B, C


@dataclass(frozen=True)
class EffectiveMorse:
    """Morse well D'(exp(gamma (r - r_eff)) - 1)^2 + U0 with D' = m Omega^2 / 2 gamma^2.

    Omega is stored as the quantum hbar*Omega in eV.
    """

    Omega: float
    r_eff: float
    U0: float
    A: float
    B: float
    C: float
    gamma: float
    mass: float
    hbar_c: float
    hbar_omega: float
    convention: str = "reference"

    @property
    def depth(self):
        return self.mass * self.Omega ** 2 / (2 * self.gamma ** 2 * self.hbar_c ** 2)

    @property
    def kappa(self):
        return self.gamma ** 2 * self.hbar_c ** 2 / (self.mass * self.Omega)

    @property
    def rho(self):
        return 1 - self.B / (2 * self.A)

    def nmax(self):
        return math.floor(1 / self.kappa - 0.5 + 1e-12)

    def energy(self, N):
        if isinstance(N, bool) or int(N) != N or N < 0:
            raise LevelOutOfRangeError(f"N must be a non-negative integer, got {N!r}")
        if N > self.nmax():
            raise LevelOutOfRangeError(
                f"level N={N} exceeds the effective Morse bound {self.nmax()}")
        x = N + 0.5
        return self.Omega * x * (1 - 0.5 * self.kappa * x) + self.U0

    def energies(self):
        return np.array([self.energy(N) for N in range(self.nmax() + 1)])

    def potential(self):
        D, g, r0, U0 = self.depth, self.gamma, self.r_eff, self.U0

        def V(r):
            w = np.expm1(g * (np.asarray(r, dtype=float) - r0))
            return D * w * w + U0
        return V


def effective_morse(params, channel, convention="reference", linearized=False):
    alpha, delta = dimensionless(params)
    A, B, C = channel_constants(alpha, delta, channel, convention, linearized)
    rho = 1 - B / (2 * A)
    if not (A > 0 and rho > 0):
        raise DegenerateChannelError(
            f"1 - B/2A = {rho:.6g} (A = {A:.6g}) leaves no Morse well for "
            f"channel {channel}")
    hw = params.hbar_omega * math.sqrt(A) * rho
    r_eff = params.r_e + math.log(rho) / params.gamma
    # the reference U0 scales with Omega^2, the derivation with omega^2
    scale = hw if convention == "reference" else params.hbar_omega
    D = params.mass * scale ** 2 / (2 * params.gamma ** 2 * params.hbar_c ** 2)
    U0 = D * (C - B * B / (4 * A))
    return EffectiveMorse(hw, r_eff, U0, A, B, C, params.gamma, params.mass,
                          params.hbar_c, params.hbar_omega, convention)


# -- recast closed-form energies ------------------------------------------

def _ladder_root(alpha, delta, branch):
    arg = 1 + delta * (3 + _sign(branch) * 2 * (1 + alpha) / alpha)
    return math.sqrt(arg) if arg > 0 else None


def nmax(alpha, delta, branch="plus"):
    """Highest bound index of the recast spectrum, or -1 when there is none."""
    if not (alpha > 0 and delta > 0):
        raise DomainError("alpha and delta must be positive",
                          invariant="alpha > 0, delta > 0")
    s = _ladder_root(alpha, delta, branch)
    if s is None:
        return -1
    return max(math.floor(s / (delta * alpha ** 2) - 0.5 + 1e-12), -1)


def pekeris_energy(N, alpha, delta, branch="plus"):
    """Dimensionless reduced energy (in units of hbar*omega) of level N."""
    if isinstance(N, bool) or int(N) != N or N < 0:
        raise LevelOutOfRangeError(f"N must be a non-negative integer, got {N!r}")
    top = nmax(alpha, delta, branch)
    if N > top:
        raise LevelOutOfRangeError(
            f"level N={N} exceeds N_max={top} for the {Branch(branch).value} branch")
    s = _ladder_root(alpha, delta, branch)
    x = N + 0.5
    return s * x * (1 - alpha ** 2 * delta / (2 * s) * x) - 1 / (2 * alpha ** 2)


def pekeris_ladder(alpha, delta, branch="plus"):
    """All bound recast energies N = 0..N_max as an array."""
    return np.array([pekeris_energy(N, alpha, delta, branch)
                     for N in range(nmax(alpha, delta, branch) + 1)])


# -- generalized mapping ------------------------------------------------------

@dataclass(frozen=True)
class MappedProblem:
    """1D problem A1 g^2 (U + A2/(2 g A1))^2 + A3 - A2^2/(4 A1) - (hbar w/2) U'.

    Energies are in eV and lengths in Angstrom (or whatever ``hbar_c`` and
    ``mass`` imply).  ``a2`` is zero when the mapping was built with the
    cubic term suppressed.
    """

    A1: float
    A2: float
    A3: float
    expansion: PekerisExpansion
    coupling: CouplingSpec
    hbar_omega: float
    mass: float
    hbar_c: float
    channel: SpinAngularChannel

    @property
    def a1(self):
        return self.expansion.a1

    @property
    def a2(self):
        return self.expansion.a2

    @property
    def b1(self):
        return self.expansion.b1

    @property
    def b2(self):
        return self.expansion.b2

    @property
    def h0(self):
        return self.expansion.h0

    @property
    def spring(self):
        """m omega^2 in eV / Angstrom^2."""
        return self.hbar_omega ** 2 * self.mass / self.hbar_c ** 2

    def effective_potential(self, r):
        g = self.coupling.gamma
        U = self.coupling.U(r)
        shifted = U + self.A2 / (2 * g * self.A1)
        return (self.A1 * g * g * shifted ** 2 + self.A3 - self.A2 ** 2 / (4 * self.A1)
                - 0.5 * self.hbar_omega * self.coupling.dU(r))

    def quadratic_coefficients(self):
        """(q2, q1, q0) of the mapped potential written as q2 U^2 + q1 U + q0 - (hbar w/2) U'."""
        g = self.coupling.gamma
        return self.A1 * g * g, self.A2 * g, self.A3

    def expanded_potential(self, r):
        """Second-order expanded radial operator, including the cubic a2 term."""
        g, re = self.coupling.gamma, self.coupling.r_e
        U = self.coupling.U(r)
        cubic = -(1 + self.channel.f) * self.hbar_omega / re * self.a2 * g * g * U ** 3
        return self.effective_potential(r) + cubic

    def radial_potential(self, r):
        """The unexpanded radial operator the mapping approximates."""
        r = np.asarray(r, dtype=float)
        U = self.coupling.U(r)
        cent = self.hbar_c ** 2 * self.channel.L / (2 * self.mass * r * r)
        return (0.5 * self.spring * U * U - 0.5 * self.hbar_omega * self.coupling.dU(r)
                - (1 + self.channel.f) * self.hbar_omega * U / r + cent)


def pekeris_map(coupling, params, channel, a2_zero=False):
    """Map the radial problem with coupling ``coupling`` to a 1D problem in U.

    Mass, hbar*omega and hbar*c come from ``params``; gamma and r_e from the
    coupling.
    """
    exp = generalized_coeffs(coupling)
    if a2_zero:
        exp = PekerisExpansion(exp.a1, 0.0, exp.b1, exp.b2, exp.h0, exp.k0)
    g, re = coupling.gamma, coupling.r_e
    hw, f = params.hbar_omega, channel.f
    spring = hw ** 2 * params.mass / params.hbar_c ** 2
    cent = params.hbar_c ** 2 * channel.L / (2 * params.mass * re * re)
    A1 = spring / (2 * g * g) - (1 + f) * hw * exp.a1 / (g * re) + cent * exp.b2
    A2 = -(1 + f) * hw * exp.h0 / (g * re) + cent * exp.b1
    A3 = cent * exp.k0
    if A1 == 0:
        raise SingularExpansionError("A1 = 0: the mapped problem is not quadratic",
                                     invariant="A1 != 0")
    return MappedProblem(A1, A2, A3, exp, coupling, hw, params.mass,
                         params.hbar_c, channel)
