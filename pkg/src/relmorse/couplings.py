"""Invertible spherical couplings U(r) and their Pekeris expansion function.

Given U, the expansion variable is y = gamma U(r) + 1 and
f(x) = gamma U^{-1}((x - 1)/gamma) - gamma r_e, so that r = (f(y) + gamma r_e)/gamma.
Derivatives of f follow from those of U at the matching point
r* = U^{-1}((x - 1)/gamma):

    f'(x)  = 1 / U'(r*)
    f''(x) = -U''(r*) / (gamma U'(r*)^3)
"""

import csv
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq

from .errors import InvalidCouplingError

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class CouplingSpec:
    U: Callable
    dU: Callable
    d2U: Callable
    U_inv: Callable
    gamma: float
    r_e: float
    kind: str = "custom"
    parameters: dict = field(default_factory=dict)
    domain: tuple = (0.0, math.inf)
    # exact (a2, a1, a0) of dU/dr = a2 U^2 + a1 U + a0 when U obeys one
    riccati: tuple | None = None

    def __post_init__(self):
        if self.gamma == 0:
            raise InvalidCouplingError("gamma must be non-zero")

    def f(self, x):
        x = np.asarray(x, dtype=float)
        return self.gamma * self.U_inv((x - 1) / self.gamma) - self.gamma * self.r_e

    def f_inv(self, x):
        return self.gamma * self.U(np.asarray(x, dtype=float) / self.gamma + self.r_e) + 1

    def expansion_point(self):
        """Radius where y = 1, i.e. U(r*) = 0."""
        return float(self.U_inv(0.0))

    def f_derivatives(self):
        """(f(1), f'(1), f''(1)), exact given analytic U, U', U''."""
        r0 = self.expansion_point()
        d1 = float(self.dU(r0))
        d2 = float(self.d2U(r0))
        if d1 == 0:
            raise InvalidCouplingError("U'(r*) = 0: U is not invertible at y = 1")
        return (self.gamma * (r0 - self.r_e), 1.0 / d1,
                -d2 / (self.gamma * d1 ** 3))


def morse_coupling(gamma, r_e):
    """U(r) = (exp(gamma (r - r_e)) - 1) / gamma."""
    g = float(gamma)

    def U(r):
        return np.expm1(g * (np.asarray(r, dtype=float) - r_e)) / g

    def dU(r):
        return np.exp(g * (np.asarray(r, dtype=float) - r_e))

    def d2U(r):
        return g * np.exp(g * (np.asarray(r, dtype=float) - r_e))

    def U_inv(u):
        u = np.asarray(u, dtype=float)
        if np.any(1 + g * u <= 0):
            raise InvalidCouplingError("1 + gamma*u must be positive for the "
                                       "Morse inverse")
        return r_e + np.log1p(g * u) / g

    return CouplingSpec(U, dU, d2U, U_inv, g, r_e, "morse",
                        {"gamma": g, "r_e": r_e}, (-math.inf, math.inf),
                        riccati=(0.0, g, 1.0))


def lennard_jones_1269(r_e):
    """Coupling U = (1/g)[(g r)^-6 - sqrt(2) (g r)^-3] with g = 1/r_e.

    Its square reproduces the 12-6-9 well.  The inverse takes the branch
    r <= 2^(1/6) r_e, where U is monotone.
    """
    g = 1.0 / r_e

    def U(r):
        t = (g * np.asarray(r, dtype=float)) ** -3
        return (t * t - SQRT2 * t) / g

    def dU(r):
        q = g * np.asarray(r, dtype=float)
        return -6 * q ** -7 + 3 * SQRT2 * q ** -4

    def d2U(r):
        q = g * np.asarray(r, dtype=float)
        return g * (42 * q ** -8 - 12 * SQRT2 * q ** -5)

    def U_inv(u):
        w = 2 + 4 * g * np.asarray(u, dtype=float)
        if np.any(w < 0):
            raise InvalidCouplingError("LJ inverse needs gamma*U >= -1/2")
        return (2 / (SQRT2 + np.sqrt(w))) ** (1 / 3) / g

    return CouplingSpec(U, dU, d2U, U_inv, g, r_e, "lennard_jones_1269",
                        {"r_e": r_e}, (0.0, 2 ** (1 / 6) * r_e))


def lj_f_closed_form(x):
    """f(x) = (2 / (sqrt2 + sqrt(2 + 4(x - 1))))^(1/3) - 1 for the 12-6-9 coupling."""
    x = np.asarray(x, dtype=float)
    return (2 / (SQRT2 + np.sqrt(2 + 4 * (x - 1)))) ** (1 / 3) - 1


def homographic(a, b, c, d, r_e):
    """U(r) = (1/g)(a g r + b)/(c g r + d) with g = 1/r_e (Mobius map)."""
    det = a * d - b * c
    if det == 0:
        raise InvalidCouplingError("homographic coupling needs ad - bc != 0")
    g = 1.0 / r_e

    def U(r):
        q = g * np.asarray(r, dtype=float)
        return (a * q + b) / (c * q + d) / g

    def dU(r):
        q = g * np.asarray(r, dtype=float)
        return det / (c * q + d) ** 2

    def d2U(r):
        q = g * np.asarray(r, dtype=float)
        return -2 * c * g * det / (c * q + d) ** 3

    def U_inv(u):
        v = g * np.asarray(u, dtype=float)
        return (b - d * v) / (c * v - a) / g

    if c != 0:
        pole = -d / (c * g)
        domain = (pole, math.inf) if pole < r_e else (-math.inf, pole)
    else:
        domain = (-math.inf, math.inf)
    # c g r + d = -det / (c g U - a), so U' = (c g U - a)^2 / det
    closure = (c * c * g * g / det, -2 * a * c * g / det, a * a / det)
    return CouplingSpec(U, dU, d2U, U_inv, g, r_e, "homographic",
                        {"a": a, "b": b, "c": c, "d": d, "r_e": r_e}, domain,
                        riccati=closure)


def builtin_coupling(kind, **parameters):
    """Factory for the shipped couplings: ``morse``, ``lennard_jones_1269``, ``homographic``."""
    if kind == "morse":
        return morse_coupling(parameters["gamma"], parameters["r_e"])
    if kind in ("lennard_jones_1269", "lj1269"):
        return lennard_jones_1269(parameters["r_e"])
    if kind == "homographic":
        return homographic(parameters["a"], parameters["b"], parameters["c"],
                           parameters["d"], parameters["r_e"])
    raise InvalidCouplingError(f"unknown coupling kind {kind!r}")


def tabulated_coupling(path, gamma, r_e):
    """Coupling from a two-column CSV (r, U(r)); cubic spline, inverted by bracketing.

    Lines starting with '#' and a non-numeric header row are skipped.  U must
    be strictly monotone over the table.
    """
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.reader(fh):
            if not row or row[0].lstrip().startswith("#"):
                continue
            try:
                rows.append((float(row[0]), float(row[1])))
            except (ValueError, IndexError):
                if rows:
                    raise InvalidCouplingError(f"malformed row {row!r} in {path}")
    if len(rows) < 4:
        raise InvalidCouplingError("tabulated coupling needs at least 4 rows")
    r, u = np.array(sorted(rows)).T
    du = np.diff(u)
    if not (np.all(du > 0) or np.all(du < 0)):
        raise InvalidCouplingError("tabulated U(r) must be strictly monotone")
    spline = CubicSpline(r, u)
    d1 = spline.derivative(1)
    d2 = spline.derivative(2)
    lo, hi = r[0], r[-1]

    def U_inv(value):
        def one(v):
            return brentq(lambda x: spline(x) - v, lo, hi, xtol=1e-14,
                          rtol=4 * np.finfo(float).eps)
        value = np.asarray(value, dtype=float)
        if value.ndim == 0:
            return one(float(value))
        return np.array([one(v) for v in value.ravel()]).reshape(value.shape)

    return CouplingSpec(spline, d1, d2, U_inv, gamma, r_e, "tabulated",
                        {"path": str(path)}, (lo, hi))
