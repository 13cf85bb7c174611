"""Finite-difference eigensolver used to check every closed-form spectrum.

The 1D Hamiltonian -(hbar^2/2m) d^2/dx^2 + V(x) is discretised with
second-order central differences on a Dirichlet box and diagonalised as a
symmetric tridiagonal matrix.
"""

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import BoundaryLeakError, GridError
from .units import HBAR_C

MIN_POINTS = 201
DECAY_TOL = 1e-8
EDGE_NODES = 3


@dataclass(frozen=True)
class GridProblem:
    """A 1D eigenproblem on ``n_points`` equally spaced nodes (ends are Dirichlet)."""

    domain: tuple
    n_points: int
    potential: Callable
    mass: float  # m c^2 in eV
    hbar_c: float = HBAR_C

    def __post_init__(self):
        lo, hi = self.domain
        if not hi > lo:
            raise GridError("domain must satisfy eta_min < eta_max")
        if self.n_points < MIN_POINTS:
            raise GridError(f"n_points must be >= {MIN_POINTS}",
                            invariant="n_points >= 201")
        if not self.mass > 0:
            raise GridError("mass must be positive")

    @property
    def step(self):
        lo, hi = self.domain
        return (hi - lo) / (self.n_points - 1)

    def nodes(self):
        lo, hi = self.domain
        return np.linspace(lo, hi, self.n_points)

    def refined(self):
        """Same problem with the grid step halved."""
        return GridProblem(self.domain, 2 * self.n_points - 1, self.potential,
                           self.mass, self.hbar_c)


def morse_box(r_e, gamma, hard=8.0, soft=20.0, radial=False):
    """Default box around a Morse well: `hard` widths on the steep side."""
    width = 1.0 / abs(gamma)
    if gamma < 0:
        lo, hi = r_e - hard * width, r_e + soft * width
    else:
        lo, hi = r_e - soft * width, r_e + hard * width
    if radial:
        lo = max(lo, 1e-6 * width)
    return lo, hi


def eigensolve(problem, count):
    """Lowest ``count`` eigenpairs as a list of (energy, eigenfunction on all nodes)."""
    if count < 1 or count > problem.n_points // 10:
        raise GridError(f"count={count} must be between 1 and n_points/10",
                        invariant="count <= n_points/10")
    x = problem.nodes()
    interior = x[1:-1]
    V = np.asarray(problem.potential(interior), dtype=float)
    if V.shape != interior.shape:
        V = np.broadcast_to(V, interior.shape).astype(float)
    bad = ~np.isfinite(V)
    if bad.any():
        raise GridError(f"potential is not finite at x={interior[bad][0]!r}",
                        invariant="potential finite on all grid nodes")
    h = problem.step
    t = problem.hbar_c ** 2 / (2 * problem.mass * h * h)
    diag = 2 * t + V
    off = np.full(interior.size - 1, -t)
    w, v = eigh_tridiagonal(diag, off, select="i", select_range=(0, count - 1))
    out = []
    for k in range(count):
        psi = np.zeros_like(x)
        psi[1:-1] = v[:, k] / math.sqrt(h)
        # sign convention: positive on the left lobe
        first = psi[np.argmax(np.abs(psi) > 1e-3 * np.abs(psi).max())]
        if first < 0:
            psi = -psi
        peak = np.abs(psi).max()
        edge = max(np.abs(psi[1:1 + EDGE_NODES]).max(),
                   np.abs(psi[-1 - EDGE_NODES:-1]).max())
        if edge > DECAY_TOL * peak:
            raise BoundaryLeakError(
                f"eigenfunction {k} has relative amplitude {edge / peak:.2e} at "
                f"the box edge; widen the domain {problem.domain}")
        out.append((float(w[k]), psi))
    return out


def eigenvalues(problem, count):
    return np.array([e for e, _ in eigensolve(problem, count)])


def count_nodes(psi, rel_tol=1e-6):
    """Interior sign changes, ignoring the numerically zero tails."""
    significant = psi[np.abs(psi) > rel_tol * np.abs(psi).max()]
    return int(np.count_nonzero(np.diff(np.sign(significant)) != 0))


@dataclass(frozen=True)
class RichardsonResult:
    values: np.ndarray
    errors: np.ndarray
    coarse: np.ndarray
    fine: np.ndarray
    converged: bool


def richardson_refine(problem, count, tol=None):
    """Solve at h and h/2 and extrapolate the O(h^2) error away."""
    coarse = eigenvalues(problem, count)
    fine = eigenvalues(problem.refined(), count)
    values = (4 * fine - coarse) / 3
    errors = np.abs(coarse - fine) / 3
    converged = True if tol is None else bool(np.all(errors <= tol))
    return RichardsonResult(values, errors, coarse, fine, converged)


def taylor_oracle(func, x0, h=1e-3):
    """Value, first derivative and half the second derivative of ``func`` at x0.

    Central differences at steps h and h/2, Richardson-combined to O(h^4).
    """
    def d1(s):
        return (func(x0 + s) - func(x0 - s)) / (2 * s)

    def d2(s):
        return (func(x0 + s) - 2 * func(x0) + func(x0 - s)) / (s * s)

    first = (4 * d1(h / 2) - d1(h)) / 3
    second = (4 * d2(h / 2) - d2(h)) / 3
    return func(x0), first, second / 2
