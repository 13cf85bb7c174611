"""Couplings closed under the Pekeris mapping: dU/dr = a2 U^2 + a1 U + a0.

For such couplings the mapped potential is exactly quadratic in U and the
1D problem factorizes as a free particle with a non-minimal coupling.
"""

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import ClosureError, DomainError, SingularityError
from .pekeris import EffectiveMorse, MappedProblem

POLE_TOL = 1e-9
CLOSURE_TOL = 1e-8


class Family(str, Enum):
    affine = "affine"
    exponential = "exponential"
    trigonometric = "trigonometric"
    rational = "rational"
    hyperbolic = "hyperbolic"


@dataclass(frozen=True)
class RiccatiSpec:
    """Coefficients of dU/dr = a2 U^2 + a1 U + a0 and the integration constant K.

    ``sheet`` selects between the two real solution sheets of the
    negative-discriminant case: +1 is the coth-like sheet (poles), -1 the
    tanh-like sheet (bounded between the two fixed points).
    """

    a2: float
    a1: float
    a0: float
    K: float = 0.0
    sheet: int = 1

    def __post_init__(self):
        for name in ("a2", "a1", "a0", "K"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite", invariant="real coefficients")
        if self.sheet not in (1, -1):
            raise DomainError("sheet must be +1 or -1")

    @property
    def discriminant(self):
        return 4 * self.a0 * self.a2 - self.a1 ** 2

    @property
    def family(self):
        if self.a2 == 0:
            return Family.affine if self.a1 == 0 else Family.exponential
        d = self.discriminant
        if d > 0:
            return Family.trigonometric
        if d == 0:
            return Family.rational
        return Family.hyperbolic

    def rhs(self, U):
        return (self.a2 * U + self.a1) * U + self.a0


@dataclass(frozen=True)
class RiccatiSolution:
    spec: RiccatiSpec
    family: Family
    formula: str
    _eval: object = field(repr=False)
    _poles: object = field(repr=False)

    def poles(self, lo, hi):
        """Singular abscissae in [lo, hi], ascending."""
        return self._poles(lo, hi)

    def _nearest_pole(self, r):
        r = np.atleast_1d(np.asarray(r, dtype=float))
        if r.size == 0:
            return None
        width = max(1.0, float(np.max(np.abs(r))))
        for p in self.poles(float(r.min()) - 1e-6 * width, float(r.max()) + 1e-6 * width):
            if np.any(np.abs(r - p) <= POLE_TOL * max(1.0, abs(p))):
                return p
        return None

    def __call__(self, r):
        p = self._nearest_pole(r)
        if p is not None:
            raise SingularityError(f"U is singular at r = {p!r}", abscissa=p)
        out = np.asarray(self._eval(np.asarray(r, dtype=float)), dtype=float)
        return out[()] if out.ndim == 0 else out

    def derivative(self, r):
        return self.spec.rhs(self(r))


def _no_poles(lo, hi):
    return []


def solve_riccati(spec: RiccatiSpec):
    """Closed-form solution of the constant-coefficient Riccati equation.

    K enters as the literal integration constant of each branch:

    * affine       U = a0 r + K
    * exponential  U = K exp(a1 r) - a0 / a1
    * trigonometric U = (sqrt(D) tan(sqrt(D)(r + K)/2) - a1) / (2 a2)
    * rational     U = -a1/(2 a2) + 1/(-a2 r - K)
    * hyperbolic   U = (u1 - u2 rho)/(1 - rho), rho = sheet * exp(K + sgn(a2) q r)

    with D = 4 a0 a2 - a1^2, q = sqrt(-D) and u1, u2 the fixed points.
    """
    a2, a1, a0, K = spec.a2, spec.a1, spec.a0, spec.K
    fam = spec.family

    if fam is Family.affine:
        return RiccatiSolution(spec, fam, "a0*r + K",
                               lambda r: a0 * r + K, _no_poles)

    if fam is Family.exponential:
        return RiccatiSolution(spec, fam, "K*exp(a1*r) - a0/a1",
                               lambda r: K * np.exp(a1 * r) - a0 / a1, _no_poles)

    if fam is Family.trigonometric:
        sq = math.sqrt(spec.discriminant)

        def ev(r):
            return (sq * np.tan(0.5 * sq * (r + K)) - a1) / (2 * a2)

        def poles(lo, hi):
            # sqrt(D)(r + K)/2 = pi/2 + k pi
            first = math.ceil(((lo + K) * sq / math.pi - 1) / 2)
            out = []
            k = first
            while True:
                p = (math.pi + 2 * k * math.pi) / sq - K
                if p > hi:
                    break
                if p >= lo:
                    out.append(p)
                k += 1
            return out
        return RiccatiSolution(spec, fam,
                               "(sqrt(D)*tan(sqrt(D)*(r+K)/2) - a1)/(2*a2)", ev, poles)

    if fam is Family.rational:
        def ev(r):
            return -a1 / (2 * a2) + 1 / (-a2 * r - K)
        pole = -K / a2
        return RiccatiSolution(spec, fam, "-a1/(2*a2) + 1/(-a2*r - K)", ev,
                               lambda lo, hi: [pole] if lo <= pole <= hi else [])

    q = math.sqrt(-spec.discriminant)
    lam = math.copysign(q, a2)
    u1 = (-a1 + lam) / (2 * a2)
    u2 = (-a1 - lam) / (2 * a2)
    sheet = spec.sheet

    def ev(r):
        rho = sheet * np.exp(K + lam * r)
        return (u1 - u2 * rho) / (1 - rho)

    def poles(lo, hi):
        if sheet < 0:
            return []
        p = -K / lam
        return [p] if lo <= p <= hi else []
    return RiccatiSolution(spec, fam, "(u1 - u2*rho)/(1 - rho), rho = sheet*exp(K + sgn(a2)*q*r)",
                           ev, poles)


COUPLING_KINDS = ("tangent", "morse", "coulomb", "harmonic", "quotient_exponential")


def riccati_coupling(kind, a=None, K=0.0):
    """Representative closed couplings; returns (spec, solution).

    ``a`` is the free coefficient of the row (ignored for ``tangent``).
    The Morse row is U = K exp(a r) - 1, which needs a2 = 0 and a1 = a0 = a.
    """
    if kind == "tangent":
        spec = RiccatiSpec(1.0, 0.0, 1.0, K)
    elif kind == "morse":
        a = -1.0 if a is None else a
        if not a < 0:
            raise DomainError("Morse row needs a < 0", invariant="a < 0")
        spec = RiccatiSpec(0.0, a, a, K)
    elif kind == "coulomb":
        a = 1.0 if a is None else a
        if a == 0:
            raise DomainError("Coulomb row needs a2 != 0", invariant="a2 != 0")
        spec = RiccatiSpec(a, 0.0, 0.0, K)
    elif kind == "harmonic":
        a = 1.0 if a is None else a
        if not a > 0:
            raise DomainError("harmonic row needs a0 > 0", invariant="a0 > 0")
        spec = RiccatiSpec(0.0, 0.0, a, K)
    elif kind == "quotient_exponential":
        a = 1.0 if a is None else a
        if a == 0:
            raise DomainError("quotient exponential row needs a2 != 0",
                              invariant="a2 != 0")
        spec = RiccatiSpec(a, a, 0.0, K)
    else:
        raise DomainError(f"unknown coupling kind {kind!r}; choose from "
                          f"{', '.join(COUPLING_KINDS)}", invariant="known kind")
    return spec, solve_riccati(spec)


# -- residual harness ---------------------------------------------------------

_D6 = np.array([-1.0, 9.0, -45.0, 0.0, 45.0, -9.0, 1.0]) / 60.0


@dataclass(frozen=True)
class OdeCheck:
    max_residual: float
    residuals: np.ndarray
    checked: np.ndarray
    skipped: tuple

    def __float__(self):
        return self.max_residual


def verify_ode(U, spec, sample, h=1e-3, exclusion=0.1):
    """Max |dU/dr - (a2 U^2 + a1 U + a0)| over ``sample``.

    dU/dr comes from a sixth-order central difference.  Points whose stencil
    comes within ``exclusion`` of a known pole, or where U cannot be
    evaluated, are skipped and listed in ``skipped``.
    """
    sample = np.atleast_1d(np.asarray(sample, dtype=float))
    offsets = np.arange(-3, 4)
    pole_fn = getattr(U, "poles", None)
    res, ok, skipped = [], [], []
    for r in sample:
        step = h * max(1.0, abs(r))
        if pole_fn is not None:
            if pole_fn(r - 3 * step - exclusion, r + 3 * step + exclusion):
                skipped.append(float(r))
                continue
            # shrink the stencil near a pole, where high derivatives blow up
            near = pole_fn(r - 1.0, r + 1.0)
            if near:
                step = min(step, 0.005 * min(abs(r - q) for q in near))
        try:
            vals = np.asarray(U(r + offsets * step), dtype=float)
        except SingularityError:
            skipped.append(float(r))
            continue
        if not np.all(np.isfinite(vals)):
            skipped.append(float(r))
            continue
        deriv = float(_D6 @ vals) / step
        res.append(abs(deriv - spec.rhs(vals[3])))
        ok.append(r)
    res = np.array(res)
    worst = float(res.max()) if res.size else 0.0
    return OdeCheck(worst, res, np.array(ok), tuple(skipped))


def fit_riccati(U, dU, sample):
    """Least-squares (a2, a1, a0) for dU = a2 U^2 + a1 U + a0; returns (spec, max residual)."""
    sample = np.asarray(sample, dtype=float)
    u = np.asarray(U(sample), dtype=float)
    du = np.asarray(dU(sample), dtype=float)
    basis = np.column_stack([u * u, u, np.ones_like(u)])
    coef, *_ = np.linalg.lstsq(basis, du, rcond=None)
    # snap coefficients that contribute at round-off level
    scale = max(float(np.max(np.abs(du))), 1e-300)
    keep = np.max(np.abs(basis * coef), axis=0) > 1e-10 * scale
    if not keep.all():
        sub, *_ = np.linalg.lstsq(basis[:, keep], du, rcond=None)
        coef = np.zeros(3)
        coef[keep] = sub
    resid = float(np.max(np.abs(basis @ coef - du)))
    return RiccatiSpec(*map(float, coef)), resid


def check_closure(coupling, sample=None, tol=CLOSURE_TOL):
    """Best-fit Riccati coefficients of a coupling; ClosureError if none fits."""
    if sample is None:
        sample = _default_sample(coupling)
    spec, resid = fit_riccati(coupling.U, coupling.dU, sample)
    scale = max(1.0, float(np.max(np.abs(coupling.dU(sample)))))
    if resid > tol * scale:
        raise ClosureError(
            f"{coupling.kind} coupling is outside the Riccati family "
            f"(best-fit residual {resid:.3g})")
    return spec


def _default_sample(coupling, n=100):
    lo, hi = coupling.domain
    r0 = coupling.expansion_point()
    span = 0.2 * abs(coupling.r_e)
    a = max(lo + 1e-3 * span, r0 - span) if math.isfinite(lo) else r0 - span
    b = min(hi - 1e-3 * span, r0 + span) if math.isfinite(hi) else r0 + span
    return np.linspace(a, b, n)


# -- factorization ------------------------------------------------------------

@dataclass(frozen=True)
class FactorizedForm:
    """V = K1 (U - K2)^2 + K3 and its non-minimal-coupling factorization.

    With W = w (U - c) and p = -i hbar d/dr,
    H = [(p + iW)(p - iW)] / 2m + E0 = [p^2 + W^2 - hbar W'] / 2m + E0.
    """

    K1: float
    K2: float
    K3: float
    w: float
    c: float
    E0: float
    spec: RiccatiSpec
    mass: float
    hbar_c: float

    def potential(self, U):
        return self.K1 * (np.asarray(U, dtype=float) - self.K2) ** 2 + self.K3

    def superpotential(self, U):
        return self.w * (np.asarray(U, dtype=float) - self.c)

    def factorized_potential(self, U):
        """(W^2 - hbar W') / 2m + E0 with W' eliminated through the Riccati relation."""
        U = np.asarray(U, dtype=float)
        W = self.superpotential(U)
        dW = self.w * self.spec.rhs(U)
        return (W * W - self.hbar_c * dW) / (2 * self.mass) + self.E0


def _quadratic_to_K(p2, p1, p0):
    if p2 == 0:
        raise ClosureError("the mapped potential has no U^2 term", invariant="K1 != 0")
    return p2, -p1 / (2 * p2), p0 - p1 * p1 / (4 * p2)


def factorize(problem, spec=None, sample=None, root=1, tol=CLOSURE_TOL):
    """Factorize a mapped problem whose coupling obeys the Riccati closure.

    ``problem`` is a :class:`MappedProblem` or an :class:`EffectiveMorse`.
    For a mapped problem the closure is checked first (fitting ``spec`` when
    it is not supplied); an out-of-family coupling raises ClosureError.
    ``root`` picks the sign of the superpotential slope w.
    """
    if isinstance(problem, EffectiveMorse):
        g = problem.gamma
        rho = problem.rho
        K1 = problem.depth * g * g / rho ** 2
        K2 = (rho - 1) / g
        K3 = problem.U0
        if spec is None:
            spec = RiccatiSpec(0.0, g, 1.0)
        mass, hbar_c = problem.mass, problem.hbar_c
    elif isinstance(problem, MappedProblem):
        cp = problem.coupling
        if sample is None:
            sample = _default_sample(cp)
        if spec is None and cp.riccati is not None:
            spec = RiccatiSpec(*cp.riccati)
        if spec is None:
            spec = check_closure(cp, sample, tol)
        else:
            chk = verify_ode(cp.U, spec, sample)
            scale = max(1.0, float(np.max(np.abs(cp.dU(sample)))))
            if chk.max_residual > tol * scale:
                raise ClosureError(
                    f"coupling violates dU/dr = a2 U^2 + a1 U + a0 "
                    f"(residual {chk.max_residual:.3g})")
        q2, q1, q0 = problem.quadratic_coefficients()
        half = 0.5 * problem.hbar_omega
        K1, K2, K3 = _quadratic_to_K(q2 - half * spec.a2, q1 - half * spec.a1,
                                     q0 - half * spec.a0)
        mass, hbar_c = problem.mass, problem.hbar_c
    else:
        raise TypeError("factorize expects a MappedProblem or EffectiveMorse")

    # w^2 - hbar a2 w - 2 m K1 = 0
    b = hbar_c * spec.a2
    disc = b * b + 8 * mass * K1
    if disc < 0:
        raise ClosureError("no real superpotential for this K1",
                           invariant="(hbar a2)^2 + 8 m K1 >= 0")
    w = 0.5 * (b + math.copysign(1, root) * math.sqrt(disc))
    if w == 0:
        raise ClosureError("degenerate superpotential w = 0")
    c = (4 * mass * K1 * K2 - hbar_c * w * spec.a1) / (2 * w * w)
    E0 = K3 + K1 * K2 ** 2 - (w * w * c * c - hbar_c * w * spec.a0) / (2 * mass)
    return FactorizedForm(K1, K2, K3, w, c, E0, spec, mass, hbar_c)


# -- closed-form spectra of the solvable members ------------------------------

def closed_form_levels(form: FactorizedForm, count, side=1):
    """Lowest bound levels of -hbar^2/2m d^2/dr^2 + K1 (U - K2)^2 + K3.

    Available for the affine (harmonic), exponential (Morse) and rational
    (Kratzer) families; other families raise DomainError.  For the rational
    family ``side`` says whether the well lies right (+1) or left (-1) of
    the pole.
    """
    spec = form.spec
    m, hc = form.mass, form.hbar_c
    K1, K2, K3 = form.K1, form.K2, form.K3
    fam = spec.family
    if K1 <= 0:
        raise DomainError("K1 must be positive for a confining well", invariant="K1 > 0")
    if fam is Family.affine:
        # U = a0 r + K: oscillator with m w^2 / 2 = K1 a0^2
        hw = hc * math.sqrt(2 * K1 * spec.a0 ** 2 / m)
        return np.array([hw * (n + 0.5) + K3 for n in range(count)])
    if fam is Family.exponential:
        # U + a0/a1 = K exp(a1 r): Morse well with depth K1 (K2 + a0/a1)^2
        g = spec.a1
        s = K2 + spec.a0 / spec.a1
        hw = hc * abs(g * s) * math.sqrt(2 * K1 / m)
        kappa = g * g * hc * hc / (m * hw)
        top = math.floor(1 / kappa - 0.5 + 1e-12)
        if count - 1 > top:
            raise DomainError(f"only {top + 1} bound levels", invariant="n <= N_max")
        return np.array([hw * (n + 0.5) * (1 - 0.5 * kappa * (n + 0.5)) + K3
                         for n in range(count)])
    if fam is Family.rational:
        # U = u0 + 1/(-a2 (r - r_p)): Kratzer k2/x^2 + k1/x + k0 with x = r - r_p
        u0 = -spec.a1 / (2 * spec.a2)
        s = u0 - K2
        k2 = K1 / spec.a2 ** 2
        k1 = -2 * K1 * s / spec.a2 * side
        k0 = K1 * s * s + K3
        if k1 >= 0:
            raise DomainError("Kratzer well needs an attractive 1/x term",
                              invariant="k1 < 0")
        nu = -0.5 + math.sqrt(0.25 + 2 * m * k2 / hc ** 2)
        return np.array([k0 - m * k1 * k1 / (2 * hc * hc * (n + nu + 1) ** 2)
                         for n in range(count)])
    raise DomainError(f"no closed-form spectrum coded for the {fam.value} family",
                      invariant="solvable family")
