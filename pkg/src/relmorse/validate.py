"""Oracle-versus-closed-form validation suite.

Each case builds a 1D potential, solves it with the finite-difference
oracle (Richardson-extrapolated) and compares the lowest levels with the
corresponding closed form.  ``run_validation`` returns a JSON-ready report.
"""

import time
from dataclasses import dataclass

import numpy as np

from .couplings import homographic, lennard_jones_1269, morse_coupling
from .molecules import get_molecule
from .oracle import GridProblem, morse_box, richardson_refine
from .pekeris import SpinAngularChannel, effective_morse, pekeris_map
from .riccati import closed_form_levels, factorize
from .spectra import kgmo_energy_1d, kgmo_potential, morse_potential, qmo_energy
from .units import OscillatorParams

DEFAULT_TOL = 1e-6
N_POINTS = 8001
COUNT = 4

# hbar = m = 1 working units for the model couplings
NATURAL = dict(mass=1.0, hbar_c=1.0)


@dataclass(frozen=True)
class CaseResult:
    name: str
    closed_form: list
    oracle: list
    rel_error: list
    tol: float
    seconds: float

    @property
    def passed(self):
        return bool(max(self.rel_error) <= self.tol)

    def as_dict(self):
        return {"name": self.name, "passed": self.passed, "tol": self.tol,
                "closed_form": self.closed_form, "oracle": self.oracle,
                "rel_error": self.rel_error, "seconds": round(self.seconds, 3)}


def relative_error(got, expected):
    """|got - expected| / max(|expected|, first spacing).

    Levels that sit at (or within round-off of) zero, such as the exact
    zero mode of a factorized Hamiltonian, are measured against the
    spacing instead of their own vanishing size.
    """
    got = np.asarray(got, dtype=float)
    expected = np.asarray(expected, dtype=float)
    scale = np.abs(expected)
    if expected.size > 1:
        scale = np.maximum(scale, abs(expected[1] - expected[0]))
    return np.abs(got - expected) / scale


def compare(name, expected, problem, tol=DEFAULT_TOL):
    t0 = time.perf_counter()
    expected = np.asarray(expected, dtype=float)
    got = richardson_refine(problem, len(expected)).values
    rel = relative_error(got, expected)
    return CaseResult(name, expected.tolist(), got.tolist(), rel.tolist(), tol,
                      time.perf_counter() - t0)


def self_consistency(name, problem, count=COUNT, tol=DEFAULT_TOL):
    """For wells without a closed form: extrapolated levels at two resolutions."""
    t0 = time.perf_counter()
    coarse = richardson_refine(problem, count).values
    fine = richardson_refine(problem.refined(), count).values
    rel = relative_error(coarse, fine)
    return CaseResult(name, fine.tolist(), coarse.tolist(), rel.tolist(), tol,
                      time.perf_counter() - t0)


# -- case builders ------------------------------------------------------------

def harmonic_case():
    V = lambda x: 0.5 * x * x  # noqa: E731
    prob = GridProblem((-12.0, 12.0), N_POINTS, V, **NATURAL)
    return compare("harmonic oscillator", [0.5, 1.5, 2.5], prob)


def qmo_natural_case():
    p = OscillatorParams(mass=1.0, hbar_omega=1.0, gamma=1.0, r_e=1.0, hbar_c=1.0)
    prob = GridProblem((-40.0, 6.0), N_POINTS, morse_potential(p), **NATURAL)
    return compare("QMO hbar=m=omega=gamma=1", [qmo_energy(0, p)], prob)


def qmo_h2_case():
    p = get_molecule("H2").params()
    prob = GridProblem(morse_box(0.0, p.gamma), N_POINTS, morse_potential(p), p.mass)
    return compare("QMO H2", [qmo_energy(n, p) for n in range(COUNT)], prob)


def kgmo_case():
    p = get_molecule("H2").params()
    expected = [kgmo_energy_1d(n, p, convention="exact") for n in range(COUNT)]
    prob = GridProblem(morse_box(0.0, p.gamma), N_POINTS, kgmo_potential(p), p.mass)
    return compare("KGMO 1D H2", expected, prob)


def effective_morse_cases():
    p = get_molecule("H2").params()
    out = []
    for eq, br in (("kg", "plus"), ("dirac", "plus"), ("dirac", "minus")):
        for conv in ("reference", "derived"):
            em = effective_morse(p, SpinAngularChannel(eq, 0, br), conv)
            prob = GridProblem(morse_box(em.r_eff, p.gamma), N_POINTS,
                               em.potential(), p.mass)
            out.append(compare(f"effective Morse H2 {eq} l=0 {br} ({conv})",
                               [em.energy(n) for n in range(COUNT)], prob))
    return out


def harmonic_coupling_case():
    """U = r - r_e: the mapped well is an oscillator."""
    p = OscillatorParams(mass=1.0, hbar_omega=50.0, gamma=-1.0, r_e=1.0, hbar_c=1.0)
    cp = homographic(1.0, -1.0, 0.0, 1.0, 1.0)
    mp = pekeris_map(cp, p, SpinAngularChannel("kg", 0))
    form = factorize(mp)
    prob = GridProblem((-0.5, 2.5), N_POINTS, mp.effective_potential, **NATURAL)
    return compare("mapped harmonic coupling", closed_form_levels(form, COUNT), prob)


def homographic_case():
    """c != 0 homographic coupling: the mapped well is a Kratzer potential."""
    p = OscillatorParams(mass=1.0, hbar_omega=20.0, gamma=-1.0, r_e=1.0, hbar_c=1.0)
    cp = homographic(1.0, -1.0, 0.5, 1.0, 1.0)
    mp = pekeris_map(cp, p, SpinAngularChannel("dirac", 0, "minus"))
    form = factorize(mp)
    pole = cp.domain[0]
    prob = GridProblem((pole + 0.05, 30.0), 2 * N_POINTS - 1,
                       mp.effective_potential, **NATURAL)
    return compare("mapped homographic coupling (Kratzer)",
                   closed_form_levels(form, COUNT, side=1), prob)


def morse_coupling_case():
    p = get_molecule("H2").params()
    mp = pekeris_map(morse_coupling(p.gamma, p.r_e), p, SpinAngularChannel("kg", 0))
    form = factorize(mp)
    prob = GridProblem(morse_box(p.r_e, p.gamma), N_POINTS, mp.effective_potential,
                       p.mass)
    return compare("mapped Morse coupling H2", closed_form_levels(form, COUNT), prob)


def lj_case():
    p = OscillatorParams(mass=1.0, hbar_omega=2000.0, gamma=-1.0, r_e=1.0, hbar_c=1.0)
    cp = lennard_jones_1269(1.0)
    mp = pekeris_map(cp, p, SpinAngularChannel("kg", 0))
    prob = GridProblem((0.6, 1.12), N_POINTS, mp.effective_potential, **NATURAL)
    return self_consistency("mapped LJ 12-6-9 coupling (grid self-consistency)", prob)


CASES = (harmonic_case, qmo_natural_case, qmo_h2_case, kgmo_case,
         effective_morse_cases, harmonic_coupling_case, homographic_case,
         morse_coupling_case, lj_case)


def run_validation():
    t0 = time.perf_counter()
    results = []
    for build in CASES:
        out = build()
        results.extend(out if isinstance(out, list) else [out])
    return {
        "passed": all(r.passed for r in results),
        "n_cases": len(results),
        "n_failed": sum(not r.passed for r in results),
        "seconds": round(time.perf_counter() - t0, 3),
        "cases": [r.as_dict() for r in results],
    }


def max_rel_error(report):
    return max(max(c["rel_error"]) for c in report["cases"])
