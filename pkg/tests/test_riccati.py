import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import assume, given, strategies as st

from relmorse.couplings import homographic, lennard_jones_1269, morse_coupling
from relmorse.errors import ClosureError, DomainError, SingularityError
from relmorse.molecules import get_molecule
from relmorse.pekeris import SpinAngularChannel, effective_morse, pekeris_map
from relmorse.riccati import (COUPLING_KINDS, Family, RiccatiSpec, closed_form_levels,
                              factorize, fit_riccati, solve_riccati, riccati_coupling,
                              verify_ode)
from relmorse.units import OscillatorParams

KG0 = SpinAngularChannel("kg", 0)
NAT = dict(mass=1.0, gamma=-1.0, r_e=1.0, hbar_c=1.0)

# 100 regular points per row
ROW_SAMPLES = {
    "tangent": np.linspace(-1.4, 1.4, 100),
    "morse": np.linspace(-2.0, 3.0, 100),
    "coulomb": np.linspace(0.2, 4.0, 100),
    "harmonic": np.linspace(-3.0, 3.0, 100),
    "quotient_exponential": np.linspace(0.2, 4.0, 100),
}


# -- closed forms --------------------------------------------------------------


def test_tangent_row():
    spec, U = riccati_coupling("tangent", K=0.3)
    r = np.linspace(-1.5, 1.0, 9)
    assert np.allclose(U(r), np.tan(r + 0.3), rtol=1e-14)
    assert U.family is Family.trigonometric


def test_coulomb_row():
    spec, U = riccati_coupling("coulomb", a=2.0, K=0.5)
    r = np.linspace(0.1, 3, 9)
    assert np.allclose(U(r), 1 / (-2.0 * r - 0.5), rtol=1e-14)
    assert U.family is Family.rational


def test_harmonic_row():
    _, U = riccati_coupling("harmonic", a=1.0)
    r = np.linspace(-2, 2, 5)
    assert np.array_equal(U(r), r)


def test_quotient_exponential_row():
    _, U = riccati_coupling("quotient_exponential", a=0.7, K=0.2)
    r = np.linspace(0.3, 3, 9)
    e = np.exp(0.2 + 0.7 * r)
    assert np.allclose(U(r), -e / (e - 1), rtol=1e-13)


def test_morse_row_symbolic():
    r, K, a = sp.symbols("r K a", real=True)
    U = K * sp.exp(a * r) - 1
    assert sp.simplify(sp.diff(U, r) - (a * U + a)) == 0
    # the uncorrected coefficients (a2 = a, a1 = 0, a0 = a) do not solve it
    assert sp.simplify(sp.diff(U, r) - (a * U ** 2 + a)) != 0
    spec, sol = riccati_coupling("morse", a=-0.8, K=1.3)
    assert (spec.a2, spec.a1, spec.a0) == (0.0, -0.8, -0.8)
    x = np.linspace(-1, 2, 7)
    assert np.allclose(sol(x), 1.3 * np.exp(-0.8 * x) - 1, rtol=1e-14)


def test_table_sign_constraints():
    with pytest.raises(DomainError):
        riccati_coupling("morse", a=0.5)
    with pytest.raises(DomainError):
        riccati_coupling("harmonic", a=-1.0)
    with pytest.raises(DomainError):
        riccati_coupling("coulomb", a=0.0)
    with pytest.raises(DomainError):
        riccati_coupling("bessel")


@pytest.mark.parametrize("kind", COUPLING_KINDS)
def test_table_rows_verify(kind):
    spec, U = riccati_coupling(kind)
    chk = verify_ode(U, spec, ROW_SAMPLES[kind])
    assert len(chk.checked) == 100 and not chk.skipped
    assert chk.max_residual < 1e-8


@pytest.mark.parametrize("kind", COUPLING_KINDS)
def test_wrong_coefficients_fail(kind):
    spec, U = riccati_coupling(kind)
    wrong = RiccatiSpec(spec.a2 + 1.0, spec.a1 - 0.5, spec.a0 + 1.0)
    assert verify_ode(U, wrong, ROW_SAMPLES[kind]).max_residual > 0.1


def test_tangent_poles_skipped():
    spec, U = riccati_coupling("tangent")
    chk = verify_ode(U, spec, np.linspace(-3, 3, 101))
    assert chk.skipped and len(chk.skipped) + len(chk.checked) == 101
    assert all(min(abs(r - math.pi / 2), abs(r + math.pi / 2)) < 0.2 for r in chk.skipped)
    assert chk.max_residual < 1e-8


def test_singularity_reports_abscissa():
    _, U = riccati_coupling("tangent")
    with pytest.raises(SingularityError) as info:
        U(math.pi / 2)
    assert info.value.abscissa == pytest.approx(math.pi / 2, rel=1e-15)
    _, C = riccati_coupling("coulomb", a=2.0, K=1.0)
    with pytest.raises(SingularityError):
        C(np.array([0.0, -0.5]))


def test_poles_listing():
    _, U = riccati_coupling("tangent", K=0.1)
    ps = U.poles(-5, 5)
    assert np.allclose(ps, [-3 * math.pi / 2 - 0.1, -math.pi / 2 - 0.1,
                            math.pi / 2 - 0.1, 3 * math.pi / 2 - 0.1])


def test_classification_total():
    assert RiccatiSpec(0, 0, 1).family is Family.affine
    assert RiccatiSpec(0, 1, 1).family is Family.exponential
    assert RiccatiSpec(1, 0, 1).family is Family.trigonometric
    assert RiccatiSpec(1, 2, 1).family is Family.rational
    assert RiccatiSpec(1, 0, -1).family is Family.hyperbolic


coef = st.floats(-2, 2).map(lambda x: round(x, 6))


def _regular_sample(sol, lo=-2.0, hi=2.0, gap=0.3, n=100):
    r = np.linspace(lo, hi, 4 * n)
    for p in sol.poles(lo - gap, hi + gap):
        r = r[np.abs(r - p) > gap]
    assume(len(r) >= n)
    return r[np.linspace(0, len(r) - 1, n).astype(int)]


@given(coef, coef, coef, st.floats(-1, 1), st.sampled_from([1, -1]))
def test_solutions_satisfy_ode(a2, a1, a0, K, sheet):
    spec = RiccatiSpec(a2, a1, a0, K, sheet)
    sol = solve_riccati(spec)
    r = _regular_sample(sol)
    u = sol(r)
    assume(np.max(np.abs(u)) < 30)
    chk = verify_ode(sol, spec, r, exclusion=0.25)
    assert len(chk.checked) == len(r)
    assert chk.max_residual < 1e-8


@given(st.floats(0.05, 2), st.floats(-2, 2), st.floats(0.05, 2), st.floats(-1, 1))
def test_positive_discriminant_property(a2, a1, a0, K):
    spec = RiccatiSpec(a2, a1, a0, K)
    assume(spec.discriminant > 1e-3)
    sol = solve_riccati(spec)
    r = _regular_sample(sol, -4, 4)
    u = sol(r)
    assume(np.max(np.abs(u)) < 30)
    assert verify_ode(sol, spec, r, exclusion=0.3).max_residual < 1e-8


@given(st.floats(-3, 3))
def test_translation_continuity(K):
    r = np.linspace(-1.0, 1.0, 41)
    _, t0 = riccati_coupling("tangent")
    _, tK = riccati_coupling("tangent", K=K)
    assume(not tK.poles(-1.3, 1.3) and not t0.poles(-1.3 + K, 1.3 + K))
    assert np.allclose(tK(r), t0(r + K), rtol=1e-12, atol=1e-12)
    _, h0 = riccati_coupling("harmonic", a=2.0)
    _, hK = riccati_coupling("harmonic", a=2.0, K=K)
    assert np.allclose(hK(r), h0(r + K / 2.0), rtol=1e-13, atol=1e-13)
    _, c0 = riccati_coupling("coulomb", a=1.5)
    _, cK = riccati_coupling("coulomb", a=1.5, K=K)
    rr = r[(np.abs(r) > 0.2) & (np.abs(r + K / 1.5) > 0.2)]
    assert np.allclose(cK(rr), c0(rr + K / 1.5), rtol=1e-12)


def test_fit_recovers_coefficients():
    spec = RiccatiSpec(0.4, -0.3, 0.2)
    sol = solve_riccati(spec)
    r = np.linspace(-1, 1, 50)
    fit, resid = fit_riccati(sol, sol.derivative, r)
    assert resid < 1e-12
    assert (fit.a2, fit.a1, fit.a0) == pytest.approx((0.4, -0.3, 0.2), rel=1e-10)


# -- closure under the mapping ---------------------------------------------------


def _non_quadratic_content(mp, r):
    U = mp.coupling.U(r)
    V = mp.effective_potential(r)
    basis = np.column_stack([U * U, U, np.ones_like(U), U ** 3, U ** 4])
    scale = np.max(np.abs(basis), axis=0)
    coef, *_ = np.linalg.lstsq(basis / scale, V, rcond=None)
    return np.max(np.abs(coef[3:])) / np.max(np.abs(V))


@pytest.mark.parametrize("cp", [morse_coupling(-1.2, 1.0),
                                homographic(1.0, -1.0, 0.0, 1.0, 1.0),
                                homographic(1.0, -1.0, 0.5, 1.0, 1.0)],
                         ids=["morse", "harmonic", "homographic"])
def test_family_closure(cp):
    p = OscillatorParams(hbar_omega=7.0, **NAT)
    mp = pekeris_map(cp, p, SpinAngularChannel("dirac", 1, "minus"))
    r = np.linspace(0.8, 1.6, 200)
    assert _non_quadratic_content(mp, r) < 1e-8


def test_lj_is_not_closed():
    p = OscillatorParams(hbar_omega=7.0, **NAT)
    mp = pekeris_map(lennard_jones_1269(1.0), p, KG0)
    r = np.linspace(0.8, 1.1, 200)
    assert _non_quadratic_content(mp, r) > 1e-4
    with pytest.raises(ClosureError):
        factorize(mp)


# -- factorization ----------------------------------------------------------------


def _check_factorization(form, mp, r):
    U = mp.coupling.U(r)
    V = mp.effective_potential(r)
    scale = np.max(np.abs(V))
    assert np.max(np.abs(form.potential(U) - V)) < 1e-8 * scale
    assert np.max(np.abs(form.factorized_potential(U) - V)) < 1e-8 * scale
    # superpotential derivative by finite differences instead of the Riccati relation
    h = 1e-4
    W = lambda x: form.superpotential(mp.coupling.U(x))  # noqa: E731
    dW = (-W(r + 2 * h) + 8 * W(r + h) - 8 * W(r - h) + W(r - 2 * h)) / (12 * h)
    rebuilt = (W(r) ** 2 - form.hbar_c * dW) / (2 * form.mass) + form.E0
    assert np.max(np.abs(rebuilt - V)) < 1e-8 * scale


@pytest.mark.parametrize("cp,ch", [
    (homographic(1.0, -1.0, 0.0, 1.0, 1.0), KG0),
    (morse_coupling(-1.2, 1.0), SpinAngularChannel("dirac", 2, "plus")),
    (homographic(1.0, -1.0, 0.5, 1.0, 1.0), SpinAngularChannel("dirac", 0, "minus")),
], ids=["harmonic", "morse", "homographic"])
def test_factorization_pointwise(cp, ch):
    p = OscillatorParams(hbar_omega=20.0, **NAT)
    mp = pekeris_map(cp, p, ch)
    form = factorize(mp)
    _check_factorization(form, mp, np.linspace(0.7, 1.8, 60))


def test_harmonic_coupling_is_oscillator():
    p = OscillatorParams(hbar_omega=20.0, **NAT)
    mp = pekeris_map(homographic(1.0, -1.0, 0.0, 1.0, 1.0), p, KG0)
    form = factorize(mp)
    # spring m w^2/2 stiffened by the expanded -hbar w U/r term
    g = mp.coupling.gamma * mp.coupling.r_e
    assert form.K1 == pytest.approx(mp.spring / 2 - 20.0 * mp.a1 / g, rel=1e-14)
    levels = closed_form_levels(form, 3)
    assert np.allclose(np.diff(levels), math.sqrt(2 * form.K1), rtol=1e-14)
    # zero mode of the factorized Hamiltonian is the ground level
    assert form.E0 == pytest.approx(levels[0], rel=1e-12)


def test_morse_factorization_matches_effective_morse(h2):
    p = h2.params()
    mp = pekeris_map(morse_coupling(p.gamma, p.r_e), p, KG0)
    em = effective_morse(p, KG0, "derived")
    a, b = factorize(mp), factorize(em)
    assert (a.K1, a.K2, a.K3) == pytest.approx((b.K1, b.K2, b.K3), rel=1e-10)
    assert a.E0 == pytest.approx(em.energy(0), rel=1e-10)
    assert closed_form_levels(a, 4) == pytest.approx(
        [em.energy(n) for n in range(4)], rel=1e-10)


def test_factorize_rejects_wrong_spec():
    p = OscillatorParams(hbar_omega=5.0, **NAT)
    mp = pekeris_map(morse_coupling(-1.0, 1.0), p, KG0)
    with pytest.raises(ClosureError):
        factorize(mp, spec=RiccatiSpec(1.0, 0.0, 1.0))


def test_factorize_type_error():
    with pytest.raises(TypeError):
        factorize(object())
