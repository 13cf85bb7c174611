import json
import math
import subprocess
import sys

import pytest
from hypothesis import given, strategies as st

from relmorse import units
from relmorse.errors import DomainError
from relmorse.units import (AMU_TO_EV, HBAR_C, OscillatorParams, amu_to_energy,
                            constants_table, dimensionless)


def test_constants_positive_and_codata():
    c = units.CONSTANTS
    assert c.hbar_c == pytest.approx(1973.269804, rel=1e-12)
    assert c.amu_to_eV == pytest.approx(931494102.42, rel=1e-12)
    assert c.kB == pytest.approx(8.617333262e-5, rel=1e-12)
    assert all(v > 0 for v in constants_table.values())


def test_constants_table_is_read_only():
    with pytest.raises(TypeError):
        constants_table["hbar_c"] = 1.0


def test_constants_negative_rejected():
    with pytest.raises(DomainError):
        units.PhysicalConstants(hbar_c=-1, amu_to_eV=1, kB=1, electron_mass_amu=1)


def test_constants_env_override(tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"hbar_c": 1.0, "amu_to_eV": 2.0, "kB": 3.0,
                                "electron_mass_amu": 4.0}))
    code = "import relmorse.units as u; print(u.HBAR_C, u.AMU_TO_EV, u.KB)"
    out = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True,
                         env={"PEKERIS_CONSTANTS": str(path), "PATH": ""}, check=True)
    assert out.stdout.split() == ["1.0", "2.0", "3.0"]


def test_amu_to_energy_values():
    assert amu_to_energy(1.0) == pytest.approx(9.31494e8, rel=1e-6)
    assert amu_to_energy(0.50391) == pytest.approx(0.50391 * AMU_TO_EV, rel=1e-15)
    assert amu_to_energy(0.50391) == pytest.approx(4.694e8, rel=1e-3)


@pytest.mark.parametrize("mass", [0.0, -1.0])
def test_amu_to_energy_rejects_non_positive(mass):
    with pytest.raises(DomainError):
        amu_to_energy(mass)


def test_dimensionless_h2(h2_params):
    alpha, delta = dimensionless(h2_params)
    assert alpha == pytest.approx(1.440558, rel=1e-12)
    assert delta == pytest.approx(0.0276729, rel=5e-3)


def test_dimensionless_electron():
    # alpha = 1, hbar w = 124 eV, r_e = Bohr radius: delta = E_h / hbar w
    mc2 = units.ELECTRON_MC2
    p = OscillatorParams(mass=mc2, hbar_omega=124.0, gamma=-1 / 0.529177210903,
                         r_e=0.529177210903)
    alpha, delta = dimensionless(p)
    assert alpha == pytest.approx(1.0, rel=1e-15)
    assert delta == pytest.approx(0.219444, rel=1e-4)


def test_gamma_inverse_re_gives_alpha_one():
    p = OscillatorParams(mass=1.0, hbar_omega=1.0, gamma=-1 / 3.7, r_e=3.7)
    assert dimensionless(p)[0] == pytest.approx(1.0, rel=1e-15)


def test_dimensionless_rejects_unbound_sign():
    p = OscillatorParams(mass=1.0, hbar_omega=1.0, gamma=0.5, r_e=1.0)
    with pytest.raises(DomainError, match="alpha"):
        dimensionless(p)


@pytest.mark.parametrize("field", ["mass", "hbar_omega", "r_e"])
def test_params_reject_non_positive(field):
    kw = dict(mass=1.0, hbar_omega=1.0, gamma=-1.0, r_e=1.0)
    kw[field] = 0.0
    with pytest.raises(DomainError):
        OscillatorParams(**kw)


@given(st.floats(0.05, 10), st.floats(1e-4, 0.5), st.floats(0.1, 5), st.floats(1e3, 1e10))
def test_from_dimensionless_round_trip(alpha, delta, r_e, mass):
    p = OscillatorParams.from_dimensionless(alpha, delta, r_e, mass)
    a, d = dimensionless(p)
    assert a == pytest.approx(alpha, rel=1e-13)
    assert d == pytest.approx(delta, rel=1e-13)
    # kappa = alpha^2 delta
    assert p.kappa == pytest.approx(alpha ** 2 * delta, rel=1e-12)


def test_morse_depth_matches_h2(h2, h2_params):
    assert h2_params.morse_depth == pytest.approx(h2.De, rel=1e-12)
    assert math.isinf(h2_params.replace(gamma=0.0).morse_depth)
    assert HBAR_C == units.CONSTANTS.hbar_c
