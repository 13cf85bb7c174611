import csv
import io
import json
import subprocess
import sys

import pytest

from relmorse.cli import RunConfig, fmt, run_to_strings
from relmorse.errors import ConfigError


def _rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_fmt_17_digits():
    assert fmt(0.1) == "0.10000000000000001"
    assert fmt(3) == "3" and fmt(None) == ""


def test_spectrum_h2_dirac():
    status, out, err = run_to_strings(["spectrum", "--molecule", "H2", "--equation",
                                       "dirac", "--l", "0"])
    assert status == 0
    rows = _rows(out)
    plus = [r for r in rows if r["branch"] == "plus"]
    minus = [r for r in rows if r["branch"] == "minus"]
    assert len(plus) == 19 and minus
    assert [int(r["N"]) for r in plus] == list(range(19))
    e = [float(r["energy_hbar_omega"]) for r in plus]
    assert all(b > a for a, b in zip(e, e[1:]))
    assert json.loads(err)["source"] == "H2"


def test_spectrum_effective_model():
    status, out, _ = run_to_strings(["spectrum", "--molecule", "H2", "--model",
                                     "effective", "--branch", "plus"])
    assert status == 0 and len(_rows(out)) > 5


def test_byte_identical_reruns(tmp_path):
    argv = ["thermo", "--molecule", "H2", "--tmin", "10", "--tmax", "3e4",
            "--points-per-decade", "50"]
    a = run_to_strings(argv)
    b = run_to_strings(argv)
    assert a == b
    out = tmp_path / "t.csv"
    subprocess.run([sys.executable, "-m", "relmorse.cli", *argv, "--out", str(out)],
                   check=True, capture_output=True)
    assert out.read_text() == a[1]


def test_thermo_electron_peak(tmp_path):
    summary = tmp_path / "peaks.json"
    status, out, _ = run_to_strings(["thermo", "--preset", "electron-uv", "--equation",
                                     "dirac", "--tmin", "1e4", "--tmax", "1e8",
                                     "--points-per-decade", "400",
                                     "--summary", str(summary)])
    assert status == 0
    assert list(_rows(out)[0]) == ["T_K", "T_C", "U", "F", "S", "C"]
    peaks = json.loads(summary.read_text())["peaks"]
    assert len(peaks) == 1 and peaks[0]["C_peak"] == pytest.approx(0.85, rel=0.01)


def test_map_and_riccati():
    status, out, err = run_to_strings(["map", "--molecule", "H2", "--coupling", "lj1269"])
    assert status == 0 and "A1" in json.loads(err)
    status, out, err = run_to_strings(["riccati", "--riccati", "1,0,1,0", "--rmin", "-1",
                                       "--rmax", "1"])
    info = json.loads(err)
    assert status == 0 and info["family"] == "trigonometric"
    assert len(_rows(out)) == 201


def test_json_format():
    status, out, _ = run_to_strings(["spectrum", "--alpha", "1", "--delta", "0.219444",
                                     "--format", "json"])
    assert status == 0
    doc = json.loads(out)
    assert len(doc["rows"]) == 11


def test_error_json_names_invariant():
    status, out, err = run_to_strings(["spectrum", "--alpha", "1", "--delta", "-2"])
    assert status == 2 and out == ""
    doc = json.loads(err)
    assert {"error", "module", "invariant", "message"} <= set(doc)


def test_exactly_one_source():
    status, _, err = run_to_strings(["spectrum", "--molecule", "H2", "--alpha", "1",
                                     "--delta", "0.1"])
    assert status == 2 and json.loads(err)["module"] == "cli"
    status, _, err = run_to_strings(["spectrum"])
    assert status == 2
    with pytest.raises(ConfigError):
        RunConfig("plot")


def test_unknown_molecule():
    status, _, err = run_to_strings(["spectrum", "--molecule", "XeF"])
    assert status == 2 and "error" in json.loads(err)


def test_missing_table_file():
    status, _, err = run_to_strings(["map", "--molecule", "H2", "--coupling",
                                     "table:/nonexistent.csv"])
    assert status == 2 and json.loads(err)["invariant"] == "referenced files exist"


def test_validate_all_pass():
    status, out, _ = run_to_strings(["validate"])
    report = json.loads(out)
    assert status == 0 and report["passed"] and report["n_failed"] == 0
