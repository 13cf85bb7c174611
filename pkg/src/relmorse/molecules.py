"""Molecule parameter store.

File grammar (UTF-8, one record per line, JSON Lines)::

    # comment lines and blank lines are ignored
    {"name": "H2", "De_eV": 4.7446, "re_angstrom": 0.7416,
     "mass_amu": 0.50391, "alpha": 1.440558, "delta_ref": 0.0276729,
     "provenance": "..."}

Required keys: ``name``, ``De_eV``, ``re_angstrom``, ``mass_amu``, ``alpha``.
Optional keys: ``delta_ref``, ``provenance``, ``regime`` (``nonrelativistic``
or ``relativistic``, default ``nonrelativistic``). Any other key is rejected.
Each record must sit on a single line.
"""

import json
import math
from dataclasses import dataclass
from importlib import resources

from .errors import ParseError, ValidationError
from .units import HBAR_C, OscillatorParams, amu_to_energy

REQUIRED_KEYS = ("name", "De_eV", "re_angstrom", "mass_amu", "alpha")
OPTIONAL_KEYS = ("delta_ref", "provenance", "regime")
REGIMES = ("nonrelativistic", "relativistic")
DELTA_REL_TOL = 0.02


@dataclass(frozen=True)
class MoleculeRecord:
    name: str
    De: float  # eV
    re: float  # Angstrom
    mass: float  # amu
    alpha: float
    delta_ref: float | None = None
    provenance: str = ""
    regime: str = "nonrelativistic"

    def __post_init__(self):
        for key in ("De", "re", "mass", "alpha"):
            value = getattr(self, key)
            if not (isinstance(value, (int, float)) and math.isfinite(value)
                    and value > 0):
                raise ValidationError(
                    f"molecule {self.name!r}: {key} must be positive, got {value!r}",
                    invariant=f"{key} > 0")
        if self.regime not in REGIMES:
            raise ValidationError(f"molecule {self.name!r}: unknown regime "
                                  f"{self.regime!r}", invariant="regime")
        if self.delta_ref is not None:
            if abs(self.delta / self.delta_ref - 1) > DELTA_REL_TOL:
                raise ValidationError(
                    f"molecule {self.name!r}: computed delta {self.delta:.6g} "
                    f"disagrees with delta_ref {self.delta_ref:.6g} by more than 2%",
                    invariant="delta consistency")

    @property
    def mc2(self):
        return amu_to_energy(self.mass)

    @property
    def E0(self):
        """hbar^2 / (m r_e^2) in eV."""
        return HBAR_C ** 2 / (self.mc2 * self.re ** 2)

    @property
    def delta(self):
        return math.sqrt(self.E0 / (2 * self.alpha ** 2 * self.De))

    @property
    def hbar_omega(self):
        """Oscillator quantum fixed by De = m omega^2 / (2 gamma^2)."""
        return self.alpha * math.sqrt(2 * self.De * self.E0)

    @property
    def gamma(self):
        return -self.alpha / self.re

    def params(self):
        return OscillatorParams(mass=self.mc2, hbar_omega=self.hbar_omega,
                                gamma=self.gamma, r_e=self.re)

    def to_json(self):
        out = {"name": self.name, "De_eV": self.De, "re_angstrom": self.re,
               "mass_amu": self.mass, "alpha": self.alpha}
        if self.delta_ref is not None:
            out["delta_ref"] = self.delta_ref
        if self.provenance:
            out["provenance"] = self.provenance
        if self.regime != "nonrelativistic":
            out["regime"] = self.regime
        return json.dumps(out, ensure_ascii=False)


def _record_from_obj(obj, lineno):
    if not isinstance(obj, dict):
        raise ParseError("expected a JSON object", lineno)
    unknown = set(obj) - set(REQUIRED_KEYS) - set(OPTIONAL_KEYS)
    if unknown:
        raise ParseError(f"unknown key(s): {', '.join(sorted(unknown))}", lineno)
    missing = [k for k in REQUIRED_KEYS if k not in obj]
    if missing:
        raise ParseError(f"missing key(s): {', '.join(missing)}", lineno)
    try:
        return MoleculeRecord(
            name=str(obj["name"]), De=obj["De_eV"], re=obj["re_angstrom"],
            mass=obj["mass_amu"], alpha=obj["alpha"],
            delta_ref=obj.get("delta_ref"), provenance=obj.get("provenance", ""),
            regime=obj.get("regime", "nonrelativistic"))
    except ValidationError as exc:
        raise ValidationError(f"line {lineno}: {exc}",
                              invariant=exc.invariant) from None


def parse_molecules(text):
    records = []
    # records end at '\n' only; splitlines() would also cut at U+2028 etc.
    for lineno, line in enumerate(text.split("\n"), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        try:
            obj = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, lineno) from None
        records.append(_record_from_obj(obj, lineno))
    return records


def load_molecules(path):
    with open(path, encoding="utf-8") as fh:
        return parse_molecules(fh.read())


def dump_molecules(records, path):
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(rec.to_json() + "\n")


def shipped_molecules():
    text = resources.files("relmorse").joinpath(
        "data/molecules.jsonl").read_text(encoding="utf-8")
    return {rec.name: rec for rec in parse_molecules(text)}


def get_molecule(name):
    db = shipped_molecules()
    try:
        return db[name]
    except KeyError:
        raise ValidationError(f"unknown molecule {name!r}; available: "
                              f"{', '.join(db)}", invariant="known preset") from None
