"""Command-line front end.

Tables (spectra, sweeps, sampled couplings) go to ``--out`` or stdout as CSV
with 17 significant digits.  Summaries (peaks, classifications, mapping
constants, validation reports) are JSON: written to ``--summary`` when
given, otherwise to stdout if the table went to a file, else to stderr.
Any library error exits with status 2 and a JSON error record on stderr.
"""

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .couplings import builtin_coupling, tabulated_coupling
from .errors import ConfigError, RelMorseError
from .molecules import get_molecule
from .pekeris import (SpinAngularChannel, effective_morse, nmax, pekeris_energy,
                      pekeris_map)
from .riccati import RiccatiSpec, solve_riccati
from .thermo import (build_spectrum, default_temperature_grid, molecule_spectrum,
                     sweep)
from .units import OscillatorParams, amu_to_energy, kelvin_to_celsius
from .validate import run_validation

SUBCOMMANDS = ("spectrum", "thermo", "map", "riccati", "validate")


def fmt(x):
    if x is None:
        return ""
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    if isinstance(x, str):
        return x
    return "%.17g" % float(x)


def write_csv(header, rows, stream):
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])


def _cell(x):
    if isinstance(x, (float, np.floating)) and not math.isfinite(x):
        return None
    if isinstance(x, np.generic):
        return x.item()
    return x


def write_table_json(header, rows, stream):
    dump_json({"columns": list(header),
               "rows": [[_cell(v) for v in row] for row in rows]}, stream)


def _json_default(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(type(obj).__name__)


def dump_json(obj, stream):
    json.dump(obj, stream, indent=2, sort_keys=True, default=_json_default)
    stream.write("\n")


@dataclass
class RunConfig:
    subcommand: str
    molecule: str | None = None
    params: dict = field(default_factory=dict)
    output: str | None = None
    summary: str | None = None
    format: str = "csv"

    def __post_init__(self):
        if self.subcommand not in SUBCOMMANDS:
            raise ConfigError(f"unknown subcommand {self.subcommand!r}",
                              invariant="RunConfig.subcommand")

    def source(self, required=True):
        """'molecule', 'params' or None; exactly one must be set when required."""
        explicit = any(self.params.get(k) is not None for k in ("alpha", "delta"))
        if self.molecule and explicit:
            raise ConfigError("give either --molecule or --alpha/--delta, not both",
                              invariant="exactly one of molecule or parameters")
        if self.molecule:
            return "molecule"
        if explicit:
            if self.params.get("alpha") is None or self.params.get("delta") is None:
                raise ConfigError("--alpha and --delta must be given together",
                                  invariant="exactly one of molecule or parameters")
            return "params"
        if required:
            raise ConfigError("give --molecule NAME or --alpha A --delta D",
                              invariant="exactly one of molecule or parameters")
        return None


class Emitter:
    """Routes the table and the JSON summary to their destinations."""

    def __init__(self, config, stdout, stderr):
        self.config, self.stdout, self.stderr = config, stdout, stderr

    def table(self, header, rows):
        write = write_csv if self.config.format == "csv" else write_table_json
        if self.config.output:
            with open(self.config.output, "w", newline="", encoding="utf-8") as fh:
                write(header, rows, fh)
        else:
            write(header, rows, self.stdout)

    def summary(self, obj, primary=False):
        if self.config.summary:
            with open(self.config.summary, "w", encoding="utf-8") as fh:
                dump_json(obj, fh)
        elif primary and self.config.output:
            with open(self.config.output, "w", encoding="utf-8") as fh:
                dump_json(obj, fh)
        elif primary or self.config.output:
            dump_json(obj, self.stdout)
        else:
            dump_json(obj, self.stderr)


def _oscillator(cfg):
    if cfg.source() == "molecule":
        rec = get_molecule(cfg.molecule)
        return rec, rec.params()
    p = cfg.params
    mass = amu_to_energy(p.get("mass_amu") or 1.0)
    return None, OscillatorParams.from_dimensionless(p["alpha"], p["delta"],
                                                     p.get("r_e") or 1.0, mass)


def _channel(args):
    return SpinAngularChannel(args.equation, args.l, args.branch)


# -- subcommands ----------------------------------------------------------------

def cmd_spectrum(cfg, args, out):
    branches = ("plus", "minus") if args.branch == "both" else (args.branch,)
    rows = []
    if args.l == 0 and args.model == "recast":
        if cfg.source() == "molecule":
            rec = get_molecule(cfg.molecule)
            alpha = rec.alpha
            delta = rec.delta_ref if rec.delta_ref is not None else rec.delta
            hw = rec.hbar_omega
        else:
            alpha, delta, hw = cfg.params["alpha"], cfg.params["delta"], None
        for br in branches:
            # Klein-Gordon carries no spin: both labels use the f = 0 ladder
            formula = "plus" if args.equation == "kg" else br
            for N in range(nmax(alpha, delta, formula) + 1):
                e = pekeris_energy(N, alpha, delta, formula)
                rows.append((N, br, e, None if hw is None else e * hw))
    else:
        _, params = _oscillator(cfg)
        for br in branches:
            em = effective_morse(params, SpinAngularChannel(args.equation, args.l, br),
                                 args.convention)
            for N, e in enumerate(em.energies()):
                rows.append((N, br, e / params.hbar_omega, e))
    out.table(["N", "branch", "energy_hbar_omega", "energy_eV"], rows)
    out.summary({"source": cfg.molecule or "parameters", "equation": args.equation,
                 "l": args.l, "model": args.model,
                 "n_levels": {br: sum(r[1] == br for r in rows) for br in branches}})
    return 0


def cmd_thermo(cfg, args, out):
    if cfg.source() == "molecule":
        spec = molecule_spectrum(get_molecule(cfg.molecule), args.equation, args.regime)
    else:
        p = cfg.params
        if p.get("hbar_omega") is None:
            raise ConfigError("--hbar-omega (eV) is needed to sweep in kelvin",
                              invariant="energy unit known")
        regime = args.regime or "nonrelativistic"
        gr = p.get("gamma_ratio")
        if regime == "relativistic" and gr is None:
            gr = p["hbar_omega"] / amu_to_energy(p.get("mass_amu") or 1.0)
        spec = build_spectrum(p["alpha"], p["delta"], args.equation, regime,
                              gamma_ratio=gr, hbar_omega=p["hbar_omega"])
    T = default_temperature_grid(args.tmin, args.tmax, args.points_per_decade)
    res = sweep(spec, T)
    rows = zip(T, kelvin_to_celsius(T), res.U, res.F, res.S, res.C)
    out.table(["T_K", "T_C", "U", "F", "S", "C"], rows)
    out.summary({
        "equation": args.equation,
        "regime": spec.regime,
        "energy_unit_eV": spec.energy_unit,
        "n_levels": len(spec),
        "n_dropped": spec.dropped,
        "peaks": [p.as_dict() for p in res.peaks()],
    })
    return 0


def _coupling(args, params):
    kind = args.coupling
    if kind.startswith("table:"):
        return tabulated_coupling(kind[len("table:"):], params.gamma, params.r_e)
    if kind == "morse":
        return builtin_coupling("morse", gamma=params.gamma, r_e=params.r_e)
    if kind == "lj1269":
        return builtin_coupling("lennard_jones_1269", r_e=params.r_e)
    if kind == "homographic":
        a, b, c, d = args.homographic
        return builtin_coupling("homographic", a=a, b=b, c=c, d=d, r_e=params.r_e)
    raise ConfigError(f"unknown coupling {kind!r}", invariant="coupling kind")


def cmd_map(cfg, args, out):
    _, params = _oscillator(cfg)
    cp = _coupling(args, params)
    mp = pekeris_map(cp, params, _channel(args), a2_zero=args.a2_zero)
    r0 = cp.expansion_point()
    lo, hi = cp.domain
    span = args.span * params.r_e
    a = max(r0 - span, lo + 1e-6 * span) if math.isfinite(lo) else r0 - span
    b = min(r0 + span, hi - 1e-6 * span) if math.isfinite(hi) else r0 + span
    r = np.linspace(a, b, args.samples)
    rows = zip(r, cp.U(r), mp.effective_potential(r), mp.expanded_potential(r),
               mp.radial_potential(r))
    summary = {
        "coupling": cp.kind, "A1": mp.A1, "A2": mp.A2, "A3": mp.A3,
        "a1": mp.a1, "a2": mp.a2, "b1": mp.b1, "b2": mp.b2, "h0": mp.h0,
        "f_at_1": cp.f_derivatives()[0], "expansion_point": r0,
        "channel": {"equation": args.equation, "l": args.l, "branch": args.branch,
                    "f": mp.channel.f},
    }
    if args.format == "json":
        out.summary(summary, primary=True)
    else:
        out.table(["r", "U", "effective", "expanded", "radial"], rows)
        out.summary(summary)
    return 0


def cmd_riccati(cfg, args, out):
    a2, a1, a0, K = args.riccati
    spec = RiccatiSpec(a2, a1, a0, K, args.sheet)
    sol = solve_riccati(spec)
    r = np.linspace(args.rmin, args.rmax, args.samples)
    poles = sol.poles(args.rmin, args.rmax)
    rows, skipped = [], []
    for x in r:
        if any(abs(x - p) <= 1e-9 * max(1.0, abs(p)) for p in poles):
            skipped.append(float(x))
            continue
        rows.append((x, sol(x)))
    summary = {"a2": a2, "a1": a1, "a0": a0, "K": K, "sheet": args.sheet,
               "discriminant": spec.discriminant, "family": sol.family.value,
               "closed_form": sol.formula, "poles": poles, "skipped": skipped}
    if args.format == "json":
        out.summary(summary, primary=True)
    else:
        out.table(["r", "U"], rows)
        out.summary(summary)
    return 0


def cmd_validate(cfg, args, out):
    report = run_validation()
    out.summary(report, primary=True)
    return 0 if report["passed"] else 1


COMMANDS = {"spectrum": cmd_spectrum, "thermo": cmd_thermo, "map": cmd_map,
            "riccati": cmd_riccati, "validate": cmd_validate}


# -- parser ---------------------------------------------------------------------

def _floats(n):
    def parse(text):
        try:
            vals = [float(v) for v in text.split(",")]
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected {n} comma-separated numbers")
        if len(vals) != n:
            raise argparse.ArgumentTypeError(f"expected {n} comma-separated numbers")
        return vals
    return parse


def build_parser():
    parser = argparse.ArgumentParser(
        prog="relmorse",
        description="Relativistic Morse oscillator spectra, thermodynamics and "
                    "Pekeris mappings.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p, physics=True):
        p.add_argument("--out", help="table output path (default: stdout)")
        p.add_argument("--summary", help="JSON summary path")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        if physics:
            p.add_argument("--molecule", "--preset", dest="molecule",
                           help="stored molecule or preset name")
            p.add_argument("--alpha", type=float)
            p.add_argument("--delta", type=float)
            p.add_argument("--r-e", type=float, help="equilibrium length in Angstrom")
            p.add_argument("--mass-amu", type=float)
            p.add_argument("--hbar-omega", type=float, help="oscillator quantum in eV")
            p.add_argument("--gamma-ratio", type=float, help="hbar omega / m c^2")
            p.add_argument("--equation", choices=("kg", "dirac"), default="dirac")
            p.add_argument("--l", type=int, default=0)

    p = sub.add_parser("spectrum", help="closed-form bound levels")
    common(p)
    p.add_argument("--branch", choices=("plus", "minus", "both"), default="both")
    p.add_argument("--model", choices=("recast", "effective"), default="recast",
                   help="recast closed form (l = 0) or the effective Morse well")
    p.add_argument("--convention", choices=("reference", "derived"), default="reference")

    p = sub.add_parser("thermo", help="canonical-ensemble sweep and Schottky peaks")
    common(p)
    p.add_argument("--regime", choices=("nonrelativistic", "relativistic"))
    p.add_argument("--tmin", type=float, default=1.0)
    p.add_argument("--tmax", type=float, default=1e8)
    p.add_argument("--points-per-decade", type=int, default=2000)

    p = sub.add_parser("map", help="generalized Pekeris mapping of a coupling")
    common(p)
    p.add_argument("--branch", choices=("plus", "minus"), default="plus")
    p.add_argument("--coupling", default="morse",
                   help="morse, lj1269, homographic or table:<csv path>")
    p.add_argument("--homographic", type=_floats(4), default=[1.0, -1.0, 0.0, 1.0],
                   metavar="a,b,c,d")
    p.add_argument("--a2-zero", action="store_true",
                   help="drop the cubic term of the r_e/r expansion")
    p.add_argument("--span", type=float, default=0.1,
                   help="sampling half-width in units of r_e")
    p.add_argument("--samples", type=int, default=201)

    p = sub.add_parser("riccati", help="classify and sample dU/dr = a2 U^2 + a1 U + a0")
    common(p, physics=False)
    p.add_argument("--riccati", type=_floats(4), required=True, metavar="a2,a1,a0,K")
    p.add_argument("--sheet", type=int, choices=(1, -1), default=1)
    p.add_argument("--rmin", type=float, default=-1.0)
    p.add_argument("--rmax", type=float, default=1.0)
    p.add_argument("--samples", type=int, default=201)

    p = sub.add_parser("validate", help="oracle versus closed-form suite")
    common(p, physics=False)
    return parser


def config_from_args(args):
    params = {k: getattr(args, k, None)
              for k in ("alpha", "delta", "r_e", "mass_amu", "hbar_omega", "gamma_ratio")}
    return RunConfig(args.subcommand, getattr(args, "molecule", None), params,
                     args.out, args.summary, args.format)


def run(config, args, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        return COMMANDS[config.subcommand](config, args, Emitter(config, stdout, stderr))
    except RelMorseError as exc:
        dump_json(exc.as_dict(), stderr)
        return 2
    except OSError as exc:
        dump_json({"error": type(exc).__name__, "module": "cli",
                   "invariant": "referenced files exist", "message": str(exc)}, stderr)
        return 2


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        config = config_from_args(args)
    except RelMorseError as exc:
        dump_json(exc.as_dict(), sys.stderr)
        return 2
    return run(config, args)


def run_to_strings(argv):
    """Run in-process and capture (status, stdout, stderr); handy for tests."""
    so, se = io.StringIO(), io.StringIO()
    args = build_parser().parse_args(argv)
    try:
        config = config_from_args(args)
    except RelMorseError as exc:
        dump_json(exc.as_dict(), se)
        return 2, so.getvalue(), se.getvalue()
    status = run(config, args, so, se)
    return status, so.getvalue(), se.getvalue()


if __name__ == "__main__":
    sys.exit(main())
