"""``morse-thermo`` command line: spectrum | thermo | optics | validate.

Exit codes: 0 success, 1 bad config, 2 no bound channel (or analytic path
unavailable), 3 numerical failure during a thermo sweep, 4 fewer than two
bound states for optics, 5 a validation check failed.
"""

from __future__ import annotations

import argparse
import io
import math
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from morse_thermo.config import ConfigError, RunConfig, SweepSpec, load_config
from morse_thermo.optics import susceptibility_sweep, two_level
from morse_thermo.spectrum import (
    AnalyticPathUnavailable,
    GridTooCoarse,
    NoBoundChannel,
    OracleMode,
    bound_states,
    channel_params,
    energies,
    ode_oracle,
)
from morse_thermo.thermo import EnsembleSpec, SweepError, ThermoMethod, thermo_sweep
from morse_thermo.validate import FAIL, run_checks

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NO_CHANNEL = 2
EXIT_NUMERIC = 3
EXIT_TOO_FEW_STATES = 4
EXIT_VALIDATION = 5

SPECTRUM_HEADER = ("n", "ell", "E", "k_exponent")
THERMO_HEADER = ("T", "beta", "Z_log", "U", "F", "S", "C_v", "method")
OPTICS_HEADER = ("omega", "hbar_omega", "Re_eta1", "Im_eta1", "Re_eta3", "Im_eta3",
                 "Re_eta", "Im_eta")
VALIDATE_HEADER = ("check", "status", "deviation", "tolerance", "detail")
FIGURES = {
    "fig1_U.csv": "U",
    "fig2_C.csv": "C_v",
    "fig3_F.csv": "F",
    "fig4_S.csv": "S",
}


def fmt(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return str(value).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g")


def write_csv(rows, header, out: Path | None) -> None:
    buf = io.StringIO(newline="")
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(fmt(v) for v in row) + "\n")
    text = buf.getvalue()
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_bytes(text.encode("utf-8"))


def read_csv(path: Path) -> tuple[list[str], list[list[str]]]:
    lines = path.read_text(encoding="utf-8").splitlines()
    return lines[0].split(","), [line.split(",") for line in lines[1:]]


def _diag(message: str) -> None:
    print(message, file=sys.stderr)


def _out_path(args) -> Path | None:
    return Path(args.out) if args.out else None


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------


def cmd_spectrum(cfg: RunConfig, args) -> int:
    spec, ell = cfg.potential, cfg.ell
    try:
        cp = channel_params(spec, ell)
        rows = [(n, ell, e, cp.k_exponent(n)) for n, e in enumerate(energies(spec, ell))]
    except NoBoundChannel as exc:
        _diag(f"no bound channel: lambda_ell = {exc.lambda_ell:.10g} <= 1/2 (ell = {ell})")
        return EXIT_NO_CHANNEL
    except AnalyticPathUnavailable as exc:
        _diag(f"{exc}; reporting finite-difference oracle levels")
        try:
            levels = ode_oracle(spec, ell, OracleMode.PHYSICAL_CENTRIFUGAL, cfg.grid)
        except GridTooCoarse as err:
            _diag(f"GridTooCoarse: {err}")
            return EXIT_NUMERIC
        eps = spec.energy_scale
        rows = [(n, ell, e, math.sqrt(-e / eps) / spec.alpha) for n, e in enumerate(levels)]
        if not rows:
            _diag("no bound channel: the oracle found no bound level")
            return EXIT_NO_CHANNEL
    write_csv(rows, SPECTRUM_HEADER, _out_path(args))
    return EXIT_OK


def _analytic_channel(cfg: RunConfig):
    try:
        return channel_params(cfg.potential, cfg.ell), None
    except NoBoundChannel as exc:
        return None, f"no bound channel: lambda_ell = {exc.lambda_ell:.10g} <= 1/2 (ell = {cfg.ell})"
    except AnalyticPathUnavailable as exc:
        return None, f"{exc}; only 'spectrum' and 'validate' support this case"


def _thermo_rows(points):
    return [(p.T, p.beta, p.log_Z, p.U, p.F, p.S, p.C_v, p.method.value) for p in points]


def _write_figures(points, out: Path | None) -> None:
    folder = out.parent if out is not None else Path.cwd()
    for name, attr in FIGURES.items():
        write_csv([(p.T, getattr(p, attr)) for p in points], ("T", attr), folder / name)


def cmd_thermo(cfg: RunConfig, args) -> int:
    cp, why = _analytic_channel(cfg)
    if cp is None:
        _diag(why)
        return EXIT_NO_CHANNEL
    spec = cfg.potential
    ens = EnsembleSpec.from_channel(cp, spec.k_B, cfg.n_particles, cfg.high_t_approx)
    out = _out_path(args)
    try:
        points = thermo_sweep(ens, energies(spec, cfg.ell), cfg.t_sweep.values(), cfg.method)
        status = EXIT_OK
    except SweepError as exc:
        _diag(f"numerical failure at T = {fmt(exc.T)}: {exc.cause}")
        points, status = exc.partial, EXIT_NUMERIC
    write_csv(_thermo_rows(points), THERMO_HEADER, out)
    if args.figures:
        _write_figures(points, out)
    return status


def cmd_optics(cfg: RunConfig, args) -> int:
    cp, why = _analytic_channel(cfg)
    if cp is None:
        _diag(why)
        return EXIT_NO_CHANNEL
    oc = cfg.optics
    if cp.n_max + 1 < 2 or max(oc.lower, oc.upper) > cp.n_max:
        _diag(f"two-level response needs levels {oc.lower} and {oc.upper}; "
              f"channel has {cp.n_max + 1} bound state(s)")
        return EXIT_TOO_FEW_STATES
    states = bound_states(cfg.potential, cfg.ell, cfg.grid)
    E10, M10, M00, M11 = two_level(states, oc.lower, oc.upper, oc.field.e_charge)
    hbar = oc.field.hbar
    sweep = oc.sweep or SweepSpec(0.5 * abs(E10) / hbar, 1.5 * abs(E10) / hbar, 2001)
    pts = susceptibility_sweep(oc.field, E10, M10, M00, M11, sweep.values())
    rows = [(p.omega, hbar * p.omega, p.eta1.real, p.eta1.imag, p.eta3.real, p.eta3.imag,
             p.eta_total.real, p.eta_total.imag) for p in pts]
    write_csv(rows, OPTICS_HEADER, _out_path(args))
    return EXIT_OK


def cmd_validate(cfg: RunConfig, args) -> int:
    results = run_checks(cfg)
    width = max(len(r.name) for r in results)
    for r in results:
        line = f"{r.status.upper():5s} {r.name:<{width}}  deviation={r.deviation:.3g}"
        if not math.isnan(r.tolerance):
            line += f"  tolerance={r.tolerance:.3g}"
        if r.detail:
            line += f"  {r.detail}"
        _diag(line)
    rows = [(r.name, r.status, r.deviation, r.tolerance, r.detail.replace(",", ";"))
            for r in results]
    write_csv(rows, VALIDATE_HEADER, _out_path(args))
    failed = [r for r in results if r.status == FAIL]
    _diag(f"{len(results) - len(failed)}/{len(results)} checks without failure")
    return EXIT_VALIDATION if failed else EXIT_OK


COMMANDS = {
    "spectrum": cmd_spectrum,
    "thermo": cmd_thermo,
    "optics": cmd_optics,
    "validate": cmd_validate,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="run configuration file")
    common.add_argument("--out", help="CSV output path (default: stdout)")
    common.add_argument("--method", choices=[m.value for m in ThermoMethod],
                        help="thermodynamics route (overrides the config)")
    common.add_argument("--figures", action="store_true",
                        help="also write fig1_U.csv ... fig4_S.csv next to --out")
    common.add_argument("--high-t-approx", action="store_true",
                        help="drop the exp(-beta D) factor")
    common.add_argument("--n-particles", type=int, help="non-interacting copies, Z -> Z**N")
    parser = argparse.ArgumentParser(prog="morse-thermo", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.method:
            cfg = replace(cfg, method=ThermoMethod(args.method))
        if args.high_t_approx:
            cfg = replace(cfg, high_t_approx=True)
        if args.n_particles is not None:
            if args.n_particles < 1:
                raise ConfigError(f"--n-particles must be positive, got {args.n_particles}")
            cfg = replace(cfg, n_particles=args.n_particles)
    except ConfigError as exc:
        _diag(f"config error: {exc}")
        return EXIT_CONFIG
    return COMMANDS[args.command](cfg, args)


if __name__ == "__main__":
    sys.exit(main())
