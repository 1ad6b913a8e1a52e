"""Command-line entry point: ``rovib <subcommand> [options]``.

Exit codes: 0 success, 2 configuration error, 3 numerical failure (unstable
model, solver or tuner failure), 4 I/O error.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .config import parse_config
from .errors import ConfigError, InvalidParams, NumericalFailure, RovibError, TargetUnreachable
from .linear import to_quadratures
from .oracles import characteristic_polynomial, routh_hurwitz_stable, run_selfcheck
from .output import emit_results, write_text
from .params import coupling_ratio
from .spectra import entangled_intervals, omega_grid
from .steady import BistabilityBranch, steady_state_fixed_detuning
from .sweeps import AXIS_NAMES, SweepAxis, SweepSpec, run_sweep, tune_couplings
from .system import build_system

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4


def _common(p):
    p.add_argument("--config", help="key=value parameter file")
    p.add_argument("-s", "--set", action="append", default=[], metavar="KEY=VALUE",
                   help="override a parameter (repeatable)")
    p.add_argument("-o", "--output", help="output file (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--no-timestamp", action="store_true", help="omit the timestamp header line")
    p.add_argument("--threads", type=int, default=None)


def build_parser():
    parser = argparse.ArgumentParser(prog="rovib", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("derive", help="derived rates and couplings (JSON)")
    _common(p)

    p = sub.add_parser("steady", help="steady-state branches (CSV)")
    _common(p)
    p.add_argument("--delta-range", nargs=3, type=float, metavar=("MIN", "MAX", "N"),
                   help="sweep the bare detuning (rad/s) with the bistable cubic")

    p = sub.add_parser("stability", help="drift-matrix eigenvalues and verdict (JSON)")
    _common(p)

    p = sub.add_parser("spectrum", help="E(omega) on a frequency grid (CSV + JSON summary)")
    _common(p)
    p.add_argument("--omega-min", type=float, help="rad/s (default 0.95 omega_phi)")
    p.add_argument("--omega-max", type=float, help="rad/s (default 1.05 omega_phi)")
    p.add_argument("--points", type=int, default=400)
    p.add_argument("--no-dense", action="store_true", help="skip the dense mechanical-band patch")
    p.add_argument("--summary", help="summary JSON path (default: OUTPUT.summary.json, or stderr)")

    p = sub.add_parser("sweep", help="one- or two-axis parameter sweep (CSV)")
    _common(p)
    p.add_argument("--axis", action="append", required=True, metavar="NAME:MIN:MAX:POINTS[:log]",
                   help=f"axis name in {', '.join(AXIS_NAMES)}")
    p.add_argument("--balance", action="store_true", help="tune the baseline couplings equal first")
    p.add_argument("--imbalance-via", choices=("omega_phi", "radius"), default="omega_phi")

    p = sub.add_parser("tune", help="balance the couplings via wavelength and cavity length (JSON)")
    _common(p)
    p.add_argument("--window", type=float, default=5e-9, help="wavelength half-window (m)")
    p.add_argument("--length-window", type=float, default=200e-6, help="cavity length half-window (m)")

    p = sub.add_parser("selfcheck", help=argparse.SUPPRESS)
    _common(p)
    return parser


def parse_axis(text: str) -> SweepAxis:
    parts = text.split(":")
    if len(parts) not in (4, 5):
        raise ConfigError(f"axis must be NAME:MIN:MAX:POINTS[:log], got {text!r}")
    try:
        return SweepAxis(parts[0], float(parts[1]), float(parts[2]), int(parts[3]),
                         parts[4] if len(parts) == 5 else "linear")
    except ValueError as exc:
        raise ConfigError(f"bad axis {text!r}: {exc}") from None


def _json_only(args):
    if args.format == "csv":
        raise ConfigError(f"{args.command} produces JSON only")


def _emit_json(args, cfg, doc):
    doc = {"config": cfg.params.as_dict(), "config_sha256": cfg.config_hash(), **doc}
    write_text(json.dumps(doc, indent=2) + "\n", args.output)


def cmd_derive(args, cfg):
    _json_only(args)
    system = build_system(cfg.params)
    d = system.derived
    _emit_json(args, cfg, {
        "derived": d.as_dict(),
        "coupling_ratio": coupling_ratio(d, cfg.params),
        "g_ratio": d.g_z / d.g_phi,
        "photon_number": system.steady.photon_number,
        "effective_detuning": system.steady.effective_detuning,
    })
    return EXIT_OK


STEADY_COLUMNS = ("delta_rad_s", "P_in_W", "photon_number", "z_s", "phi_s", "stable")


def cmd_steady(args, cfg):
    p = cfg.params
    system = build_system(p)
    d = system.derived
    rows = []
    if args.delta_range is not None:
        lo, hi, n = args.delta_range
        deltas = np.linspace(lo, hi, int(n))
    elif p.detuning_mode.value == "FIXED":
        deltas = [p.detuning_value]
    else:
        deltas = None
    if deltas is None:
        n_ph = system.steady.photon_number
        branches = [(p.detuning_value + n_ph * d.G, BistabilityBranch(n_ph, 1, True))]
    else:
        branches = [(float(dl), b) for dl in deltas for b in steady_state_fixed_detuning(d, float(dl))]
    for delta, b in branches:
        n_ph = b.photon_number
        rows.append((delta, p.input_power, n_ph, d.g_z * n_ph / d.omega_z, -d.g_phi * n_ph / d.omega_phi,
                     b.stable))
    emit_results(rows, STEADY_COLUMNS, args.format or "csv", args.output, p, not args.no_timestamp)
    return EXIT_OK


def cmd_stability(args, cfg):
    _json_only(args)
    system = build_system(cfg.params)
    m = system.model
    A_quad, _ = to_quadratures(m)
    scale = max(cfg.params.omega_z, cfg.params.omega_phi)
    _emit_json(args, cfg, {
        "eigenvalues": [[float(e.real), float(e.imag)] for e in m.eigenvalues],
        "max_real_part": float(np.max(m.eigenvalues.real)),
        "stable": m.stable,
        "routh_hurwitz_stable": routh_hurwitz_stable(characteristic_polynomial(A_quad, scale)),
    })
    return EXIT_OK


SPECTRUM_COLUMNS = ("omega_rad_s", "E", "V_Ru", "V_Rv", "D")


def cmd_spectrum(args, cfg):
    p = cfg.params
    system = build_system(p)
    system.model.require_stable()
    lo = args.omega_min if args.omega_min is not None else 0.95 * p.omega_phi
    hi = args.omega_max if args.omega_max is not None else 1.05 * p.omega_phi
    grid = omega_grid(system.derived, lo, hi, args.points, dense=not args.no_dense)
    curve = system.curve(grid)
    w_peak, e_min = curve.peak()
    intervals = entangled_intervals(curve.omega, curve.E)
    around = [iv for iv in intervals if iv[0] <= w_peak <= iv[1]]
    summary = {
        "omega_peak": w_peak,
        "E_min": e_min,
        "entangled_interval": list(around[0]) if around else None,
        "entangled_intervals": [list(iv) for iv in intervals],
        "bandwidth_rad_s": (around[0][1] - around[0][0]) if around else 0.0,
        "temperature": p.temperature,
    }
    rows = list(zip(curve.omega.tolist(), curve.E.tolist(), curve.V_Ru.tolist(), curve.V_Rv.tolist(),
                    curve.D.tolist()))
    fmt = args.format or "csv"
    emit_results(rows, SPECTRUM_COLUMNS, fmt, args.output, p, not args.no_timestamp,
                 summary=summary if fmt == "json" else None)
    if fmt == "csv":
        text = json.dumps(summary, indent=2) + "\n"
        target = args.summary or (args.output + ".summary.json" if args.output not in (None, "-") else None)
        if target is None:
            sys.stderr.write(text)
        else:
            write_text(text, target)
    return EXIT_OK


def cmd_sweep(args, cfg):
    if len(args.axis) > 2:
        raise ConfigError("at most two --axis options")
    axes = tuple(parse_axis(a) for a in args.axis)
    spec = SweepSpec(axes=axes, baseline=cfg.params, balance_baseline=args.balance,
                     imbalance_via=args.imbalance_via)
    rows = run_sweep(spec, threads=args.threads)
    columns = tuple(a.name for a in axes) + ("E_extremum", "omega_peak_rad_s", "stable_flag")
    out = [r.values + (r.E_extremum, r.omega_peak, r.stable) for r in rows]
    extra = {f"axis{i + 1}": f"{a.name}:{a.min!r}:{a.max!r}:{a.points}:{a.spacing}" for i, a in enumerate(axes)}
    extra.update(balance=args.balance, imbalance_via=args.imbalance_via)
    emit_results(out, columns, args.format or "csv", args.output, cfg.params, not args.no_timestamp, extra)
    return EXIT_OK


def cmd_tune(args, cfg):
    _json_only(args)
    try:
        result = tune_couplings(cfg.params, args.window, args.length_window)
        code, reached = EXIT_OK, True
    except TargetUnreachable as exc:
        result, code, reached = exc.result, EXIT_NUMERIC, False
    _emit_json(args, cfg, {**result.as_dict(), "reached": reached})
    return code


def cmd_selfcheck(args, cfg):
    reports = run_selfcheck(cfg.params)
    write_text("".join(r.line() + "\n" for r in reports), args.output)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_NUMERIC


COMMANDS = {
    "derive": cmd_derive, "steady": cmd_steady, "stability": cmd_stability, "spectrum": cmd_spectrum,
    "sweep": cmd_sweep, "tune": cmd_tune, "selfcheck": cmd_selfcheck,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = parse_config(args.config, args.set, output_path=args.output,
                           output_format=args.format or "csv", timestamp=not args.no_timestamp,
                           threads=args.threads)
        return COMMANDS[args.command](args, cfg)
    except (ConfigError, InvalidParams) as exc:
        print(f"rovib: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericalFailure, RovibError) as exc:
        print(f"rovib: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"rovib: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
