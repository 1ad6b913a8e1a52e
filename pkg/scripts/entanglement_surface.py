"""Entanglement surface E(omega, T) for the default mirror.

Writes a CSV with one row per (temperature, omega) pair.

    python scripts/entanglement_surface.py -o surface.csv --balance
"""
import argparse

from rovib.output import emit_results
from rovib.params import PhysicalParams
from rovib.spectra import mechanical_band
from rovib.sweeps import tune_couplings
from rovib.system import build_system


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("-o", "--output", default="surface.csv")
    ap.add_argument("--t-min", type=float, default=0.05)
    ap.add_argument("--t-max", type=float, default=2.0)
    ap.add_argument("--t-points", type=int, default=40)
    ap.add_argument("--balance", action="store_true", help="tune g_z = g_phi first")
    args = ap.parse_args()

    p = PhysicalParams()
    if args.balance:
        p = tune_couplings(p).apply(p)
    system = build_system(p)
    omegas = mechanical_band(system.derived)
    rows = []
    step = (args.t_max - args.t_min) / max(args.t_points - 1, 1)
    for k in range(args.t_points):
        T = args.t_min + k * step
        curve = system.curve(omegas, T)
        rows.extend((T, w, e) for w, e in zip(curve.omega.tolist(), curve.E.tolist()))
        print(f"T = {T:.4g} K  min E = {curve.E.min():.5g}")
    emit_results(rows, ("temperature_K", "omega_rad_s", "E"), "csv", args.output, p)


if __name__ == "__main__":
    main()
