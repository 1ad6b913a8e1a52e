"""Strongest entanglement versus coupling imbalance at fixed temperature.

Both ways of breaking the balance are reported: rescaling the rotational
frequency and rescaling the mirror radius.

    python scripts/imbalance_scan.py --temperature 0.5 --max 0.1 --points 21
"""
import argparse

import numpy as np

from rovib.params import PhysicalParams
from rovib.sweeps import SweepAxis, SweepSpec, run_sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--temperature", type=float, default=1.0)
    ap.add_argument("--max", type=float, default=0.05, help="largest imbalance in percent")
    ap.add_argument("--points", type=int, default=11)
    ap.add_argument("--threads", type=int, default=4)
    args = ap.parse_args()

    base = PhysicalParams(temperature=args.temperature)
    axis = SweepAxis("imbalance_percent", 0.0, args.max, args.points)
    table = {}
    for via in ("omega_phi", "radius"):
        spec = SweepSpec(axes=(axis,), baseline=base, balance_baseline=True, imbalance_via=via)
        table[via] = [r.E_extremum for r in run_sweep(spec, threads=args.threads)]
    print(f"{'imbalance %':>12} {'E (omega_phi)':>16} {'E (radius)':>16}")
    for i, x in enumerate(axis.values()):
        print(f"{x:12.5g} {table['omega_phi'][i]:16.6g} {table['radius'][i]:16.6g}")
    for via, E in table.items():
        E = np.array(E, dtype=float)
        print(f"{via}: monotone={bool(np.all(np.diff(E) >= 0))}, entangled at "
              f"{[float(x) for x, e in zip(axis.values(), E) if e < 1]}")


if __name__ == "__main__":
    main()
