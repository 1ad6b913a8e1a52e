"""Rebalance the couplings after a rotational frequency offset.

    python scripts/tune_demo.py --offset-hz 10 50 200
"""
import argparse
import math

from rovib.params import PhysicalParams
from rovib.sweeps import ratio_of, tune_couplings


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--offset-hz", type=float, nargs="+", default=[10.0, 100.0, 1000.0])
    args = ap.parse_args()
    base = PhysicalParams()
    base = tune_couplings(base).apply(base)
    print(f"{'offset Hz':>10} {'imbalance':>12} {'d_lambda pm':>12} {'d_L um':>10} {'n':>7} {'residual':>10}")
    for hz in args.offset_hz:
        p = base.replace(omega_phi=base.omega_z + 2 * math.pi * hz)
        res = tune_couplings(p)
        print(f"{hz:10g} {ratio_of(p) - 1:12.4e} {res.delta_wavelength * 1e12:12.4f} "
              f"{res.delta_length * 1e6:10.4f} {res.mode_index:7d} {res.residual_imbalance:10.2e}")


if __name__ == "__main__":
    main()
