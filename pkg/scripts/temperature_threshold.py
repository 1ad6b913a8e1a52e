"""Temperature below which the balanced default mirror is entangled.

Solves min_w E(w; T) = 1 for T with Brent's method, optionally at several
input powers.

    python scripts/temperature_threshold.py --power 1e-3 2e-3 5e-3
"""
import argparse

from scipy.optimize import brentq

from rovib.params import PhysicalParams
from rovib.sweeps import tune_couplings
from rovib.system import build_system


def threshold(system, lo=1e-3, hi=100.0):
    f = lambda T: system.strongest_entanglement(T)[1] - 1.0
    if f(lo) >= 0:
        return None
    if f(hi) < 0:
        return float("inf")
    return brentq(f, lo, hi, xtol=1e-6)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--power", type=float, nargs="+", default=[1e-3])
    args = ap.parse_args()
    base = PhysicalParams()
    base = tune_couplings(base).apply(base)
    for P in args.power:
        system = build_system(base.replace(input_power=P))
        if not system.stable:
            print(f"P_in = {P:g} W: unstable")
            continue
        print(f"P_in = {P:g} W: entangled below T = {threshold(system):.5g} K")


if __name__ == "__main__":
    main()
