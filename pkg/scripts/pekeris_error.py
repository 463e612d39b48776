"""Closed-form (Pekeris) levels against the true-centrifugal oracle, per ell."""

import argparse

import numpy as np

from morse_thermo.spectrum import (
    GridSpec,
    NoBoundChannel,
    OracleMode,
    PotentialSpec,
    energies,
    ode_oracle,
)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--V", type=float, default=50.0, help="V1 = V2")
    ap.add_argument("--alpha", type=float, default=1.0)
    ap.add_argument("--ell-max", type=int, default=4)
    args = ap.parse_args()
    spec = PotentialSpec(V1=args.V, V2=args.V, alpha=args.alpha)
    grid = GridSpec(-4.0 / args.alpha, 150.0 / args.alpha, 40001)

    print(f"V1 = V2 = {args.V:g}, alpha = {args.alpha:g}")
    print(f"{'ell':>3} {'levels':>12} {'E0 closed':>12} {'E0 true':>12} {'max rel dev':>12}")
    for ell in range(args.ell_max + 1):
        true = ode_oracle(spec, ell, OracleMode.PHYSICAL_CENTRIFUGAL, grid)
        try:
            closed = energies(spec, ell)
        except NoBoundChannel:
            print(f"{ell:>3} {'0/' + str(len(true)):>12} {'-':>12} {true[0] if true else float('nan'):>12.6f}")
            continue
        m = min(len(true), len(closed))
        dev = np.max(np.abs(np.array(closed[:m]) - true[:m]) / np.abs(true[:m]))
        print(f"{ell:>3} {f'{len(closed)}/{len(true)}':>12} {closed[0]:>12.6f} {true[0]:>12.6f} {dev:>12.3e}")


if __name__ == "__main__":
    main()
