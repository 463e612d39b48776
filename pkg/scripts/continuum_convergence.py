"""Relative gap between continuum and discrete Z as the ladder lengthens.

Synthetic ensembles with Xi = 4 n_max + 2, tau = 1, held at a sqrt(beta) = x.
"""

import argparse
import math

from morse_thermo.thermo import EnsembleSpec, log_partition_continuum, log_partition_discrete


def gap(n_max: int, x: float) -> float:
    ens = EnsembleSpec(Xi=4.0 * n_max + 2.0, tau=1.0, D_shift=0.0, n_max=n_max)
    T = (ens.a / x) ** 2
    lz_c = log_partition_continuum(ens, T)
    lz_d = log_partition_discrete(ens, ens.level_energies(), T)
    return abs(math.expm1(lz_c - lz_d))


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--x", type=float, nargs="+", default=[0.5, 1.0, 2.0])
    args = ap.parse_args()
    ladder = [10, 20, 40, 80, 160, 320, 640, 1280]
    print("n_max " + "".join(f"{'x=' + format(x, 'g'):>14}" for x in args.x))
    for n in ladder:
        print(f"{n:>5} " + "".join(f"{gap(n, x):>14.4e}" for x in args.x))


if __name__ == "__main__":
    main()
