"""U, C_v, F, S against T for every thermodynamics route, one CSV per quantity.

    python scripts/figure_curves.py --config configs/desk.ini --out-dir results/curves
"""

import argparse
from pathlib import Path

from morse_thermo.cli import write_csv
from morse_thermo.config import load_config
from morse_thermo.spectrum import channel_params, energies
from morse_thermo.thermo import EnsembleSpec, ThermoMethod, thermo_sweep

QUANTITIES = ("U", "C_v", "F", "S")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--config", default="configs/desk.ini")
    ap.add_argument("--out-dir", default="results/curves")
    args = ap.parse_args()

    cfg = load_config(args.config)
    spec = cfg.potential
    ens = EnsembleSpec.from_channel(channel_params(spec, cfg.ell), spec.k_B, cfg.n_particles,
                                    cfg.high_t_approx)
    levels = energies(spec, cfg.ell)
    T = cfg.t_sweep.values()
    sweeps = {m: thermo_sweep(ens, levels, T, m) for m in ThermoMethod}

    out = Path(args.out_dir)
    header = ("T",) + tuple(m.value for m in ThermoMethod)
    for q in QUANTITIES:
        rows = [(t,) + tuple(getattr(sweeps[m][i], q) for m in ThermoMethod)
                for i, t in enumerate(T)]
        write_csv(rows, header, out / f"{q}.csv")
    hot = {m.value: sweeps[m][-1] for m in ThermoMethod}
    print(f"{len(T)} temperatures, {len(levels)} levels; files in {out}/")
    for name, p in hot.items():
        print(f"  T={p.T:g} {name:>19s}: U={p.U:.6f} C_v={p.C_v:.3e} S={p.S:.6f}")


if __name__ == "__main__":
    main()
