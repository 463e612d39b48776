"""Peak absorption Im(eta) of the desk two-level pair against intensity."""

import argparse
from dataclasses import replace

import numpy as np

from morse_thermo.config import load_config
from morse_thermo.optics import fwhm, susceptibility_sweep, two_level
from morse_thermo.spectrum import bound_states


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--config", default="configs/desk.ini")
    ap.add_argument("--intensities", type=float, nargs="+",
                    default=[0.0, 1e-3, 1e-2, 0.1, 1.0, 10.0])
    args = ap.parse_args()
    cfg = load_config(args.config)
    states = bound_states(cfg.potential, cfg.ell, cfg.grid)
    E10, M10, M00, M11 = two_level(states, cfg.optics.lower, cfg.optics.upper,
                                   cfg.optics.field.e_charge)
    hbar = cfg.optics.field.hbar
    omegas = np.linspace(0.8 * E10 / hbar, 1.2 * E10 / hbar, 8001)
    print(f"E10 = {E10:.10g}, M10 = {M10:.10g}, M00 = {M00:.10g}, M11 = {M11:.10g}")
    print(f"{'I':>8} {'max Im eta1':>14} {'max Im eta':>14} {'hw at peak':>12} {'FWHM':>10}")
    for intensity in args.intensities:
        field = replace(cfg.optics.field, intensity=intensity)
        pts = susceptibility_sweep(field, E10, M10, M00, M11, omegas)
        im1 = np.array([p.eta1.imag for p in pts])
        im = np.array([p.eta_total.imag for p in pts])
        i = int(np.argmax(im))
        print(f"{intensity:>8g} {im1.max():>14.6g} {im.max():>14.6g} "
              f"{hbar * omegas[i]:>12.6f} {fwhm(omegas, im):>10.5f}")


if __name__ == "__main__":
    main()
