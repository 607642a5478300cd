"""Resonant detection SNR versus pump rate for a ladder of cavity losses.

Scans the pump over several decades around the saturation point for a set
of internal loss rates (mirror transmission fixed at half the loss, which
is close to optimal for all of them) and writes one CSV per loss value
plus a summary of the per-curve optima.
"""
import argparse
import csv
from pathlib import Path

import numpy as np

from cavdet import (
    MHZ,
    US,
    AtomParams,
    CavityParams,
    DriveParams,
    cooperativity,
    saturation_pump,
    snr_resonant,
)

LOSS_LADDER_MHZ = (6.0, 14.0, 22.0, 38.0, 86.0)


def scan_one(atom, cavity, tau, points, decades):
    j_sat = saturation_pump(atom, cavity)
    grid = np.logspace(
        np.log10(j_sat) - decades / 2, np.log10(j_sat) + decades / 2, points
    )
    return grid, [snr_resonant(atom, cavity, DriveParams(j, tau)) for j in grid]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--g-mhz", type=float, default=12.0)
    ap.add_argument("--tau-us", type=float, default=10.0)
    ap.add_argument("--points", type=int, default=200)
    ap.add_argument("--decades", type=float, default=4.0)
    ap.add_argument("--out-dir", default="out/pump_ladder")
    args = ap.parse_args()

    atom = AtomParams()
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    print(f"{'loss':>6} {'kT':>6} {'C':>7} {'max S':>8} {'j_opt':>10} {'M_opt':>8}")
    print(f"{'MHz':>6} {'MHz':>6} {'':>7} {'':>8} {'1/us':>10} {'':>8}")
    for loss_mhz in LOSS_LADDER_MHZ:
        cavity = CavityParams(
            g_max=args.g_mhz * MHZ,
            kappa_t=loss_mhz / 2 * MHZ,
            kappa_loss=loss_mhz * MHZ,
        )
        grid, reps = scan_one(atom, cavity, args.tau_us * US, args.points, args.decades)
        path = out_dir / f"pump_scan_loss{loss_mhz:g}MHz.csv"
        with path.open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["j_in_per_us", "snr", "m_scattered", "n_out_atom", "saturation"])
            for j, r in zip(grid, reps):
                w.writerow([j / 1e6, r.snr, r.m_scattered, r.n_out_atom, r.saturation])
        best = max(range(len(reps)), key=lambda i: reps[i].snr)
        print(
            f"{loss_mhz:6.0f} {loss_mhz / 2:6.1f} {cooperativity(atom, cavity):7.2f} "
            f"{reps[best].snr:8.2f} {grid[best] / 1e6:10.3g} {reps[best].m_scattered:8.2f}"
        )
    print(f"curves written to {out_dir}/")


if __name__ == "__main__":
    main()
