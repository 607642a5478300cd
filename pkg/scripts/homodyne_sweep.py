"""Homodyne (dispersive) detection SNR versus pump for several atom detunings.

For each detuning the pump is scanned over several decades; the phase-shift
signal grows with pump until saturation erodes it, so each curve has an
interior optimum.  Writes one CSV per detuning and prints the optima next
to the analytic weak-pump limit for context.
"""
import argparse
import csv
import warnings
from pathlib import Path

import numpy as np

from cavdet import (
    MHZ,
    US,
    AtomParams,
    CavityParams,
    DriveParams,
    SaturationWarning,
    dispersive_saturation_pump,
    homodyne_report,
    snr_homodyne_weak_limit,
)

DETUNING_OVER_GAMMA = (100.0, 200.0, 400.0)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--g-mhz", type=float, default=12.0)
    ap.add_argument("--kappa-t-mhz", type=float, default=0.59)
    ap.add_argument("--kappa-loss-mhz", type=float, default=0.59)
    ap.add_argument("--tau-us", type=float, default=10.0)
    ap.add_argument("--points", type=int, default=200)
    ap.add_argument("--decades", type=float, default=4.0)
    ap.add_argument("--out-dir", default="out/homodyne_sweep")
    args = ap.parse_args()

    cavity = CavityParams(
        g_max=args.g_mhz * MHZ,
        kappa_t=args.kappa_t_mhz * MHZ,
        kappa_loss=args.kappa_loss_mhz * MHZ,
    )
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    print(f"{'det/Gam':>8} {'max S':>8} {'j_opt':>10} {'M_opt':>8} {'S_weak(j_opt)':>14}")
    base = AtomParams()
    for ratio in DETUNING_OVER_GAMMA:
        atom = AtomParams(delta_a=ratio * base.gamma)
        j_sat = dispersive_saturation_pump(atom, cavity)
        grid = np.logspace(
            np.log10(j_sat) - args.decades / 2,
            np.log10(j_sat) + args.decades / 2,
            args.points,
        )
        # deep into saturation on purpose; the warning is the point of the sweep
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", SaturationWarning)
            reps = [
                homodyne_report(atom, cavity, DriveParams(j, args.tau_us * US))
                for j in grid
            ]
        path = out_dir / f"homodyne_scan_det{ratio:g}G.csv"
        with path.open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["j_in_per_us", "snr", "m_scattered", "phase_rad", "j_over_jsat"])
            for j, r in zip(grid, reps):
                w.writerow([j / 1e6, r.snr, r.m_scattered, r.phase_shift, j / j_sat])
        best = max(range(len(reps)), key=lambda i: reps[i].snr)
        weak = snr_homodyne_weak_limit(atom, cavity, DriveParams(grid[best], args.tau_us * US))
        print(
            f"{ratio:8.0f} {reps[best].snr:8.3f} {grid[best] / 1e6:10.3g} "
            f"{reps[best].m_scattered:8.3f} {weak:14.3f}"
        )
    print(f"curves written to {out_dir}/")


if __name__ == "__main__":
    main()
