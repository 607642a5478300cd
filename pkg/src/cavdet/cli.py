"""Command-line front end: scans, the transit ensemble, and the design calculator.

Every output is machine-readable (CSV with # metadata lines, or JSON) and
byte-identical across runs and thread counts for a fixed config and seed.
Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import __version__
from .config import config_digest, load_config
from .errors import CavdetError, ConfigError
from .fiber_cavity import FiberCavityDesign, derive, v_number
from .homodyne_detection import dispersive_saturation_pump, homodyne_report
from .motion import spatial_averages
from .params import MHZ, UM, US, AtomParams, DriveParams
from .resonant_detection import saturation_pump, snr_resonant
from .steady_state import empty_cavity_state, solve_stationary
from .trajectory_sim import run_ensemble


@dataclass(frozen=True)
class ScanSpec:
    """One scan axis: variable name, bounds, point count, spacing."""

    variable: str
    lo: float
    hi: float
    points: int
    log: bool = True

    def __post_init__(self):
        if self.points < 2:
            raise ConfigError("scan needs at least 2 points")
        if self.hi <= self.lo:
            raise ConfigError("scan bounds must satisfy lo < hi")
        if self.log and self.lo <= 0:
            raise ConfigError("log scan bounds must be positive")

    def grid(self) -> np.ndarray:
        if self.log:
            return np.logspace(math.log10(self.lo), math.log10(self.hi), self.points)
        return np.linspace(self.lo, self.hi, self.points)


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return "%.12g" % value


def _write_csv(path, meta: list[tuple[str, str]], header: list[str], rows) -> None:
    lines = [f"# {k}: {v}" for k, v in meta]
    lines.append(",".join(header))
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    Path(path).write_text("\n".join(lines) + "\n", newline="\n")


def _write_json(path, payload: dict) -> None:
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", newline="\n")


def _pump_grid(args, default_center: float) -> ScanSpec:
    if args.jmin_per_us is not None and args.jmax_per_us is not None:
        lo, hi = args.jmin_per_us * 1e6, args.jmax_per_us * 1e6
    elif args.jmin_per_us is None and args.jmax_per_us is None:
        half = 10.0 ** (args.decades / 2.0)
        lo, hi = default_center / half, default_center * half
    else:
        raise ConfigError("give both --jmin-per-us and --jmax-per-us, or neither")
    return ScanSpec(variable="j_in", lo=lo, hi=hi, points=args.points)


def _cmd_steady(args) -> int:
    cfg = load_config(args.config)
    g_local = None if args.g_frac is None else args.g_frac * cfg.cavity.g_max
    state = solve_stationary(cfg.atom, cfg.cavity, cfg.drive, g_local=g_local)
    empty = empty_cavity_state(cfg.cavity, cfg.drive)
    out_rate = 2.0 if cfg.cavity.asymmetric_input else 1.0
    payload = {
        "version": __version__,
        "config_sha256": cfg.digest,
        "n_photons": state.n_photons,
        "n_photons_empty": empty.n_photons,
        "rho11": state.rho11,
        "gamma_eff_mhz": state.gamma_eff / MHZ,
        "light_shift_mhz": state.light_shift / MHZ,
        "branch_count": state.branch_count,
        "all_roots": list(state.all_roots),
        "n_out": out_rate * state.n_photons * cfg.cavity.kappa_t * cfg.drive.tau,
        "n_out_empty": out_rate * empty.n_photons * cfg.cavity.kappa_t * cfg.drive.tau,
    }
    _write_json(args.out, payload)
    print(
        f"N={state.n_photons:.6g} with atom vs {empty.n_photons:.6g} empty "
        f"({state.branch_count} branch(es)) -> {args.out}"
    )
    return 0


def _cmd_scan_pump(args) -> int:
    cfg = load_config(args.config)
    spec = _pump_grid(args, saturation_pump(cfg.atom, cfg.cavity))
    rows = []
    for j in spec.grid():
        rep = snr_resonant(cfg.atom, cfg.cavity, DriveParams(j_in=j, tau=cfg.drive.tau))
        rows.append(
            (j / 1e6, rep.n_out_empty, rep.n_out_atom, rep.snr, rep.m_scattered, rep.saturation)
        )
    best = max(rows, key=lambda r: r[3])
    _write_csv(
        args.out,
        [("version", __version__), ("command", "scan-pump"), ("config_sha256", cfg.digest)],
        [
            "j_in [1/us]",
            "N_out_empty [photons]",
            "N_out_atom [photons]",
            "S [dimensionless]",
            "M [photons]",
            "saturation [dimensionless]",
        ],
        rows,
    )
    print(f"wrote {args.out}: {len(rows)} points, max S={best[3]:.4g} at j_in={best[0]:.4g}/us")
    return 0


def _cmd_homodyne_scan(args) -> int:
    cfg = load_config(args.config)
    spec = _pump_grid(args, dispersive_saturation_pump(cfg.atom, cfg.cavity))
    rows = []
    for j in spec.grid():
        rep = homodyne_report(cfg.atom, cfg.cavity, DriveParams(j_in=j, tau=cfg.drive.tau))
        rows.append(
            (j / 1e6, rep.phase_shift, rep.snr, rep.m_scattered, rep.n_out, rep.small_angle_valid)
        )
    best = max(rows, key=lambda r: r[2])
    _write_csv(
        args.out,
        [("version", __version__), ("command", "homodyne-scan"), ("config_sha256", cfg.digest)],
        [
            "j_in [1/us]",
            "phase_shift [rad]",
            "S_hom [dimensionless]",
            "M [photons]",
            "N_out [photons]",
            "small_angle_valid [bool]",
        ],
        rows,
    )
    print(
        f"wrote {args.out}: {len(rows)} points, max S_hom={best[2]:.4g} at j_in={best[0]:.4g}/us"
    )
    return 0


def _cmd_motion_averages(args) -> int:
    cfg = load_config(args.config)
    if args.jmin_per_us is None and args.jmax_per_us is None:
        lo, hi = cfg.drive.j_in / 10.0, cfg.drive.j_in * 10.0
    elif args.jmin_per_us is not None and args.jmax_per_us is not None:
        lo, hi = args.jmin_per_us * 1e6, args.jmax_per_us * 1e6
    else:
        raise ConfigError("give both --jmin-per-us and --jmax-per-us, or neither")
    spec = ScanSpec(variable="j_in", lo=lo, hi=hi, points=args.points)
    rows = []
    for j in spec.grid():
        av = spatial_averages(cfg.atom, cfg.cavity, DriveParams(j_in=j, tau=cfg.drive.tau))
        rows.append((j / 1e6, av.s_bar, av.m_bar, av.d_bar, av.delta_p, av.delta_z))
    _write_csv(
        args.out,
        [("version", __version__), ("command", "motion-averages"), ("config_sha256", cfg.digest)],
        [
            "j_in [1/us]",
            "S_bar [dimensionless]",
            "M_bar [photons]",
            "D_bar [kg^2 m^2/s^3]",
            "delta_p [hbar k]",
            "delta_z [m]",
        ],
        rows,
    )
    print(f"wrote {args.out}: {len(rows)} pump points")
    return 0


def _cmd_simulate(args) -> int:
    cfg = load_config(args.config)
    sim = cfg.sim
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.atoms is not None:
        overrides["n_atoms"] = args.atoms
    if args.threshold is not None:
        overrides["threshold"] = args.threshold
    if args.window_us is not None:
        overrides["window"] = args.window_us * US
    if overrides:
        sim = replace(sim, **overrides)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    resolved = dict(cfg.resolved)
    resolved["sim"] = dict(resolved["sim"])
    resolved["sim"].update(
        {
            "seed": sim.seed,
            "n_atoms": sim.n_atoms,
            "threshold": sim.threshold,
            "window_us": sim.window / US,
        }
    )
    digest = config_digest(resolved)
    meta = [
        ("version", __version__),
        ("command", "simulate"),
        ("config_sha256", digest),
        ("seed", str(sim.seed)),
    ]
    step = max(1, args.decimate)
    traj_lines = [f"# {k}: {v}" for k, v in meta]
    traj_lines.append("trajectory,t [us],x [um],y [um],z [um],N [photons]")
    click_lines = [f"# {k}: {v}" for k, v in meta]
    click_lines.append("trajectory,t [us]")

    def sink(index, rec):
        for i in range(0, rec.times.size, step):
            traj_lines.append(
                f"{index},"
                + ",".join(
                    _fmt(v)
                    for v in (
                        rec.times[i] / US,
                        rec.position[i, 0] / UM,
                        rec.position[i, 1] / UM,
                        rec.position[i, 2] / UM,
                        rec.n_photons[i],
                    )
                )
            )
        click_lines.extend(f"{index},{_fmt(t / US)}" for t in rec.click_times)

    report = run_ensemble(
        cfg.atom, cfg.cavity, cfg.drive, cfg.guide, sim, workers=args.threads, record_sink=sink
    )
    (out_dir / "trajectories.csv").write_text("\n".join(traj_lines) + "\n", newline="\n")
    (out_dir / "clicks.csv").write_text("\n".join(click_lines) + "\n", newline="\n")
    _write_json(
        out_dir / "report.json",
        {
            "version": __version__,
            "config_sha256": digest,
            "config": resolved,
            "seed": sim.seed,
            "n_atoms": sim.n_atoms,
            "include_recoil": sim.include_recoil,
            "threshold": sim.threshold,
            "window_us": sim.window / US,
            "efficiency": report.efficiency,
            "dark_rate_per_s": report.dark_rate,
            "dark_rate_ci_per_s": list(report.dark_rate_ci),
            "dark_rate_convention_range_per_s": list(report.dark_rate_convention_range),
            "mean_m": report.mean_m,
            "detections": [[i, t / US] for i, t in report.detections],
        },
    )
    print(
        f"efficiency {report.efficiency:.3f}, dark rate {report.dark_rate:.0f}/s, "
        f"mean M {report.mean_m:.1f} ({sim.n_atoms} atoms) -> {out_dir}"
    )
    return 0


def _cmd_design_cavity(args) -> int:
    if (args.length_mm is None) == (args.length_half_waves is None):
        raise ConfigError("give exactly one of --length-mm or --length-half-waves")
    if (args.mode_index is None) == (args.gap_um is None):
        raise ConfigError("give exactly one of --mode-index or --gap-um")
    n = args.n_core
    if args.length_mm is not None:
        length = args.length_mm * 1e-3
    else:
        length = args.length_half_waves * (args.lambda_nm * 1e-9) / (2.0 * n)
    design = FiberCavityDesign(
        fiber_length=length,
        half_gap=0.0 if args.gap_um is None else 0.5 * args.gap_um * UM,
        core_radius=0.5 * args.core_um * UM,
        n_core=args.n_core,
        n_clad=args.n_clad,
        wavelength0=args.lambda_nm * 1e-9,
        mirror_transmission=args.transmission,
    )
    atom = AtomParams(gamma=args.gamma_mhz * MHZ)
    derived = derive(design, atom, mode_index=args.mode_index)
    extra = args.extra_loss_mhz * MHZ
    payload = {
        "version": __version__,
        "inputs": {
            "core_um": args.core_um,
            "n_core": args.n_core,
            "n_clad": args.n_clad,
            "lambda_nm": args.lambda_nm,
            "length_mm": length / 1e-3,
            "transmission": args.transmission,
            "gamma_mhz": args.gamma_mhz,
            "extra_loss_mhz": args.extra_loss_mhz,
        },
        "v_number": v_number(design),
        "w0_um": derived.waist / UM,
        "rayleigh_um": derived.rayleigh / UM,
        "gap_um": 2.0 * derived.half_gap / UM,
        "mode_index": derived.mode_index,
        "q_modulus": derived.q_modulus,
        "q_phase_rad": derived.q_phase,
        "kappa_gap_mhz": derived.kappa_gap / MHZ,
        "kappa_t_mhz": derived.kappa_t / MHZ,
        "g_mhz": derived.g_max / MHZ,
        "gap_amplitude_ratio": derived.gap_amplitude_ratio,
        "cavity": {
            "g_mhz": derived.g_max / MHZ,
            "kappa_t_mhz": derived.kappa_t / MHZ,
            "kappa_loss_mhz": (derived.kappa_gap + extra) / MHZ,
            "delta_c_mhz": 0.0,
            "waist_um": derived.waist / UM,
            "length_mm": length / 1e-3,
        },
    }
    _write_json(args.out, payload)
    print(
        f"w0={payload['w0_um']:.4g} um, 2d={payload['gap_um']:.4g} um "
        f"(m={derived.mode_index}), kappa_gap={payload['kappa_gap_mhz']:.4g} MHz, "
        f"g={payload['g_mhz']:.4g} MHz, kappa_T={payload['kappa_t_mhz']:.4g} MHz -> {args.out}"
    )
    return 0


def _add_pump_scan_args(p):
    p.add_argument("--points", type=int, default=200)
    p.add_argument("--decades", type=float, default=4.0)
    p.add_argument("--jmin-per-us", type=float, default=None)
    p.add_argument("--jmax-per-us", type=float, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cavdet",
        description="Single-atom cavity detection: solver scans, transit Monte Carlo, "
        "fiber-gap cavity design",
    )
    parser.add_argument("--version", action="version", version=f"cavdet {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("steady", help="stationary state for one configuration")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default="steady.json")
    p.add_argument("--g-frac", type=float, default=None, help="local coupling as fraction of g_max")
    p.set_defaults(func=_cmd_steady)

    p = sub.add_parser("scan-pump", help="resonant SNR and budget vs pump rate")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default="scan_pump.csv")
    _add_pump_scan_args(p)
    p.set_defaults(func=_cmd_scan_pump)

    p = sub.add_parser("homodyne-scan", help="dispersive SNR and budget vs pump rate")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default="homodyne_scan.csv")
    _add_pump_scan_args(p)
    p.set_defaults(func=_cmd_homodyne_scan)

    p = sub.add_parser("motion-averages", help="axis-averaged back-action vs pump rate")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default="motion_averages.csv")
    p.add_argument("--points", type=int, default=41)
    p.add_argument("--jmin-per-us", type=float, default=None)
    p.add_argument("--jmax-per-us", type=float, default=None)
    p.set_defaults(func=_cmd_motion_averages)

    p = sub.add_parser("simulate", help="Monte Carlo transit ensemble")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default="simout")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--atoms", type=int, default=None)
    p.add_argument("--threshold", type=int, default=None)
    p.add_argument("--window-us", type=float, default=None)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--decimate", type=int, default=20, help="trajectory CSV sampling step")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("design-cavity", help="fiber-gap cavity design calculator")
    p.add_argument("--core-um", type=float, required=True, help="core diameter in um")
    p.add_argument("--n-core", type=float, default=1.5)
    p.add_argument("--n-clad", type=float, default=1.496)
    p.add_argument("--lambda-nm", type=float, default=780.0)
    p.add_argument("--length-mm", type=float, default=None)
    p.add_argument("--length-half-waves", type=float, default=None)
    p.add_argument("--transmission", type=float, default=0.01)
    p.add_argument("--mode-index", type=int, default=None)
    p.add_argument("--gap-um", type=float, default=None)
    p.add_argument("--gamma-mhz", type=float, default=3.0)
    p.add_argument("--extra-loss-mhz", type=float, default=0.0)
    p.add_argument("--out", default="design.json")
    p.set_defaults(func=_cmd_design_cavity)

    return parser


def run(argv) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except CavdetError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
