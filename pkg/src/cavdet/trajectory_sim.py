"""Monte Carlo transits of guided atoms through the cavity mode.

Axes: x is the cavity axis (standing wave), y the guide axis the atoms
travel along, z vertical.  The guide confines x and z harmonically at
trap_omega and leaves y free.  Atoms start three waists upstream with
thermal position and velocity spreads.

The cavity field is slaved to the instantaneous atom position (kappa
exceeds every motional rate here by orders of magnitude), so each step
just re-solves the stationary photon number at the local coupling.
Detector clicks are an inhomogeneous Poisson process at the detected
output rate; a sliding-window count with a minimum-count threshold then
flags atom transits as dips.  An excursion below threshold must persist
for min_dip before it counts as a detection event; this persistence
requirement is a detector convention, and the reported dark rate carries
both a statistical confidence interval and the spread obtained by varying
the convention.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
import warnings

import numpy as np

from scipy.constants import hbar as HBAR, k as K_B
from scipy.stats import chi2

from .errors import ConfigError, QuasiStaticViolated, StepTooLarge
from .params import KHZ, AtomParams, CavityParams, DriveParams, US
from .steady_state import _roots_scaled, empty_cavity_state, stationary_scan

PRESENCE_WAISTS = 3.0  # |y| within this many waists counts as "atom present"
_DIP_SWEEP = (1, 2, 3, 4, 5)  # persistence conventions (in strides) for the dark-rate spread


@dataclass(frozen=True)
class GuideParams:
    """Harmonic guide for the transverse axes plus the longitudinal beam."""

    trap_omega: float = 37.0 * KHZ
    mean_velocity: float = 0.4
    temperature: float = 30e-6

    def __post_init__(self):
        if self.trap_omega <= 0:
            raise ConfigError("guide.trap_omega must be positive")
        if self.mean_velocity < 0:
            raise ConfigError("guide.mean_velocity must be non-negative")
        if self.temperature < 0:
            raise ConfigError("guide.temperature must be non-negative")


@dataclass(frozen=True)
class SimConfig:
    """Integration, detection, and ensemble settings."""

    dt: float = 0.05 * US
    window: float = 8.0 * US
    stride: float = 1.0 * US
    threshold: int = 11
    min_dip: float = 3.0 * US
    duration: float = 100.0 * US
    seed: int = 0
    n_atoms: int = 500
    include_recoil: bool = True
    dark_windows: int = 20000

    def __post_init__(self):
        if self.dt <= 0 or self.window <= 0 or self.stride <= 0:
            raise ConfigError("sim.dt, sim.window, sim.stride must be positive")
        if self.dt > self.window / 20.0:
            raise ConfigError("sim.dt must not exceed window/20")
        if self.stride > self.window:
            raise ConfigError("sim.stride must not exceed the window")
        if self.threshold < 0:
            raise ConfigError("sim.threshold must be non-negative")
        if self.min_dip < 0:
            raise ConfigError("sim.min_dip must be non-negative")
        if self.duration < self.window:
            raise ConfigError("sim.duration must cover at least one window")
        if self.seed < 0:
            raise ConfigError("sim.seed must be non-negative")
        if self.n_atoms < 1:
            raise ConfigError("sim.n_atoms must be at least 1")
        if self.dark_windows < 1:
            raise ConfigError("sim.dark_windows must be at least 1")


@dataclass(frozen=True)
class TrajectoryRecord:
    """One simulated transit at full time resolution."""

    times: np.ndarray
    position: np.ndarray
    n_photons: np.ndarray
    click_times: np.ndarray
    window_times: np.ndarray
    windowed_counts: np.ndarray
    m_scattered: float


@dataclass(frozen=True)
class DetectionReport:
    """Ensemble outcome.

    dark_rate_ci is the 95% Poisson interval at the configured event
    convention; dark_rate_convention_range is the spread of the point
    estimate when the dip-persistence requirement sweeps 1 to 5 strides.
    detections holds (trajectory index, first qualifying event time).
    """

    efficiency: float
    dark_rate: float
    dark_rate_ci: tuple[float, float]
    dark_rate_convention_range: tuple[float, float]
    mean_m: float
    detections: tuple[tuple[int, float], ...]
    n_atoms: int


def trajectory_rng(seed: int, index: int) -> np.random.Generator:
    """Independent per-trajectory stream; index-addressed, thread-count free."""
    return np.random.default_rng(np.random.SeedSequence([seed, 0, index]))


def _dark_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, 1]))


def sample_initial(
    guide: GuideParams, atom: AtomParams, cavity: CavityParams, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """Thermal initial condition, three waists upstream along the guide.

    Transverse coordinates are drawn from the harmonic-oscillator thermal
    distribution (position variance k_B*T/(m*omega^2), velocity variance
    k_B*T/m per axis); the longitudinal velocity adds the same thermal
    spread to the mean drift.
    """
    sig_x = math.sqrt(K_B * guide.temperature / atom.mass) / guide.trap_omega
    sig_v = math.sqrt(K_B * guide.temperature / atom.mass)
    pos = np.array(
        [rng.normal(0.0, sig_x), -PRESENCE_WAISTS * cavity.waist, rng.normal(0.0, sig_x)]
    )
    vel = np.array(
        [
            rng.normal(0.0, sig_v),
            guide.mean_velocity + rng.normal(0.0, sig_v),
            rng.normal(0.0, sig_v),
        ]
    )
    return pos, vel


def local_coupling(position, cavity: CavityParams, atom: AtomParams):
    """Coupling at a point: Gaussian envelope times |standing wave|.

    position is (3,) or (n, 3) as (x, y, z); returns matching scalars.
    """
    p = np.asarray(position, dtype=float)
    x, y, z = p[..., 0], p[..., 1], p[..., 2]
    envelope = np.exp(-(y * y + z * z) / cavity.waist**2)
    g = cavity.g_max * envelope * np.abs(np.cos(atom.k * x))
    return float(g) if p.ndim == 1 else g


def windowed_counts(click_times, window: float, stride: float, duration: float | None = None):
    """Sliding-window click counts.

    Windows are [t, t + window) with starts spaced by stride from zero up
    to duration - window.  Returns (window_start_times, counts).
    """
    if stride > window:
        raise ValueError("stride must not exceed the window")
    clicks = np.asarray(click_times, dtype=float)
    if duration is None:
        duration = float(clicks[-1]) if clicks.size else window
    n_windows = int(math.floor((duration - window) / stride + 1e-9)) + 1
    if n_windows < 1:
        raise ValueError("duration shorter than one window")
    starts = np.arange(n_windows) * stride
    counts = np.searchsorted(clicks, starts + window, side="left") - np.searchsorted(
        clicks, starts, side="left"
    )
    return starts, counts


def detect_events(window_times, counts, threshold: int, min_dip: float = 0.0) -> np.ndarray:
    """Start times of below-threshold excursions in a windowed count series.

    A maximal contiguous run of windows with counts < threshold is one
    event, stamped at its first window; runs spanning less than min_dip
    (in the time units of window_times) are discarded.
    """
    counts = np.asarray(counts)
    below = counts < threshold
    if not below.any():
        return np.empty(0, dtype=float)
    edges = np.diff(np.concatenate(([False], below, [False])).astype(np.int8))
    starts = np.flatnonzero(edges == 1)
    ends = np.flatnonzero(edges == -1)
    if min_dip > 0.0:
        times = np.asarray(window_times, dtype=float)
        stride = times[1] - times[0] if times.size > 1 else math.inf
        need = max(1, math.ceil(min_dip / stride - 1e-9))
        keep = (ends - starts) >= need
        starts = starts[keep]
    return np.asarray(window_times, dtype=float)[starts]


def _poisson_times(times, rate, rng: np.random.Generator) -> np.ndarray:
    """Inhomogeneous Poisson arrivals by time rescaling of the rate integral."""
    increments = 0.5 * (rate[1:] + rate[:-1]) * np.diff(times)
    lam = np.concatenate(([0.0], np.cumsum(increments)))
    total = lam[-1]
    k = rng.poisson(total)
    u = np.sort(rng.uniform(0.0, total, k))
    t = np.interp(u, lam, times)
    if t.size:
        t = t[np.concatenate(([True], np.diff(t) > 0))]
    return t


def _detected_rate_factor(cavity: CavityParams) -> float:
    return 2.0 * cavity.kappa_t if cavity.asymmetric_input else cavity.kappa_t


def _check_step(atom, cavity, guide, sim):
    v_char = guide.mean_velocity + 4.0 * math.sqrt(K_B * guide.temperature / atom.mass)
    bound = min(0.1 / guide.trap_omega, atom.wavelength / (8.0 * max(v_char, 1e-12)))
    if sim.dt > bound:
        raise StepTooLarge(
            f"dt={sim.dt:.3g} s undersamples the trap or the standing wave "
            f"(bound {bound:.3g} s)"
        )
    if v_char > 0 and (0.5 * atom.wavelength / v_char) < 10.0 / cavity.kappa:
        warnings.warn(
            "atom crosses a standing-wave period in under 10 cavity "
            "lifetimes; the slaved-field approximation is strained",
            QuasiStaticViolated,
            stacklevel=3,
        )


def simulate_trajectory(
    atom: AtomParams,
    cavity: CavityParams,
    drive: DriveParams,
    guide: GuideParams,
    sim: SimConfig,
    rng: np.random.Generator,
) -> TrajectoryRecord:
    """One atom transit with quasi-static field and Poisson detector clicks.

    Without recoil the kinematics are closed-form and the photon numbers
    are solved vectorized over the whole trajectory.  With recoil, each
    step applies hbar*k kicks in isotropic directions at the spontaneous
    rate 2*Gamma*rho11 plus a Gaussian axial momentum-diffusion kick, so
    the motion is integrated step by step (exact harmonic rotations, so
    the integrator itself introduces no secular error).
    """
    _check_step(atom, cavity, guide, sim)
    pos, vel = sample_initial(guide, atom, cavity, rng)
    n_steps = int(round(sim.duration / sim.dt))
    times = np.arange(n_steps + 1) * sim.dt
    gam = atom.gamma

    if not sim.include_recoil:
        om = guide.trap_omega
        cos_t, sin_t = np.cos(om * times), np.sin(om * times)
        position = np.empty((n_steps + 1, 3))
        position[:, 0] = pos[0] * cos_t + (vel[0] / om) * sin_t
        position[:, 1] = pos[1] + vel[1] * times
        position[:, 2] = pos[2] * cos_t + (vel[2] / om) * sin_t
        g_t = local_coupling(position, cavity, atom)
        n_t = stationary_scan(atom, cavity, drive, g_t)
        g2s = (g_t / gam) ** 2
        d0 = (atom.delta_a / gam) ** 2 + 1.0
        rho11_t = g2s * n_t / (d0 + 2.0 * g2s * n_t)
    else:
        position = np.empty((n_steps + 1, 3))
        n_t = np.empty(n_steps + 1)
        rho11_t = np.empty(n_steps + 1)
        k_opt = atom.k
        w0sq = cavity.waist**2
        e2 = drive.j_in * cavity.kappa_t / gam**2
        kap_s = cavity.kappa / gam
        da_s = atom.delta_a / gam
        dc_s = cavity.delta_c / gam
        d0 = da_s * da_s + 1.0
        n_free = e2 / (kap_s * kap_s + dc_s * dc_s)
        eta2 = drive.j_in * cavity.kappa_t
        hk = HBAR * k_opt
        inv_mass = 1.0 / atom.mass
        om = guide.trap_omega
        cw, sw = math.cos(om * sim.dt), math.sin(om * sim.dt)
        gk = gam * cavity.kappa
        x, y, z = pos
        vx, vy, vz = vel
        for i in range(n_steps + 1):
            envelope = math.exp(-(y * y + z * z) / w0sq)
            cx = math.cos(k_opt * x)
            g2s = (cavity.g_max * envelope * cx / gam) ** 2
            if g2s > 0.0:
                n = _roots_scaled(g2s, e2, kap_s, da_s, dc_s)[0]
                rho = g2s * n / (d0 + 2.0 * g2s * n)
            else:
                n, rho = n_free, 0.0
            position[i] = (x, y, z)
            n_t[i] = n
            rho11_t[i] = rho
            if i == n_steps:
                break
            n_kicks = rng.poisson(2.0 * gam * rho * sim.dt)
            if n_kicks:
                dirs = rng.normal(size=(n_kicks, 3))
                norms = np.linalg.norm(dirs, axis=1)
                norms[norms == 0.0] = 1.0
                kick = (hk * inv_mass) * (dirs / norms[:, None]).sum(axis=0)
                vx += kick[0]
                vy += kick[1]
                vz += kick[2]
            g_env = cavity.g_max * envelope
            denom = gk + g_env * g_env * cx * cx
            diff = gam * hk * hk * eta2 * g_env * g_env / (denom * denom)
            vx += rng.normal() * math.sqrt(2.0 * diff * sim.dt) * inv_mass
            x, vx = x * cw + (vx / om) * sw, -x * om * sw + vx * cw
            z, vz = z * cw + (vz / om) * sw, -z * om * sw + vz * cw
            y += vy * sim.dt

    m_scattered = float(np.trapezoid(2.0 * gam * rho11_t, times))
    clicks = _poisson_times(times, n_t * _detected_rate_factor(cavity), rng)
    window_times, counts = windowed_counts(clicks, sim.window, sim.stride, duration=sim.duration)
    return TrajectoryRecord(
        times=times,
        position=position,
        n_photons=n_t,
        click_times=clicks,
        window_times=window_times,
        windowed_counts=counts,
        m_scattered=m_scattered,
    )


def _simulate_indexed(args) -> TrajectoryRecord:
    atom, cavity, drive, guide, sim, index = args
    return simulate_trajectory(atom, cavity, drive, guide, sim, trajectory_rng(sim.seed, index))


def _first_detection(record: TrajectoryRecord, cavity: CavityParams, sim: SimConfig):
    """Earliest qualifying event time, or None.

    Qualifying means the event starts while the atom is within
    PRESENCE_WAISTS waists of the axis along the guide.
    """
    events = detect_events(record.window_times, record.windowed_counts, sim.threshold, sim.min_dip)
    if events.size == 0:
        return None
    y_at = np.interp(events, record.times, record.position[:, 1])
    good = events[np.abs(y_at) <= PRESENCE_WAISTS * cavity.waist]
    return float(good[0]) if good.size else None


def dark_rates(
    cavity: CavityParams, drive: DriveParams, sim: SimConfig
) -> tuple[float, tuple[float, float], tuple[float, float]]:
    """False-event rate on an atom-free click stream.

    Simulates dark_windows windows of empty-cavity shot noise and counts
    threshold events.  Returns (rate, 95% Poisson CI, rate range across
    dip-persistence conventions of 1 to 5 strides).
    """
    rate0 = empty_cavity_state(cavity, drive).n_photons * _detected_rate_factor(cavity)
    span_total = sim.dark_windows * sim.window
    rng = _dark_rng(sim.seed)
    n_clicks = rng.poisson(rate0 * span_total)
    clicks = np.sort(rng.uniform(0.0, span_total, n_clicks))
    window_times, counts = windowed_counts(clicks, sim.window, sim.stride, duration=span_total)
    span = window_times.size * sim.stride
    n_events = detect_events(window_times, counts, sim.threshold, sim.min_dip).size
    rate = n_events / span
    lo = chi2.ppf(0.025, 2 * n_events) / (2.0 * span) if n_events else 0.0
    hi = chi2.ppf(0.975, 2 * n_events + 2) / (2.0 * span)
    sweep = [
        detect_events(window_times, counts, sim.threshold, k * sim.stride).size / span
        for k in _DIP_SWEEP
    ]
    return rate, (float(lo), float(hi)), (min(sweep), max(sweep))


def run_ensemble(
    atom: AtomParams,
    cavity: CavityParams,
    drive: DriveParams,
    guide: GuideParams,
    sim: SimConfig,
    workers: int = 1,
    record_sink=None,
) -> DetectionReport:
    """Simulate the ensemble and the dark stream; deterministic given sim.seed.

    Per-trajectory RNG streams are addressed by (seed, index), so the
    report is byte-identical for any workers count.  record_sink, if
    given, receives (index, TrajectoryRecord) in index order.
    """
    args = [(atom, cavity, drive, guide, sim, i) for i in range(sim.n_atoms)]
    detections = []
    m_values = np.empty(sim.n_atoms)

    def consume(index, record):
        m_values[index] = record.m_scattered
        hit = _first_detection(record, cavity, sim)
        if hit is not None:
            detections.append((index, hit))
        if record_sink is not None:
            record_sink(index, record)

    if workers <= 1:
        for i, arg in enumerate(args):
            consume(i, _simulate_indexed(arg))
    else:
        chunk = max(1, sim.n_atoms // (4 * workers))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for i, record in enumerate(pool.map(_simulate_indexed, args, chunksize=chunk)):
                consume(i, record)

    rate, ci, conv = dark_rates(cavity, drive, sim)
    return DetectionReport(
        efficiency=len(detections) / sim.n_atoms,
        dark_rate=rate,
        dark_rate_ci=ci,
        dark_rate_convention_range=conv,
        mean_m=float(np.mean(m_values)),
        detections=tuple(detections),
        n_atoms=sim.n_atoms,
    )
