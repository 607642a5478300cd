"""Transit Monte Carlo: kinematics, click statistics, detection, determinism."""
import math
from dataclasses import replace

import numpy as np
import pytest
from scipy.constants import k as K_B
from scipy.stats import kstest

from cavdet import (
    MHZ,
    UM,
    US,
    AtomParams,
    CavityParams,
    ConfigError,
    DriveParams,
    GuideParams,
    QuasiStaticViolated,
    SimConfig,
    StepTooLarge,
    dark_rates,
    detect_events,
    empty_cavity_state,
    local_coupling,
    run_ensemble,
    sample_initial,
    simulate_trajectory,
    solve_stationary,
    trajectory_rng,
    windowed_counts,
)
from cavdet.trajectory_sim import _poisson_times

US_ = 1e-6


@pytest.fixture
def transit_drive():
    return DriveParams(10e6, 10 * US)


@pytest.fixture
def guide():
    return GuideParams()


# --- initial conditions -------------------------------------------------------


def test_sample_initial_statistics(guide, atom, transit_cavity):
    rng = np.random.default_rng(12345)
    n = 100_000
    pos = np.empty((n, 3))
    vel = np.empty((n, 3))
    for i in range(n):
        pos[i], vel[i] = sample_initial(guide, atom, transit_cavity, rng)
    sig_v = math.sqrt(K_B * guide.temperature / atom.mass)
    sig_x = sig_v / guide.trap_omega
    assert np.all(pos[:, 1] == -3.0 * transit_cavity.waist)
    assert pos[:, 0].std() == pytest.approx(sig_x, rel=0.02)
    assert pos[:, 2].std() == pytest.approx(sig_x, rel=0.02)
    assert vel[:, 1].mean() == pytest.approx(guide.mean_velocity, rel=0.02)
    assert vel[:, 1].std() == pytest.approx(sig_v, rel=0.02)
    assert vel[:, 0].mean() == pytest.approx(0.0, abs=4 * sig_v / math.sqrt(n))


def test_sample_initial_zero_temperature(atom, transit_cavity):
    cold = GuideParams(temperature=0.0)
    pos, vel = sample_initial(cold, atom, transit_cavity, np.random.default_rng(0))
    assert pos.tolist() == [0.0, -3.0 * transit_cavity.waist, 0.0]
    assert vel.tolist() == [0.0, cold.mean_velocity, 0.0]


def test_guide_validation():
    with pytest.raises(ConfigError):
        GuideParams(trap_omega=0.0)
    with pytest.raises(ConfigError):
        GuideParams(mean_velocity=-1.0)
    with pytest.raises(ConfigError):
        GuideParams(temperature=-1e-6)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(dt=0.0),
        dict(dt=1 * US),  # exceeds window/20
        dict(stride=9 * US),  # exceeds window
        dict(duration=5 * US),  # shorter than window
        dict(threshold=-1),
        dict(min_dip=-1.0),
        dict(seed=-1),
        dict(n_atoms=0),
        dict(dark_windows=0),
    ],
)
def test_sim_config_validation(kwargs):
    with pytest.raises(ConfigError):
        SimConfig(**kwargs)


# --- mode geometry ------------------------------------------------------------


def test_local_coupling_geometry(atom, transit_cavity):
    g0 = transit_cavity.g_max
    w0 = transit_cavity.waist
    lam = atom.wavelength
    assert local_coupling([0.0, 0.0, 0.0], transit_cavity, atom) == pytest.approx(g0, rel=1e-12)
    assert local_coupling([lam / 4, 0.0, 0.0], transit_cavity, atom) == pytest.approx(
        0.0, abs=1e-6 * g0
    )
    assert local_coupling([0.0, w0, 0.0], transit_cavity, atom) == pytest.approx(
        g0 / math.e, rel=1e-12
    )
    assert local_coupling([0.0, 0.0, w0], transit_cavity, atom) == pytest.approx(
        g0 / math.e, rel=1e-12
    )
    pts = np.array([[0.0, 0.0, 0.0], [lam / 2, 0.0, 0.0], [0.0, 3 * w0, 0.0]])
    g = local_coupling(pts, transit_cavity, atom)
    assert g.shape == (3,)
    assert np.all(g >= 0.0)
    assert g[1] == pytest.approx(g0, rel=1e-9)  # |cos| restores the half period


# --- click windowing and event detection ---------------------------------------


def test_windowed_counts_half_open():
    clicks = np.array([0.5, 1.5, 2.5, 7.9, 8.0]) * US_
    starts, counts = windowed_counts(clicks, 8 * US_, 1 * US_, duration=16 * US_)
    assert starts.shape == (9,)
    assert starts[0] == 0.0
    assert starts[-1] == pytest.approx(8 * US_)
    assert counts.tolist() == [4, 4, 3, 2, 2, 2, 2, 2, 1]


def test_windowed_counts_validation():
    with pytest.raises(ValueError):
        windowed_counts(np.array([1.0]), window=1.0, stride=2.0, duration=4.0)
    with pytest.raises(ValueError):
        windowed_counts(np.array([1.0]), window=8.0, stride=1.0, duration=2.0)


def test_windowed_counts_empty_stream():
    starts, counts = windowed_counts(np.array([]), 8 * US_, 1 * US_, duration=16 * US_)
    assert counts.tolist() == [0] * 9


def test_detect_events_single_dip():
    times = np.arange(5) * 1.0
    events = detect_events(times, np.array([12, 9, 12, 12, 12]), threshold=11)
    assert events.tolist() == [1.0]


def test_detect_events_persistence():
    times = np.arange(8) * 1.0
    counts = np.array([12, 9, 9, 12, 9, 9, 9, 12])
    assert detect_events(times, counts, 11).tolist() == [1.0, 4.0]
    # three-sample persistence keeps only the second excursion
    assert detect_events(times, counts, 11, min_dip=3.0).tolist() == [4.0]
    assert detect_events(times, counts, 11, min_dip=5.0).tolist() == []


def test_detect_events_none_below():
    times = np.arange(4) * 1.0
    out = detect_events(times, np.array([12, 13, 12, 15]), threshold=11)
    assert out.size == 0
    assert detect_events(times, np.array([12, 13]), threshold=0).size == 0


# --- click statistics -----------------------------------------------------------


def test_poisson_times_constant_rate_statistics():
    rng = np.random.default_rng(42)
    times = np.linspace(0.0, 1.0, 2001)
    t = _poisson_times(times, np.full_like(times, 5000.0), rng)
    assert np.all(np.diff(t) > 0)
    assert t.size == pytest.approx(5000, abs=5 * math.sqrt(5000))
    assert kstest(t, "uniform", args=(0.0, 1.0)).pvalue > 0.01
    assert kstest(np.diff(t), "expon", args=(0.0, 1 / 5000.0)).pvalue > 0.01


def test_poisson_times_linear_rate_statistics():
    # exact time change for rate a + b*t reduces arrivals to uniforms
    a, b, T = 2000.0, 6000.0, 1.0
    times = np.linspace(0.0, T, 2001)
    t = _poisson_times(times, a + b * times, np.random.default_rng(7))
    lam = (a * t + 0.5 * b * t**2) / (a * T + 0.5 * b * T**2)
    assert kstest(lam, "uniform").pvalue > 0.01


def test_empty_window_count_calibration(transit_cavity, transit_drive):
    # for these parameters the empty-cavity detected flux is exactly
    # j*(kappa_t/kappa)^2, i.e. 20 counts per 8 us window
    rate0 = (
        empty_cavity_state(transit_cavity, transit_drive).n_photons * transit_cavity.kappa_t
    )
    assert rate0 * 8 * US_ == pytest.approx(20.0, rel=1e-12)
    rng = np.random.default_rng(3)
    span = 4000 * 8 * US_
    clicks = np.sort(rng.uniform(0.0, span, rng.poisson(rate0 * span)))
    _, counts = windowed_counts(clicks, 8 * US_, 1 * US_, duration=span)
    assert counts.mean() == pytest.approx(20.0, rel=0.015)


# --- single trajectories ----------------------------------------------------------


def test_ballistic_trajectory_closed_form(atom, transit_cavity, transit_drive):
    # zero temperature, no recoil: pure drift along the guide at the mean
    # velocity, transverse coordinates pinned to the axis
    guide = GuideParams(temperature=0.0)
    sim = SimConfig(seed=0, include_recoil=False, duration=40 * US)
    rec = simulate_trajectory(
        atom, transit_cavity, transit_drive, guide, sim, trajectory_rng(0, 0)
    )
    expected_y = -3.0 * transit_cavity.waist + guide.mean_velocity * rec.times
    assert np.array_equal(rec.position[:, 1], expected_y)
    assert np.all(rec.position[:, 0] == 0.0)
    assert np.all(rec.position[:, 2] == 0.0)
    # photon numbers agree with the scalar solver at sampled points
    for i in (0, len(rec.times) // 2, len(rec.times) - 1):
        g_i = local_coupling(rec.position[i], transit_cavity, atom)
        direct = solve_stationary(atom, transit_cavity, transit_drive, g_local=g_i).n_photons
        assert rec.n_photons[i] == pytest.approx(direct, rel=1e-9)
    # scattered-photon integral recomputed from the stored photon numbers
    g_t = local_coupling(rec.position, transit_cavity, atom)
    g2s = (g_t / atom.gamma) ** 2
    rho11 = g2s * rec.n_photons / ((atom.delta_a / atom.gamma) ** 2 + 1.0 + 2.0 * g2s * rec.n_photons)
    m = np.trapezoid(2.0 * atom.gamma * rho11, rec.times)
    assert rec.m_scattered == pytest.approx(m, rel=1e-12)


def test_transit_produces_detectable_dip(atom, transit_cavity, transit_drive, guide):
    sim = SimConfig(seed=0, duration=100 * US)
    rec = simulate_trajectory(
        atom, transit_cavity, transit_drive, guide, sim, trajectory_rng(0, 0)
    )
    assert rec.windowed_counts.min() < sim.threshold
    assert rec.n_photons.min() < empty_cavity_state(transit_cavity, transit_drive).n_photons
    events = detect_events(rec.window_times, rec.windowed_counts, sim.threshold, sim.min_dip)
    assert events.size >= 1


def test_step_bound_enforced(atom, transit_cavity, transit_drive, guide):
    sim = SimConfig(dt=200e-9, seed=0)
    with pytest.raises(StepTooLarge):
        simulate_trajectory(atom, transit_cavity, transit_drive, guide, sim, trajectory_rng(0, 0))


def test_fast_atom_strains_slaved_field(atom, transit_cavity, transit_drive):
    fast = GuideParams(mean_velocity=50.0)
    sim = SimConfig(dt=1e-9, window=8 * US, duration=8 * US, include_recoil=False, seed=0)
    with pytest.warns(QuasiStaticViolated):
        simulate_trajectory(atom, transit_cavity, transit_drive, fast, sim, trajectory_rng(0, 0))


# --- determinism -------------------------------------------------------------------


def test_trajectory_rng_streams():
    a1 = trajectory_rng(0, 5).normal(size=4)
    a2 = trajectory_rng(0, 5).normal(size=4)
    b = trajectory_rng(0, 6).normal(size=4)
    c = trajectory_rng(1, 5).normal(size=4)
    assert np.array_equal(a1, a2)
    assert not np.array_equal(a1, b)
    assert not np.array_equal(a1, c)


def test_same_seed_reproduces_trajectory(atom, transit_cavity, transit_drive, guide):
    sim = SimConfig(seed=4, duration=24 * US)
    r1 = simulate_trajectory(
        atom, transit_cavity, transit_drive, guide, sim, trajectory_rng(4, 2)
    )
    r2 = simulate_trajectory(
        atom, transit_cavity, transit_drive, guide, sim, trajectory_rng(4, 2)
    )
    assert np.array_equal(r1.position, r2.position)
    assert np.array_equal(r1.click_times, r2.click_times)
    assert r1.m_scattered == r2.m_scattered


def test_worker_count_does_not_change_results(atom, transit_cavity, transit_drive, guide):
    sim = SimConfig(seed=0, n_atoms=8, duration=40 * US, dark_windows=200)
    sink1, sink2 = {}, {}
    rep1 = run_ensemble(
        atom, transit_cavity, transit_drive, guide, sim, workers=1,
        record_sink=lambda i, r: sink1.__setitem__(i, r),
    )
    rep2 = run_ensemble(
        atom, transit_cavity, transit_drive, guide, sim, workers=2,
        record_sink=lambda i, r: sink2.__setitem__(i, r),
    )
    assert rep1.efficiency == rep2.efficiency
    assert rep1.dark_rate == rep2.dark_rate
    assert rep1.mean_m == rep2.mean_m
    assert rep1.detections == rep2.detections
    assert sorted(sink1) == sorted(sink2) == list(range(8))
    for i in range(8):
        assert np.array_equal(sink1[i].click_times, sink2[i].click_times)
        assert np.array_equal(sink1[i].n_photons, sink2[i].n_photons)


# --- ensemble detection -----------------------------------------------------------


def test_threshold_tradeoff(atom, transit_cavity, transit_drive, guide):
    # raising the count threshold catches more atoms and more dark events
    base = SimConfig(seed=0, n_atoms=40, include_recoil=False, dark_windows=3000)
    effs, darks = [], []
    for threshold in (9, 11, 13):
        rep = run_ensemble(
            atom, transit_cavity, transit_drive, guide, replace(base, threshold=threshold)
        )
        effs.append(rep.efficiency)
        darks.append(rep.dark_rate)
    assert effs[0] <= effs[1] <= effs[2]
    assert darks[0] <= darks[1] <= darks[2]
    assert effs[1] > 0.5


def test_threshold_extremes(atom, transit_cavity, transit_drive, guide):
    base = SimConfig(seed=0, n_atoms=6, include_recoil=False, dark_windows=300)
    silent = run_ensemble(
        atom, transit_cavity, transit_drive, guide, replace(base, threshold=0)
    )
    assert silent.efficiency == 0.0
    assert silent.dark_rate == 0.0
    trigger_happy = run_ensemble(
        atom, transit_cavity, transit_drive, guide, replace(base, threshold=1000)
    )
    assert trigger_happy.efficiency == 1.0
    assert trigger_happy.dark_rate > 0.0


def test_dark_rate_intervals(transit_cavity, transit_drive):
    sim = SimConfig(seed=0, dark_windows=3000)
    rate, ci, conv = dark_rates(transit_cavity, transit_drive, sim)
    assert ci[0] <= rate <= ci[1]
    # the configured three-stride persistence sits inside the sweep
    assert conv[0] <= rate <= conv[1]
    assert conv[0] >= 0.0


def test_detection_report_structure(atom, transit_cavity, transit_drive, guide):
    sim = SimConfig(seed=1, n_atoms=10, include_recoil=False, dark_windows=200)
    rep = run_ensemble(atom, transit_cavity, transit_drive, guide, sim)
    assert rep.n_atoms == 10
    assert 0.0 <= rep.efficiency <= 1.0
    assert rep.mean_m > 0.0
    for index, t_hit in rep.detections:
        assert 0 <= index < 10
        assert 0.0 <= t_hit <= sim.duration
    assert rep.efficiency == len(rep.detections) / 10
