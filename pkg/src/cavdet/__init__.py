"""Single-atom detection in small optical cavities.

Stationary nonlinear atom-cavity solver, resonant and homodyne detection
signal-to-noise with back-action budgets, a Monte Carlo atom-transit
detection experiment, and a fiber-gap cavity design calculator.
"""
from .errors import (
    CavdetError,
    ConfigError,
    IllConditionedRootsWarning,
    NoMaximumInBounds,
    NoPhysicalRoot,
    NotDispersive,
    NotResonant,
    ParaxialWarning,
    QuasiStaticViolated,
    SaturationWarning,
    SmallDetuningWarning,
    StepTooLarge,
)
from .params import (
    KHZ,
    MHZ,
    NM,
    RB_GAMMA,
    RB_MASS,
    RB_WAVELENGTH,
    UM,
    US,
    AtomParams,
    CavityParams,
    DriveParams,
    atomic_cross_section,
    cooperativity,
    geometric_cooperativity,
    loss_fraction_to_rate,
    pump_amplitude,
    round_trips_and_finesse,
)
from .steady_state import (
    BlochTrajectory,
    StationaryState,
    empty_cavity_state,
    integrate_bloch,
    solve_stationary,
    stationary_photon_numbers,
    stationary_scan,
)
from .resonant_detection import (
    AsymptoticSnr,
    KappaTOptimum,
    PumpOptimum,
    ResonantReport,
    classify_coupling,
    fluorescence_reference,
    intensity_report,
    m_weak_limit,
    max_snr_over_pump,
    optimal_kappa_t,
    output_photons,
    saturation_pump,
    snr_low_saturation,
    snr_resonant,
    snr_strong_limit,
    snr_weak_limit,
)
from .homodyne_detection import (
    HomodyneReport,
    dispersive_saturation_pump,
    homodyne_report,
    m_homodyne,
    max_snr_hom_over_pump,
    n_out_required,
    optimal_kappa_t_homodyne,
    snr_homodyne_strong_limit,
    snr_homodyne_weak_limit,
)
from .motion import MotionAverages, diffusion_coefficient, spatial_averages
from .trajectory_sim import (
    DetectionReport,
    GuideParams,
    SimConfig,
    TrajectoryRecord,
    dark_rates,
    detect_events,
    local_coupling,
    run_ensemble,
    sample_initial,
    simulate_trajectory,
    trajectory_rng,
    windowed_counts,
)
from .fiber_cavity import (
    FiberCavityDerived,
    FiberCavityDesign,
    coupling_g,
    derive,
    design_to_cavity,
    gap_amplitude_ratio,
    gaussian_beam_params,
    kappa_gap,
    kappa_t_mirror,
    mode_match,
    mode_waist,
    nearest_mode_index,
    resonant_gaps,
    v_number,
)
from .optimize import golden_max, max_on_log_grid
from .config import RunConfig, config_digest, load_config, parse_config

__version__ = "0.1.0"

__all__ = [
    "AtomParams",
    "AsymptoticSnr",
    "BlochTrajectory",
    "CavdetError",
    "CavityParams",
    "ConfigError",
    "DetectionReport",
    "DriveParams",
    "FiberCavityDerived",
    "FiberCavityDesign",
    "GuideParams",
    "HomodyneReport",
    "IllConditionedRootsWarning",
    "KHZ",
    "KappaTOptimum",
    "MHZ",
    "MotionAverages",
    "NM",
    "NoMaximumInBounds",
    "NoPhysicalRoot",
    "NotDispersive",
    "NotResonant",
    "ParaxialWarning",
    "PumpOptimum",
    "QuasiStaticViolated",
    "RB_GAMMA",
    "RB_MASS",
    "RB_WAVELENGTH",
    "ResonantReport",
    "RunConfig",
    "SaturationWarning",
    "SimConfig",
    "SmallDetuningWarning",
    "StationaryState",
    "StepTooLarge",
    "TrajectoryRecord",
    "UM",
    "US",
    "atomic_cross_section",
    "classify_coupling",
    "config_digest",
    "cooperativity",
    "coupling_g",
    "dark_rates",
    "derive",
    "design_to_cavity",
    "detect_events",
    "diffusion_coefficient",
    "dispersive_saturation_pump",
    "empty_cavity_state",
    "fluorescence_reference",
    "gap_amplitude_ratio",
    "gaussian_beam_params",
    "geometric_cooperativity",
    "golden_max",
    "homodyne_report",
    "integrate_bloch",
    "intensity_report",
    "kappa_gap",
    "kappa_t_mirror",
    "load_config",
    "local_coupling",
    "loss_fraction_to_rate",
    "m_homodyne",
    "m_weak_limit",
    "max_on_log_grid",
    "max_snr_hom_over_pump",
    "max_snr_over_pump",
    "mode_match",
    "mode_waist",
    "n_out_required",
    "nearest_mode_index",
    "optimal_kappa_t",
    "optimal_kappa_t_homodyne",
    "output_photons",
    "parse_config",
    "pump_amplitude",
    "resonant_gaps",
    "round_trips_and_finesse",
    "run_ensemble",
    "sample_initial",
    "saturation_pump",
    "simulate_trajectory",
    "snr_homodyne_strong_limit",
    "snr_homodyne_weak_limit",
    "snr_low_saturation",
    "snr_resonant",
    "snr_strong_limit",
    "snr_weak_limit",
    "solve_stationary",
    "spatial_averages",
    "stationary_photon_numbers",
    "stationary_scan",
    "trajectory_rng",
    "v_number",
    "windowed_counts",
]
