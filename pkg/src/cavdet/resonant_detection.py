"""Resonant intensity detection: output photons, SNR, scattering budget, optima.

The detector integrates the transmitted photon flux for a time tau and
compares against the empty-cavity level; shot noise sets the denominator,

    S = (N_out,0 - N_out) / sqrt(N_out),    N_out = N * kappa_t * tau.

The scattering budget M = 2*Gamma*tau*rho11 counts spontaneous emissions
during the measurement.  Closed-form low- and high-saturation limits are
exposed alongside the full nonlinear solve; only the full solve is
authoritative between the regimes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .errors import NoMaximumInBounds, NotResonant
from .optimize import golden_max, max_on_log_grid
from .params import AtomParams, CavityParams, DriveParams, cooperativity
from .steady_state import StationaryState, empty_cavity_state, solve_stationary

# cooperativity bands for tagging which closed-form branch applies
WEAK_COUPLING_MAX = 0.2
STRONG_COUPLING_MIN = 5.0


@dataclass(frozen=True)
class ResonantReport:
    """Observables of one intensity measurement."""

    n_out_empty: float
    n_out_atom: float
    snr: float
    m_scattered: float
    saturation: float


@dataclass(frozen=True)
class AsymptoticSnr:
    """Closed-form limit value with its coupling-regime tag.

    blended is set in the crossover band where neither branch of the
    piecewise form is trustworthy.
    """

    value: float
    regime: str
    blended: bool


@dataclass(frozen=True)
class PumpOptimum:
    j_in: float
    snr: float
    report: ResonantReport


@dataclass(frozen=True)
class KappaTOptimum:
    kappa_t: float
    snr: float
    j_in: float
    at_lower_bound: bool
    at_upper_bound: bool


def classify_coupling(c: float) -> tuple[str, bool]:
    """Regime tag for a cooperativity value plus a crossover (blend) flag."""
    if c < WEAK_COUPLING_MAX:
        return "weak", False
    if c > STRONG_COUPLING_MIN:
        return "strong", False
    return "intermediate", True


def check_resonant(atom: AtomParams, cavity: CavityParams) -> None:
    tol = 1e-9 * atom.gamma
    if abs(atom.delta_a) > tol or abs(cavity.delta_c) > tol:
        raise NotResonant(
            f"requires delta_a = delta_c = 0, got delta_a={atom.delta_a:.3g}, "
            f"delta_c={cavity.delta_c:.3g} rad/s"
        )


def output_photons(state: StationaryState, cavity: CavityParams, drive: DriveParams) -> float:
    """Detected photons N*kappa_t*tau, doubled for an asymmetric input mirror."""
    n_out = state.n_photons * cavity.kappa_t * drive.tau
    return 2.0 * n_out if cavity.asymmetric_input else n_out


def intensity_report(
    atom: AtomParams, cavity: CavityParams, drive: DriveParams, g_local: float | None = None
) -> ResonantReport:
    """Intensity-difference statistic at arbitrary detunings (no resonance check)."""
    g = cavity.g_max if g_local is None else g_local
    empty = empty_cavity_state(cavity, drive)
    state = solve_stationary(atom, cavity, drive, g_local=g)
    n_out_empty = output_photons(empty, cavity, drive)
    n_out_atom = output_photons(state, cavity, drive)
    snr = (n_out_empty - n_out_atom) / math.sqrt(n_out_atom) if n_out_atom > 0 else 0.0
    m = 2.0 * atom.gamma * drive.tau * state.rho11
    saturation = 2.0 * g * g * state.n_photons / atom.gamma**2
    return ResonantReport(
        n_out_empty=n_out_empty,
        n_out_atom=n_out_atom,
        snr=snr,
        m_scattered=m,
        saturation=saturation,
    )


def snr_resonant(atom: AtomParams, cavity: CavityParams, drive: DriveParams) -> ResonantReport:
    """Full nonlinear SNR and scattering budget; both detunings must vanish."""
    check_resonant(atom, cavity)
    return intensity_report(atom, cavity, drive)


def snr_low_saturation(atom: AtomParams, cavity: CavityParams, drive: DriveParams) -> float:
    """Exact low-saturation closed form sqrt(j*tau)*(kT/k)*[(1+C) - 1/(1+C)]."""
    c = cooperativity(atom, cavity)
    return (
        math.sqrt(drive.j_in * drive.tau)
        * (cavity.kappa_t / cavity.kappa)
        * ((1.0 + c) - 1.0 / (1.0 + c))
    )


def snr_weak_limit(atom: AtomParams, cavity: CavityParams, drive: DriveParams) -> AsymptoticSnr:
    """Piecewise low-saturation limit: sqrt(j*tau)*C*(kT/k) times 2 (C<1) or 1 (C>=1).

    Assumes the symmetric-output convention (no asymmetric_input doubling).
    Caller is responsible for actually being at low saturation.
    """
    c = cooperativity(atom, cavity)
    regime, blended = classify_coupling(c)
    factor = 2.0 if c < 1.0 else 1.0
    value = factor * math.sqrt(drive.j_in * drive.tau) * c * (cavity.kappa_t / cavity.kappa)
    return AsymptoticSnr(value=value, regime=regime, blended=blended)


def snr_strong_limit(atom: AtomParams, drive: DriveParams) -> float:
    """High-saturation limit Gamma*sqrt(tau/j_in); no cavity parameter enters."""
    return atom.gamma * math.sqrt(drive.tau / drive.j_in)


def m_weak_limit(snr: float, atom: AtomParams, cavity: CavityParams) -> float:
    """Scattered photons needed for a given low-saturation SNR.

    M = S^2*(kappa/kappa_t) times (1/2)*C^-1 for C<1 or 2*C^-3 for C>=1;
    the branch switches with the piecewise SNR form.
    """
    c = cooperativity(atom, cavity)
    factor = 0.5 / c if c < 1.0 else 2.0 / c**3
    return snr * snr * (cavity.kappa / cavity.kappa_t) * factor


def saturation_pump(atom: AtomParams, cavity: CavityParams) -> float:
    """Pump rate where the empty-cavity field saturates the atom at resonance.

    Solves 2*g^2*N_empty = Gamma^2 with N_empty = j_in*kappa_t/kappa^2.
    """
    return atom.gamma**2 * cavity.kappa**2 / (2.0 * cavity.g_max**2 * cavity.kappa_t)


def max_snr_over_pump(
    atom: AtomParams,
    cavity: CavityParams,
    tau: float,
    n_decades: float = 4.0,
    per_decade: int = 61,
    polish: bool = True,
) -> PumpOptimum:
    """Maximize the resonant SNR over the pump rate.

    The scan grid is log-spaced and centered on the saturation pump, where
    the optimum sits; a golden-section polish refines the best grid point.
    """
    check_resonant(atom, cavity)
    j_sat = saturation_pump(atom, cavity)
    lo = j_sat * 10.0 ** (-0.5 * n_decades)
    hi = j_sat * 10.0 ** (0.5 * n_decades)

    def objective(j):
        return intensity_report(atom, cavity, DriveParams(j_in=j, tau=tau)).snr

    j_opt, _ = max_on_log_grid(objective, lo, hi, per_decade=per_decade, polish=polish)
    report = intensity_report(atom, cavity, DriveParams(j_in=j_opt, tau=tau))
    return PumpOptimum(j_in=j_opt, snr=report.snr, report=report)


def optimal_kappa_t(
    atom: AtomParams,
    cavity: CavityParams,
    drive: DriveParams,
    bounds: tuple[float, float] | None = None,
    rel_tol: float = 1e-4,
) -> KappaTOptimum:
    """Mirror transmission maximizing the pump-optimized SNR.

    cavity supplies g_max and kappa_loss; its kappa_t is ignored and
    searched over instead.  Default bounds span [kappa_loss/20, 5*kappa_loss];
    explicit bounds are required when kappa_loss = 0.  Results landing at a
    bound are flagged, not raised.
    """
    check_resonant(atom, cavity)
    if bounds is None:
        if cavity.kappa_loss <= 0:
            raise NoMaximumInBounds("explicit bounds required when kappa_loss = 0")
        bounds = (cavity.kappa_loss / 20.0, 5.0 * cavity.kappa_loss)
    lo, hi = bounds
    if not (0.0 < lo < hi):
        raise NoMaximumInBounds(f"invalid kappa_t bounds [{lo}, {hi}]")

    def objective(log_kt):
        trial = replace(cavity, kappa_t=math.exp(log_kt))
        return max_snr_over_pump(atom, trial, drive.tau, per_decade=31).snr

    log_kt, _ = golden_max(objective, math.log(lo), math.log(hi), rel_tol=rel_tol)
    kt = math.exp(log_kt)
    best = max_snr_over_pump(atom, replace(cavity, kappa_t=kt), drive.tau)
    return KappaTOptimum(
        kappa_t=kt,
        snr=best.snr,
        j_in=best.j_in,
        at_lower_bound=kt <= lo * 1.05,
        at_upper_bound=kt >= hi / 1.05,
    )


def fluorescence_reference(collection_fraction: float) -> float:
    """Scattered photons per detected photon for free-space imaging."""
    if not 0.0 < collection_fraction <= 1.0:
        raise ValueError("collection fraction must be in (0, 1]")
    return 1.0 / collection_fraction
