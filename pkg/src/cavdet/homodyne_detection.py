"""Dispersive detection: cavity phase shift read out by balanced homodyne.

Far off atomic resonance the atom mostly shifts the cavity line instead of
absorbing.  With the pump held on the cavity resonance (delta_c = 0), the
transmitted field acquires a phase

    phi = -U/kappa

from the self-consistent light shift U, and an ideal balanced homodyne
measurement of that phase reaches

    S_hom = 2*sqrt(N_out)*|sin(phi)|

at the shot-noise limit.  The scattering budget M = 2*Gamma*tau*rho11 is
what the scheme is meant to keep small.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

from .errors import NoMaximumInBounds, NotDispersive, SmallDetuningWarning
from .optimize import golden_max, max_on_log_grid
from .params import AtomParams, CavityParams, DriveParams, cooperativity
from .resonant_detection import KappaTOptimum, output_photons
from .steady_state import empty_cavity_state, solve_stationary

SMALL_ANGLE_MAX = 0.3  # |phi| beyond which the linearized forms degrade


@dataclass(frozen=True)
class HomodyneReport:
    """Observables of one homodyne measurement."""

    phase_shift: float
    snr: float
    n_out: float
    n_out_empty: float
    m_scattered: float
    small_angle_valid: bool


def homodyne_report(
    atom: AtomParams, cavity: CavityParams, drive: DriveParams, g_local: float | None = None
) -> HomodyneReport:
    """Full nonlinear homodyne observables; pump must sit on the cavity line."""
    if abs(cavity.delta_c) > 1e-9 * atom.gamma:
        raise NotDispersive(f"requires delta_c = 0, got {cavity.delta_c:.3g} rad/s")
    if abs(atom.delta_a) < 10.0 * atom.gamma:
        warnings.warn(
            "atomic detuning below 10*Gamma; absorption competes with the "
            "dispersive phase shift",
            SmallDetuningWarning,
            stacklevel=2,
        )
    state = solve_stationary(atom, cavity, drive, g_local=g_local)
    phi = -state.light_shift / cavity.kappa
    n_out = output_photons(state, cavity, drive)
    n_out_empty = output_photons(empty_cavity_state(cavity, drive), cavity, drive)
    snr = 2.0 * math.sqrt(n_out) * abs(math.sin(phi))
    m = 2.0 * atom.gamma * drive.tau * state.rho11
    return HomodyneReport(
        phase_shift=phi,
        snr=snr,
        n_out=n_out,
        n_out_empty=n_out_empty,
        m_scattered=m,
        small_angle_valid=abs(phi) < SMALL_ANGLE_MAX,
    )


def snr_homodyne_weak_limit(atom: AtomParams, cavity: CavityParams, drive: DriveParams) -> float:
    """Low-saturation closed form 2*sqrt(j*tau)*(kT/k)*g^2/(delta_a*kappa)."""
    return (
        2.0
        * math.sqrt(drive.j_in * drive.tau)
        * (cavity.kappa_t / cavity.kappa)
        * cavity.g_max**2
        / (abs(atom.delta_a) * cavity.kappa)
    )


def snr_homodyne_strong_limit(atom: AtomParams, drive: DriveParams) -> float:
    """High-saturation limit |delta_a|*sqrt(tau/j_in); cavity-independent."""
    return abs(atom.delta_a) * math.sqrt(drive.tau / drive.j_in)


def m_homodyne(snr: float, atom: AtomParams, cavity: CavityParams) -> float:
    """Scattered photons for a given homodyne SNR at low saturation.

    M = S_hom^2*(kappa/kappa_t)*(1/2)*C^-1, the same budget as weakly
    coupled resonant detection.
    """
    c = cooperativity(atom, cavity)
    return snr * snr * (cavity.kappa / cavity.kappa_t) * 0.5 / c


def n_out_required(snr: float, atom: AtomParams, cavity: CavityParams) -> float:
    """Detected photons needed for a given homodyne SNR at low saturation.

    N_out = (1/4)*S_hom^2*(Gamma*kappa/g^2)^2*(delta_a/Gamma)^2, a factor
    (delta_a/Gamma)^2 more light than the resonant scheme needs.
    """
    return (
        0.25
        * snr
        * snr
        * (atom.gamma * cavity.kappa / cavity.g_max**2) ** 2
        * (atom.delta_a / atom.gamma) ** 2
    )


def dispersive_saturation_pump(atom: AtomParams, cavity: CavityParams) -> float:
    """Pump rate where the empty-cavity field saturates the detuned atom."""
    d0 = atom.delta_a**2 + atom.gamma**2
    n_sat = d0 / (2.0 * cavity.g_max**2)
    return n_sat * cavity.kappa**2 / cavity.kappa_t


def max_snr_hom_over_pump(
    atom: AtomParams,
    cavity: CavityParams,
    tau: float,
    n_decades: float = 4.0,
    per_decade: int = 61,
    polish: bool = True,
) -> tuple[float, float]:
    """Maximize S_hom over the pump rate; returns (j_in, snr)."""
    j_sat = dispersive_saturation_pump(atom, cavity)
    lo = j_sat * 10.0 ** (-0.5 * n_decades)
    hi = j_sat * 10.0 ** (0.5 * n_decades)

    def objective(j):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", SmallDetuningWarning)
            return homodyne_report(atom, cavity, DriveParams(j_in=j, tau=tau)).snr

    return max_on_log_grid(objective, lo, hi, per_decade=per_decade, polish=polish)


def optimal_kappa_t_homodyne(
    atom: AtomParams,
    cavity: CavityParams,
    drive: DriveParams,
    bounds: tuple[float, float] | None = None,
    rel_tol: float = 1e-4,
) -> KappaTOptimum:
    """Mirror transmission maximizing the pump-optimized homodyne SNR.

    Same contract as the resonant optimizer: cavity supplies g_max and
    kappa_loss, kappa_t is searched, bound hits are flagged.
    """
    if bounds is None:
        if cavity.kappa_loss <= 0:
            raise NoMaximumInBounds("explicit bounds required when kappa_loss = 0")
        bounds = (cavity.kappa_loss / 20.0, 5.0 * cavity.kappa_loss)
    lo, hi = bounds
    if not (0.0 < lo < hi):
        raise NoMaximumInBounds(f"invalid kappa_t bounds [{lo}, {hi}]")

    def objective(log_kt):
        trial = replace(cavity, kappa_t=math.exp(log_kt))
        return max_snr_hom_over_pump(atom, trial, drive.tau, per_decade=31)[1]

    log_kt, _ = golden_max(objective, math.log(lo), math.log(hi), rel_tol=rel_tol)
    kt = math.exp(log_kt)
    j_opt, snr = max_snr_hom_over_pump(atom, replace(cavity, kappa_t=kt), drive.tau)
    return KappaTOptimum(
        kappa_t=kt,
        snr=snr,
        j_in=j_opt,
        at_lower_bound=kt <= lo * 1.05,
        at_upper_bound=kt >= hi / 1.05,
    )
