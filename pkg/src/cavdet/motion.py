"""Measurement back-action on atomic motion along the cavity standing wave.

Resonant detection heats the atom through photon recoil and dipole-force
fluctuations.  At low saturation the momentum diffusion coefficient along
the cavity axis is

    D(z) = Gamma*(hbar*k)^2*eta^2*g^2 / (Gamma*kappa + g^2*cos^2(k*z))^2,

largest at field nodes for a strongly coupled cavity, where an atom still
spoils the resonance without scattering.  Averaging the detection
quantities over a flat position distribution along the axis gives S_bar,
M_bar, D_bar and the resulting momentum and position spreads after one
integration time.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from scipy.constants import hbar as HBAR

from .errors import SaturationWarning
from .params import AtomParams, CavityParams, DriveParams, cooperativity
from .resonant_detection import check_resonant
from .steady_state import solve_stationary

SATURATION_MAX = 0.1  # validity edge of the low-saturation forms


@dataclass(frozen=True)
class MotionAverages:
    """Axis-averaged detection and heating figures for one transit.

    delta_p is in recoil units (hbar*k); delta_z is SI meters.
    """

    s_bar: float
    m_bar: float
    d_bar: float
    delta_p: float
    delta_z: float


def _warn_if_saturated(atom, cavity, drive):
    state = solve_stationary(atom, cavity, drive)
    sat = 2.0 * cavity.g_max**2 * state.n_photons / atom.gamma**2
    if sat > SATURATION_MAX:
        warnings.warn(
            f"antinode saturation {sat:.3g} exceeds {SATURATION_MAX}; the "
            "low-saturation motion formulas are extrapolating",
            SaturationWarning,
            stacklevel=3,
        )


def diffusion_coefficient(
    atom: AtomParams, cavity: CavityParams, drive: DriveParams, z: float | np.ndarray
):
    """Momentum diffusion coefficient D at axial position z (kg^2 m^2/s^3).

    Valid at low saturation with both detunings zero; warns when the
    antinode saturation exceeds the validity edge.
    """
    check_resonant(atom, cavity)
    _warn_if_saturated(atom, cavity, drive)
    k = atom.k
    eta2 = drive.j_in * cavity.kappa_t
    g2 = cavity.g_max**2
    denom = atom.gamma * cavity.kappa + g2 * np.cos(k * np.asarray(z)) ** 2
    d = atom.gamma * (HBAR * k) ** 2 * eta2 * g2 / denom**2
    return float(d) if np.isscalar(z) else d


def spatial_averages(atom: AtomParams, cavity: CavityParams, drive: DriveParams) -> MotionAverages:
    """Detection and heating figures averaged over the standing wave.

    The average is one-dimensional, over the axial coordinate only; the
    transverse Gaussian profile is not averaged here.  Closed forms:

        S_bar = sqrt(j*tau)*(kT/k)*(1 + C/2 - (1+C)^(-1/2))
        M_bar = j*tau*(kT/k)*C*(1+C)^(-3/2)
        D_bar = ((hbar*k)^2/tau)*(1 + C/2)*M_bar
        delta_p = hbar*k*sqrt(2*M_bar*(1 + C/2))
        delta_z = (delta_p_SI/mass)*tau/sqrt(3)
    """
    check_resonant(atom, cavity)
    _warn_if_saturated(atom, cavity, drive)
    c = cooperativity(atom, cavity)
    jt = drive.j_in * drive.tau
    ratio = cavity.kappa_t / cavity.kappa
    s_bar = math.sqrt(jt) * ratio * (1.0 + 0.5 * c - 1.0 / math.sqrt(1.0 + c))
    m_bar = jt * ratio * c / (1.0 + c) ** 1.5
    hk = HBAR * atom.k
    d_bar = hk**2 / drive.tau * (1.0 + 0.5 * c) * m_bar
    delta_p = math.sqrt(2.0 * m_bar * (1.0 + 0.5 * c))
    delta_z = (delta_p * hk / atom.mass) * drive.tau / math.sqrt(3.0)
    return MotionAverages(
        s_bar=s_bar, m_bar=m_bar, d_bar=d_bar, delta_p=delta_p, delta_z=delta_z
    )
