"""Minimal wave speeds, sharp fronts and the log-shift constant."""

from .params import ModelParams, density_to_pressure, pressure_to_density, reaction
from .phase import (
    IntegratorOptions,
    PhaseTrajectory,
    Termination,
    connect_to_saddle,
    front_slope,
    gamma,
    integrate_trajectory,
)
from .profile import (
    WaveProfile,
    cstar_profile_details,
    cstar_profile_form,
    dphi_dalpha_sup,
    ode_residual,
    reconstruct_profile,
    wave_profile,
)
from .sensitivity import Sensitivity, c_prime, cstar, psi_weight
from .speed import WaveSpeed, bracket_orientation, solve_min_speed

__all__ = [
    "IntegratorOptions",
    "ModelParams",
    "PhaseTrajectory",
    "Sensitivity",
    "Termination",
    "WaveProfile",
    "WaveSpeed",
    "bracket_orientation",
    "c_prime",
    "connect_to_saddle",
    "cstar",
    "cstar_profile_details",
    "cstar_profile_form",
    "density_to_pressure",
    "dphi_dalpha_sup",
    "front_slope",
    "gamma",
    "integrate_trajectory",
    "ode_residual",
    "pressure_to_density",
    "psi_weight",
    "reaction",
    "reconstruct_profile",
    "solve_min_speed",
    "wave_profile",
]
