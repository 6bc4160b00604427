"""Mean-field model of a two-mode optomechanical laser with hard excitation."""

__version__ = "0.1.0"

from .model import FIG1A, FIG1B, FIG1C, ModeState, SystemParams, phase_rotate, rhs
from .steady_state import (Branch, BranchPoint, ExcitationClass, delta2_locked, excitation_class,
                           jump_magnitude, laser_curve_analytic, max_jump, nonzero_branch, omega_ex,
                           omega_th, zero_branch)

__all__ = [
    "FIG1A", "FIG1B", "FIG1C", "ModeState", "SystemParams", "phase_rotate", "rhs",
    "Branch", "BranchPoint", "ExcitationClass", "delta2_locked", "excitation_class",
    "jump_magnitude", "laser_curve_analytic", "max_jump", "nonzero_branch", "omega_ex",
    "omega_th", "zero_branch",
]
