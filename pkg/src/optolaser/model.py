"""Parameters, state and the mean-field equations of motion.

Everything is expressed in units of a reference frequency (set to 1). The
optical modes are written in the frame rotating at the drive frequency, the
phonon mode in the lab frame, which makes the system autonomous:

    da1/dt = -(i dw1 + g1) a1 - i g a2 b - i Omega
    da2/dt = -(i dw2 + g2) a2 - i g a1 conj(b)
    db/dt  = -(i wb  + gb) b  - i g a1 conj(a2)
"""

from __future__ import annotations

import math
from dataclasses import astuple, dataclass, fields, replace

import numpy as np


@dataclass(frozen=True)
class SystemParams:
    delta_omega1: float
    delta_omega2: float
    omega_b: float
    gamma1: float
    gamma2: float
    gamma_b: float
    g: float
    omega_drive_amp: float = 0.0

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if not math.isfinite(value):
                raise ValueError(f"{f.name} must be finite, got {value!r}")
        for name in ("gamma1", "gamma2", "gamma_b", "g"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be strictly positive")
        if self.omega_drive_amp < 0:
            raise ValueError("omega_drive_amp must be non-negative")

    def with_drive(self, omega: float) -> SystemParams:
        return replace(self, omega_drive_amp=float(omega))

    def replace(self, **changes) -> SystemParams:
        return replace(self, **changes)

    def as_array(self) -> np.ndarray:
        """Flat vector in the layout expected by the compiled kernels."""
        return np.array(astuple(self), dtype=np.float64)


@dataclass(frozen=True)
class ModeState:
    a1: complex = 0j
    a2: complex = 0j
    b: complex = 0j

    def __post_init__(self):
        for name in ("a1", "a2", "b"):
            value = complex(getattr(self, name))
            if not (math.isfinite(value.real) and math.isfinite(value.imag)):
                raise ValueError(f"{name} must be finite")
            object.__setattr__(self, name, value)

    @classmethod
    def from_array(cls, y) -> ModeState:
        return cls(complex(y[0]), complex(y[1]), complex(y[2]))

    def as_array(self) -> np.ndarray:
        return np.array([self.a1, self.a2, self.b], dtype=np.complex128)

    @property
    def intensities(self) -> tuple[float, float, float]:
        return abs(self.a1) ** 2, abs(self.a2) ** 2, abs(self.b) ** 2


def rhs(params: SystemParams, state: ModeState) -> ModeState:
    """Time derivative of ``state`` in the drive rotating frame."""
    p = params
    a1, a2, b = state.a1, state.a2, state.b
    da1 = -(1j * p.delta_omega1 + p.gamma1) * a1 - 1j * p.g * a2 * b - 1j * p.omega_drive_amp
    da2 = -(1j * p.delta_omega2 + p.gamma2) * a2 - 1j * p.g * a1 * b.conjugate()
    db = -(1j * p.omega_b + p.gamma_b) * b - 1j * p.g * a1 * a2.conjugate()
    return ModeState(da1, da2, db)


def phase_rotate(state: ModeState, theta: float) -> ModeState:
    """Apply the U(1) symmetry a2 -> a2 e^{i theta}, b -> b e^{-i theta}."""
    u = complex(math.cos(theta), math.sin(theta))
    return ModeState(state.a1, state.a2 * u, state.b * u.conjugate())


# the derivative transforms exactly like the state
phase_rotate_derivative = phase_rotate


# Figure presets (reference frequency = 1). The coupling printed in the
# figure caption lacks its mantissa; g = 1e-2 is used throughout.
_COMMON = dict(delta_omega2=5e-3, omega_b=5e-3, gamma1=1e-2, gamma2=1e-3, gamma_b=1e-3, g=1e-2)

FIG1A = SystemParams(delta_omega1=-4e-3, **_COMMON)
FIG1B = SystemParams(delta_omega1=2e-3, **_COMMON)
FIG1C = SystemParams(delta_omega1=4e-3, **_COMMON)

# detuning of mode 2 follows mode 1 with this offset in the 2D map
FIG2_OFFSET = 2e-3

PRESETS = {"fig1a": FIG1A, "fig1b": FIG1B, "fig1c": FIG1C}
