"""Closed-form stationary solutions, thresholds and the soft/hard classification.

A stationary solution has constant intensities with a2 and b counter-rotating
at the generated phonon frequency ``delta_omega`` in the drive frame:
``a2 = a2st e^{i dw t}``, ``b = bst e^{-i dw t}``. Only the product a2st*bst
is fixed by the equations; the gauge used here takes ``bst`` real and
non-negative.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

import numpy as np

from .model import ModeState, SystemParams

BOUNDARY_TOL = 1e-12
ROUNDOFF = 1e-13


class RangeError(ValueError):
    """Invalid sweep range or point count."""


class Branch(str, enum.Enum):
    ZERO = "zero"
    PLUS = "plus"
    MINUS = "minus"


class ExcitationClass(str, enum.Enum):
    SOFT = "soft"
    HARD = "hard"
    BOUNDARY = "boundary"


@dataclass(frozen=True)
class BranchPoint:
    branch: Branch
    a1st: complex
    a2_mod: float
    b_mod: float
    phi: float
    delta_omega: float
    delta2: float
    delta_b: float
    intensity_a2: float

    @property
    def a2st(self) -> complex:
        return self.a2_mod * cmath.exp(1j * self.phi)

    def state(self) -> ModeState:
        """Gauge-fixed amplitudes at t = 0."""
        return ModeState(self.a1st, self.a2st, complex(self.b_mod))

    @property
    def expected_unstable(self) -> bool:
        return self.branch is Branch.MINUS


def stationary_residuals(params: SystemParams, state: ModeState, delta_omega: float) -> np.ndarray:
    """Left-hand sides of the three complex stationary equations."""
    p = params
    a1, a2, b = state.a1, state.a2, state.b
    delta2 = p.delta_omega2 + delta_omega
    delta_b = p.omega_b - delta_omega
    r1 = -(1j * p.delta_omega1 + p.gamma1) * a1 - 1j * p.g * a2 * b - 1j * p.omega_drive_amp
    r2 = -(1j * delta2 + p.gamma2) * a2 - 1j * p.g * a1 * b.conjugate()
    r3 = -(1j * delta_b + p.gamma_b) * b - 1j * p.g * a1 * a2.conjugate()
    return np.array([r1, r2, r3])


def branch_residual(params: SystemParams, point: BranchPoint) -> float:
    return float(np.max(np.abs(stationary_residuals(params, point.state(), point.delta_omega))))


def zero_branch(params: SystemParams) -> BranchPoint:
    """Forced oscillation of mode 1 alone (a2 = b = 0)."""
    p = params
    a1 = -1j * p.omega_drive_amp / (1j * p.delta_omega1 + p.gamma1)
    return BranchPoint(
        branch=Branch.ZERO,
        a1st=a1,
        a2_mod=0.0,
        b_mod=0.0,
        phi=0.0,
        delta_omega=0.0,
        delta2=p.delta_omega2,
        delta_b=p.omega_b,
        intensity_a2=0.0,
    )


def delta2_locked(params: SystemParams) -> float:
    """Effective mode-2 detuning fixed by the ratio of the two damping rates."""
    p = params
    return (p.delta_omega2 + p.omega_b) * p.gamma2 / (p.gamma2 + p.gamma_b)


def generated_frequency(params: SystemParams) -> float:
    """Phonon frequency ``delta_omega`` selected by a nonzero solution."""
    return delta2_locked(params) - params.delta_omega2


def _phase_terms(params: SystemParams) -> tuple[float, float]:
    # (dw1*D2 - g1*g2, dw1*g2 + g1*D2), the two combinations that recur everywhere
    p = params
    d2 = delta2_locked(p)
    return p.delta_omega1 * d2 - p.gamma1 * p.gamma2, p.delta_omega1 * p.gamma2 + p.gamma1 * d2


def omega_ex(params: SystemParams) -> float:
    """Smallest drive amplitude for which the phase condition can be met."""
    p = params
    _, quad = _phase_terms(p)
    return abs(quad) / p.g * math.sqrt(p.gamma_b / p.gamma2)


def omega_th(params: SystemParams) -> float:
    """Drive amplitude at which the zero solution loses stability."""
    p = params
    inphase, quad = _phase_terms(p)
    return math.sqrt(p.gamma_b / p.gamma2) * math.hypot(quad, inphase) / p.g


def _offset_term(params: SystemParams) -> float:
    p = params
    inphase, _ = _phase_terms(p)
    return p.gamma_b / p.gamma2 * inphase / p.g**2


def nonzero_branch(params: SystemParams, sign: Branch) -> BranchPoint | None:
    """Plus or Minus nonzero stationary solution, or None where it does not exist."""
    sign = Branch(sign)
    if sign is Branch.ZERO:
        raise ValueError("sign must be Branch.PLUS or Branch.MINUS")
    p = params
    om = p.omega_drive_amp
    om_ex = omega_ex(p)
    if om <= 0.0 or om < om_ex:
        return None
    ratio = p.gamma_b / p.gamma2
    root = math.sqrt(max(om * om - om_ex * om_ex, 0.0))
    s = 1.0 if sign is Branch.PLUS else -1.0
    offset = _offset_term(p)
    intensity = s * math.sqrt(ratio) / p.g * root + offset
    if intensity < 0.0:
        # cancellation at the threshold itself leaves round-off of either sign
        if intensity < -ROUNDOFF * max(1.0, abs(offset)):
            return None
        intensity = 0.0

    d2 = delta2_locked(p)
    dw = d2 - p.delta_omega2
    inphase, quad = _phase_terms(p)
    cos_part = inphase / p.g * math.sqrt(ratio) - p.g * math.sqrt(1.0 / ratio) * intensity
    sin_part = quad / p.g * math.sqrt(ratio)
    phi = math.atan2(sin_part / om, cos_part / om)
    if phi <= -math.pi:
        phi += 2.0 * math.pi

    a2_mod = math.sqrt(intensity)
    b_mod = math.sqrt(intensity / ratio)
    a2 = a2_mod * cmath.exp(1j * phi)
    if b_mod > 0.0:
        a1 = -(1j * d2 + p.gamma2) / (1j * p.g) * (a2 / b_mod)
    else:
        # degenerate touch point with the zero solution
        a1 = -1j * om / (1j * p.delta_omega1 + p.gamma1)
    return BranchPoint(
        branch=sign,
        a1st=a1,
        a2_mod=a2_mod,
        b_mod=b_mod,
        phi=phi,
        delta_omega=dw,
        delta2=d2,
        delta_b=p.omega_b - dw,
        intensity_a2=intensity,
    )


def all_branches(params: SystemParams) -> list[BranchPoint]:
    out = [zero_branch(params)]
    for sign in (Branch.PLUS, Branch.MINUS):
        point = nonzero_branch(params, sign)
        if point is not None:
            out.append(point)
    return out


def jump_magnitude(params: SystemParams) -> float:
    """Intensity of mode 2 on the Plus branch at the generation threshold.

    Positive values are the size of the jump in hard excitation; zero or
    negative values mean soft excitation.
    """
    p = params
    return 2.0 * p.gamma_b * (p.delta_omega1 * (p.delta_omega2 + p.omega_b) / (p.gamma2 + p.gamma_b) - p.gamma1) / p.g**2


def excitation_class(params: SystemParams) -> ExcitationClass:
    p = params
    margin = p.delta_omega1 * (p.delta_omega2 + p.omega_b) - p.gamma1 * (p.gamma2 + p.gamma_b)
    if abs(margin) <= BOUNDARY_TOL:
        return ExcitationClass.BOUNDARY
    return ExcitationClass.HARD if margin > 0 else ExcitationClass.SOFT


def max_jump(params: SystemParams) -> float:
    """Vanishing-optical-loss limit of :func:`jump_magnitude`."""
    p = params
    return 2.0 * p.delta_omega1 * (p.delta_omega2 + p.omega_b) / p.g**2


@dataclass
class AnalyticCurve:
    omega: np.ndarray
    intensity_a1_zero: np.ndarray
    zero_stable: np.ndarray
    intensity_a2_plus: np.ndarray  # nan where the branch does not exist
    intensity_a2_minus: np.ndarray
    omega_ex: float
    omega_th: float

    @property
    def intensity_a2_zero(self) -> np.ndarray:
        return np.zeros_like(self.omega)

    def rows(self):
        header = ["omega", "I1_zero", "I2_zero", "zero_stable", "I2_plus", "I2_minus"]
        body = zip(self.omega, self.intensity_a1_zero, self.intensity_a2_zero,
                   self.zero_stable.astype(int), self.intensity_a2_plus, self.intensity_a2_minus)
        return header, [list(r) for r in body]


def laser_curve_analytic(params: SystemParams, omega_min: float, omega_max: float,
                         n_points: int) -> AnalyticCurve:
    if not (0.0 <= omega_min < omega_max) or n_points < 2:
        raise RangeError(f"need 0 <= omega_min < omega_max and n_points >= 2, "
                         f"got [{omega_min}, {omega_max}] x {n_points}")
    omegas = np.linspace(omega_min, omega_max, n_points)
    th = omega_th(params)
    i1 = np.empty(n_points)
    plus = np.full(n_points, np.nan)
    minus = np.full(n_points, np.nan)
    for k, om in enumerate(omegas):
        p = params.with_drive(om)
        i1[k] = abs(zero_branch(p).a1st) ** 2
        for sign, column in ((Branch.PLUS, plus), (Branch.MINUS, minus)):
            point = nonzero_branch(p, sign)
            if point is not None:
                column[k] = point.intensity_a2
    return AnalyticCurve(omegas, i1, omegas < th, plus, minus, omega_ex(params), th)
