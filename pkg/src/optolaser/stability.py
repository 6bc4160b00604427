"""Linear stability of stationary solutions.

Nonzero solutions are limit cycles in the drive frame (a2 and b rotate at
the generated frequency). Moving to a frame that co-rotates with them turns
each solution into a fixed point of an autonomous system with effective
detunings (dw1, D2, Db), which is then linearised in real coordinates
``(Re a1, Im a1, Re a2, Im a2, Re b, Im b)``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .model import SystemParams
from .steady_state import Branch, BranchPoint, branch_residual, zero_branch

GOLDSTONE_TOL = 1e-9
MARGIN_TOL = 1e-9
RESIDUAL_TOL = 1e-8


class StabilityError(ValueError):
    """Raised when a branch is not a fixed point or a bracket is invalid."""


class EigenError(ArithmeticError):
    pass


class Verdict(str, enum.Enum):
    STABLE = "stable"
    UNSTABLE = "unstable"
    MARGINAL = "marginal"


@dataclass(frozen=True)
class StabilityReport:
    eigenvalues: np.ndarray
    goldstone_index: int | None
    max_re_effective: float
    verdict: Verdict


def _lin(c: complex) -> np.ndarray:
    # real 2x2 block of z -> c z
    return np.array([[c.real, -c.imag], [c.imag, c.real]])


def _lin_conj(c: complex) -> np.ndarray:
    # real 2x2 block of z -> c conj(z)
    return np.array([[c.real, c.imag], [c.imag, -c.real]])


def jacobian(params: SystemParams, branch: BranchPoint, check: bool = True) -> np.ndarray:
    """Real 6x6 Jacobian at ``branch`` in its co-rotating frame."""
    p = params
    if check:
        res = branch_residual(p, branch)
        if not res < RESIDUAL_TOL * max(1.0, p.omega_drive_amp):
            raise StabilityError(f"branch {branch.branch.value} is not stationary (residual {res:.3e})")
    a1, a2, b = branch.a1st, branch.a2st, complex(branch.b_mod)
    ig = -1j * p.g
    blocks = [
        [_lin(-(1j * p.delta_omega1 + p.gamma1)), _lin(ig * b), _lin(ig * a2)],
        [_lin(ig * b.conjugate()), _lin(-(1j * branch.delta2 + p.gamma2)), _lin_conj(ig * a1)],
        [_lin(ig * a2.conjugate()), _lin_conj(ig * a1), _lin(-(1j * branch.delta_b + p.gamma_b))],
    ]
    return np.block(blocks)


def eigenvalues6(matrix: np.ndarray) -> np.ndarray:
    """All eigenvalues of a small dense real matrix, residual-checked."""
    a = np.asarray(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise EigenError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise EigenError(f"non-finite entries in\n{a}")
    try:
        w, v = np.linalg.eig(a)
    except np.linalg.LinAlgError as exc:
        raise EigenError(f"eigen-solve failed ({exc}) for\n{a}") from exc
    scale = max(np.linalg.norm(a, 2), np.finfo(float).tiny)
    resid = np.linalg.norm(a @ v - v * w, axis=0)
    if np.any(resid > 1e-8 * scale):
        raise EigenError(f"eigenpair residual {resid.max():.3e} too large for\n{a}")
    return w


def assess(params: SystemParams, branch: BranchPoint) -> StabilityReport:
    w = eigenvalues6(jacobian(params, branch))
    goldstone = None
    if branch.branch is not Branch.ZERO:
        near = np.flatnonzero(np.abs(w.real) < GOLDSTONE_TOL)
        if near.size:
            goldstone = int(near[np.argmin(np.abs(w[near]))])
    rest = np.delete(w.real, goldstone) if goldstone is not None else w.real
    top = float(rest.max())
    if top < -MARGIN_TOL:
        verdict = Verdict.STABLE
    elif top > MARGIN_TOL:
        verdict = Verdict.UNSTABLE
    else:
        verdict = Verdict.MARGINAL
    return StabilityReport(w, goldstone, top, verdict)


def zero_growth_rate(params: SystemParams) -> float:
    """Largest real part of the zero-solution spectrum."""
    return float(eigenvalues6(jacobian(params, zero_branch(params), check=False)).real.max())


def numeric_threshold(params: SystemParams, omega_lo: float, omega_hi: float,
                      width: float = 1e-10) -> float:
    """Drive amplitude where the zero solution turns unstable, by bisection."""
    f_lo = zero_growth_rate(params.with_drive(omega_lo))
    f_hi = zero_growth_rate(params.with_drive(omega_hi))
    if not (f_lo < 0.0 < f_hi):
        raise StabilityError(
            f"no stability change in [{omega_lo}, {omega_hi}] (growth rates {f_lo:.3e}, {f_hi:.3e})")
    lo, hi = omega_lo, omega_hi
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        if zero_growth_rate(params.with_drive(mid)) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
