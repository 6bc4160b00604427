"""Brute-force stationary solutions by damped multi-start Newton iteration.

Kept deliberately independent of :mod:`optolaser.steady_state`: the stationary
equations are written out again here, the Jacobian is taken by central
differences, and nothing from the closed-form branches is reused. With the
gauge Im(b) = 0 the stationary problem is six real equations in the six real
unknowns ``(Re a1, Im a1, Re a2, Im a2, b, delta_omega)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import SystemParams

FD_STEP = 1e-7
MAX_HALVINGS = 40
MAX_ITER = 100
POLISH_STEPS = 6
DEDUP_TOL = 1e-6
ZERO_TOL = 1e-9


@dataclass(frozen=True)
class OracleSolution:
    a1: complex
    a2: complex
    b_real: float
    delta_omega: float
    residual_norm: float
    newton_iterations: int

    @property
    def is_zero(self) -> bool:
        return abs(self.a2) < ZERO_TOL and self.b_real < ZERO_TOL

    @property
    def phi(self) -> float:
        return math.atan2(self.a2.imag, self.a2.real) if not self.is_zero else 0.0

    def invariants(self) -> np.ndarray:
        """Gauge-invariant coordinates (|a1|, |a2|, b, delta_omega, phi)."""
        return np.array([abs(self.a1), abs(self.a2), self.b_real, self.delta_omega, self.phi])


def residual(params: SystemParams, x: np.ndarray) -> np.ndarray:
    p = params
    a1 = complex(x[0], x[1])
    a2 = complex(x[2], x[3])
    b = x[4]
    dw = x[5]
    e1 = -(1j * p.delta_omega1 + p.gamma1) * a1 - 1j * p.g * a2 * b - 1j * p.omega_drive_amp
    e2 = -(1j * (p.delta_omega2 + dw) + p.gamma2) * a2 - 1j * p.g * a1 * b
    e3 = -(1j * (p.omega_b - dw) + p.gamma_b) * b - 1j * p.g * a1 * a2.conjugate()
    return np.array([e1.real, e1.imag, e2.real, e2.imag, e3.real, e3.imag])


def _fd_jacobian(params: SystemParams, x: np.ndarray) -> np.ndarray:
    jac = np.empty((6, 6))
    for j in range(6):
        step = np.zeros(6)
        step[j] = FD_STEP
        jac[:, j] = (residual(params, x + step) - residual(params, x - step)) / (2 * FD_STEP)
    return jac


def newton(params: SystemParams, x0: np.ndarray, tol: float) -> tuple[np.ndarray, float, int]:
    """Damped Newton; least-squares steps cope with the singular zero-type root."""
    x = np.array(x0, dtype=float)
    r = residual(params, x)
    norm = np.linalg.norm(r)
    it = 0
    for it in range(1, MAX_ITER + 1):
        if norm < tol:
            return _polish(params, x, norm, it - 1)
        step = np.linalg.lstsq(_fd_jacobian(params, x), -r, rcond=None)[0]
        lam = 1.0
        for _ in range(MAX_HALVINGS + 1):
            trial = x + lam * step
            r_trial = residual(params, trial)
            n_trial = np.linalg.norm(r_trial)
            if n_trial < norm:
                break
            lam *= 0.5
        else:
            return x, norm, it
        x, r, norm = trial, r_trial, n_trial
    return x, norm, it


def _polish(params: SystemParams, x: np.ndarray, norm: float, iterations: int):
    # a few undamped steps past the tolerance drive the root to round-off level
    for _ in range(POLISH_STEPS):
        step = np.linalg.lstsq(_fd_jacobian(params, x), -residual(params, x), rcond=None)[0]
        trial = x + step
        n_trial = np.linalg.norm(residual(params, trial))
        if not n_trial < norm:
            break
        x, norm = trial, n_trial
        iterations += 1
    return x, norm, iterations


def _canonical(x: np.ndarray, norm: float, iterations: int) -> OracleSolution:
    a1 = complex(x[0], x[1])
    a2 = complex(x[2], x[3])
    b = float(x[4])
    dw = float(x[5])
    if b < 0:
        # half-turn of the U(1) symmetry restores b >= 0
        a2, b = -a2, -b
    if abs(a2) < ZERO_TOL and b < ZERO_TOL:
        # delta_omega is undetermined on the zero-type root
        a2, b, dw = 0j, 0.0, 0.0
    return OracleSolution(a1, a2, b, dw, norm, iterations)


def solve_stationary(params: SystemParams, n_starts: int = 200, seed: int = 0) -> list[OracleSolution]:
    """All distinct stationary solutions reached from ``n_starts`` random starts."""
    if n_starts < 1:
        raise ValueError("n_starts must be >= 1")
    tol = 1e-10 * max(1.0, params.omega_drive_amp)
    rng = np.random.default_rng(seed)
    wb = abs(params.omega_b)
    starts = np.empty((n_starts, 6))
    starts[:, :5] = rng.uniform(-2.0, 2.0, size=(n_starts, 5))
    starts[:, 5] = rng.uniform(-wb, 2.0 * wb, size=n_starts)

    found = []
    for x0 in starts:
        x, norm, its = newton(params, x0, tol)
        if norm < tol:
            found.append(_canonical(x, norm, its))
    found.sort(key=lambda s: tuple(s.invariants()))
    unique: list[OracleSolution] = []
    for sol in found:
        if all(np.max(np.abs(sol.invariants() - u.invariants())) >= DEDUP_TOL for u in unique):
            unique.append(sol)
    return unique


def _branch_invariants(point) -> np.ndarray:
    return np.array([abs(point.a1st), point.a2_mod, point.b_mod, point.delta_omega, point.phi])


def _distance(u: np.ndarray, v: np.ndarray) -> float:
    d = np.abs(u - v)
    d[4] = abs(math.remainder(u[4] - v[4], 2 * math.pi))
    return float(d.max())


@dataclass
class Comparison:
    """Pairing of oracle roots with closed-form branches."""

    matches: list  # (OracleSolution, BranchPoint, deviation)
    unmatched_roots: list
    missing_branches: list

    @property
    def max_deviation(self) -> float:
        return max((m[2] for m in self.matches), default=0.0)

    @property
    def n_classes(self) -> int:
        return len(self.matches) + len(self.unmatched_roots)


def compare_with_analytic(params: SystemParams, roots: list[OracleSolution],
                          tol: float = 1e-8) -> Comparison:
    from .steady_state import all_branches

    branches = all_branches(params)
    matches, unmatched = [], []
    used = set()
    for root in roots:
        dists = [_distance(root.invariants(), _branch_invariants(b)) for b in branches]
        k = int(np.argmin(dists))
        if dists[k] <= tol and k not in used:
            used.add(k)
            matches.append((root, branches[k], dists[k]))
        else:
            unmatched.append(root)
    missing = [b for k, b in enumerate(branches) if k not in used]
    return Comparison(matches, unmatched, missing)
