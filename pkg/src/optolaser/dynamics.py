"""Deterministic fixed-step RK4 integration and extraction of steady observables."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import rk4_run
from .model import ModeState, SystemParams
from .steady_state import zero_branch

MAX_STEPS = 2_000_000_000


class DivergenceError(ArithmeticError):
    def __init__(self, t: float):
        super().__init__(f"non-finite state at t = {t:.6g}")
        self.t = t


@dataclass(frozen=True)
class IntegratorConfig:
    dt: float = 0.01
    t_end: float = 2e4
    seed_amplitude: float = 1e-6
    tail_fraction: float = 0.25
    stationarity_tol: float = 1e-6
    save_interval: float = 1.0
    max_doublings: int = 2

    def __post_init__(self):
        if not self.dt > 0 or not self.t_end > 0:
            raise ValueError("dt and t_end must be positive")
        if self.seed_amplitude < 0:
            raise ValueError("seed_amplitude must be non-negative")
        if not 0.0 < self.tail_fraction < 1.0:
            raise ValueError("tail_fraction must lie in (0, 1)")
        if not self.save_interval > 0 or self.max_doublings < 0:
            raise ValueError("save_interval must be positive and max_doublings non-negative")
        if self.t_end / self.dt * 2**self.max_doublings > MAX_STEPS:
            raise ValueError("step budget exceeded: increase dt or reduce t_end")

    @property
    def stride(self) -> int:
        return max(1, int(round(self.save_interval / self.dt)))


@dataclass
class Trajectory:
    t: np.ndarray
    states: np.ndarray  # shape (n, 3) complex: a1, a2, b

    @property
    def intensities(self) -> np.ndarray:
        return np.abs(self.states) ** 2

    @property
    def final(self) -> ModeState:
        return ModeState.from_array(self.states[-1])

    def rows(self):
        header = ["t", "re_a1", "im_a1", "re_a2", "im_a2", "re_b", "im_b", "I1", "I2", "Ib"]
        s, inten = self.states, self.intensities
        body = np.column_stack([self.t, s[:, 0].real, s[:, 0].imag, s[:, 1].real, s[:, 1].imag,
                                s[:, 2].real, s[:, 2].imag, inten])
        return header, body.tolist()


@dataclass(frozen=True)
class SteadyObservables:
    I1: float
    I2: float
    Ib: float
    delta_omega_est: float
    converged: bool
    final_state: ModeState
    t_total: float


def integrate(params: SystemParams, init: ModeState, config: IntegratorConfig,
              t_end: float | None = None, t0: float = 0.0) -> Trajectory:
    """RK4 trajectory sampled every ``config.stride`` steps."""
    duration = config.t_end if t_end is None else t_end
    n_steps = int(round(duration / config.dt))
    stride = min(config.stride, max(n_steps, 1))
    samples, bad = rk4_run(params.as_array(), init.as_array(), config.dt, n_steps, stride)
    if bad >= 0:
        raise DivergenceError(t0 + bad * config.dt)
    t = t0 + np.arange(len(samples)) * stride * config.dt
    return Trajectory(t, samples)


def seeded_start(params: SystemParams, seed_amplitude: float) -> ModeState:
    """Zero solution plus a small real kick on the phonon mode."""
    return ModeState(zero_branch(params).a1st, 0j, complex(seed_amplitude))


def _tail(traj: Trajectory, fraction: float) -> slice:
    n = len(traj.t)
    start = min(int(np.floor(n * (1.0 - fraction))), n - 2)
    return slice(max(start, 0), n)


def phase_slope_frequency(t: np.ndarray, b: np.ndarray) -> float:
    """``-d arg(b)/dt`` from a least-squares line through the unwrapped phase."""
    if len(t) < 2:
        return 0.0
    phase = np.unwrap(np.angle(b))
    slope = np.polyfit(t - t[0], phase, 1)[0]
    return float(-slope)


def observables(traj: Trajectory, config: IntegratorConfig) -> SteadyObservables:
    tail = _tail(traj, config.tail_fraction)
    inten = traj.intensities[tail]
    half = len(inten) // 2
    first, second = inten[:half].mean(axis=0), inten[half:].mean(axis=0)
    mean = inten.mean(axis=0)
    drift = np.abs(first - second) / np.maximum(mean, 1e-12)
    converged = bool(np.all(drift < config.stationarity_tol))
    dw = phase_slope_frequency(traj.t[tail], traj.states[tail, 2])
    return SteadyObservables(float(mean[0]), float(mean[1]), float(mean[2]), dw, converged,
                             traj.final, float(traj.t[-1]))


def settle(params: SystemParams, init: ModeState, config: IntegratorConfig) -> SteadyObservables:
    """Integrate until intensities are stationary, doubling the budget on failure."""
    traj = integrate(params, init, config)
    obs = observables(traj, config)
    total = config.t_end
    for _ in range(config.max_doublings):
        if obs.converged:
            break
        ext = integrate(params, traj.final, config, t_end=total, t0=float(traj.t[-1]))
        traj = Trajectory(np.concatenate([traj.t, ext.t[1:]]),
                          np.concatenate([traj.states, ext.states[1:]]))
        total *= 2
        obs = observables(traj, config)
    return obs
