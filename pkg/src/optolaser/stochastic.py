"""Langevin integration with additive complex white noise.

Each mode x receives the increment ``sqrt(2 gamma_x n_x dt) * (xi_re + i xi_im) / sqrt(2)``
per step, i.e. <dW_x dW_x*> = 2 gamma_x n_x dt, so that an uncoupled, undriven
mode relaxes to <|x|^2> = n_x. Every realization draws from its own Philox
stream keyed by ``(base_seed, realization_index)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import em_chunk
from ._parallel import ordered_map
from .dynamics import DivergenceError, Trajectory
from .model import ModeState, SystemParams
from .steady_state import zero_branch


@dataclass(frozen=True)
class NoiseConfig:
    n1: float = 1e-3
    n2: float = 1e-3
    nb: float = 1e-3
    dt: float = 0.005
    t_end: float = 2e4
    n_realizations: int = 16
    base_seed: int = 0
    transient_fraction: float = 0.5
    save_interval: float = 1.0
    chunk_steps: int = 1 << 16

    def __post_init__(self):
        if min(self.n1, self.n2, self.nb) < 0:
            raise ValueError("noise occupations must be non-negative")
        if not self.dt > 0 or not self.t_end > 0:
            raise ValueError("dt and t_end must be positive")
        if self.n_realizations < 1:
            raise ValueError("n_realizations must be >= 1")
        if not 0.0 <= self.transient_fraction < 1.0:
            raise ValueError("transient_fraction must lie in [0, 1)")
        if not self.save_interval > 0 or self.chunk_steps < 1:
            raise ValueError("save_interval and chunk_steps must be positive")

    @property
    def stride(self) -> int:
        return max(1, int(round(self.save_interval / self.dt)))

    def sigma(self, params: SystemParams) -> np.ndarray:
        """Per-component standard deviation of the real and imaginary increments."""
        rates = np.array([params.gamma1, params.gamma2, params.gamma_b])
        occ = np.array([self.n1, self.n2, self.nb])
        return np.sqrt(rates * occ * self.dt)


def rng_for(base_seed: int, realization: int) -> np.random.Generator:
    key = np.array([base_seed & 0xFFFFFFFFFFFFFFFF, realization], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def integrate_sde(params: SystemParams, init: ModeState, noise: NoiseConfig,
                  realization: int = 0) -> Trajectory:
    """Euler-Maruyama trajectory sampled every ``noise.stride`` steps."""
    rng = rng_for(noise.base_seed, realization)
    p = params.as_array()
    sigma = noise.sigma(params)
    n_steps = int(round(noise.t_end / noise.dt))
    stride = min(noise.stride, max(n_steps, 1))
    y = init.as_array()
    parts = [y[None, :].copy()]
    done = 0
    while done < n_steps:
        m = min(noise.chunk_steps, n_steps - done)
        xi = rng.standard_normal((m, 6))
        y, samples, bad = em_chunk(p, y, noise.dt, sigma, xi, stride, done)
        if bad >= 0:
            raise DivergenceError(bad * noise.dt)
        parts.append(samples)
        done += m
    states = np.concatenate(parts)
    t = np.arange(len(states)) * stride * noise.dt
    return Trajectory(t, states)


@dataclass
class NoisyCurve:
    omega: np.ndarray
    mean_I2: np.ndarray
    stderr_I2: np.ndarray
    mean_I1: np.ndarray
    mean_Ib: np.ndarray
    n_realizations: np.ndarray  # successful realizations per point
    failed: np.ndarray

    def rows(self):
        header = ["omega", "mean_I1", "mean_I2", "stderr_I2", "mean_Ib", "n_realizations", "error"]
        body = zip(self.omega, self.mean_I1, self.mean_I2, self.stderr_I2, self.mean_Ib,
                   self.n_realizations, np.where(self.failed, "diverged", ""))
        return header, [list(r) for r in body]


def _tail_means(params: SystemParams, noise: NoiseConfig, realization: int):
    try:
        traj = integrate_sde(params, zero_branch(params).state(), noise, realization)
    except DivergenceError:
        return None
    start = int(np.ceil(noise.transient_fraction * (len(traj.t) - 1)))
    return traj.intensities[start:].mean(axis=0)


def ensemble_curve(params: SystemParams, omega_points, noise: NoiseConfig) -> NoisyCurve:
    """Per-drive ensemble mean and standard error of the tail-averaged intensities."""
    omegas = np.asarray(omega_points, dtype=float)
    if omegas.size < 2:
        raise ValueError("need at least two drive amplitudes")
    tasks = [(k, r) for k in range(omegas.size) for r in range(noise.n_realizations)]
    results = ordered_map(lambda kr: _tail_means(params.with_drive(omegas[kr[0]]), noise, kr[1]), tasks)

    n = omegas.size
    mean = np.full((n, 3), np.nan)
    stderr = np.full(n, np.nan)
    count = np.zeros(n, dtype=int)
    failed = np.zeros(n, dtype=bool)
    for k in range(n):
        chunk = results[k * noise.n_realizations:(k + 1) * noise.n_realizations]
        ok = [x for x in chunk if x is not None]
        failed[k] = len(ok) < len(chunk)
        count[k] = len(ok)
        if not ok:
            continue
        arr = np.array(ok)
        mean[k] = arr.mean(axis=0)
        stderr[k] = arr[:, 1].std(ddof=1) / np.sqrt(len(ok)) if len(ok) > 1 else 0.0
    return NoisyCurve(omegas, mean[:, 1], stderr, mean[:, 0], mean[:, 2], count, failed)
