"""Drive-amplitude sweeps of the time-domain model: laser curves, the
(drive, detuning) intensity map and forward/backward hysteresis scans."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from ._parallel import ordered_map
from .dynamics import DivergenceError, IntegratorConfig, SteadyObservables, seeded_start, settle
from .model import ModeState, SystemParams
from .steady_state import (ExcitationClass, all_branches, excitation_class, omega_ex, omega_th,
                           RangeError)

COLLISION_TOL = 1e-12


class SweepMode(str, enum.Enum):
    FRESH = "fresh"
    CONTINUE_FORWARD = "forward"
    CONTINUE_BACKWARD = "backward"


@dataclass(frozen=True)
class SweepSpec:
    omega_min: float
    omega_max: float
    steps: int
    mode: SweepMode = SweepMode.FRESH
    integrator: IntegratorConfig = field(default_factory=IntegratorConfig)

    def __post_init__(self):
        if self.steps < 2 or not (0.0 <= self.omega_min < self.omega_max):
            raise RangeError(f"need 0 <= omega_min < omega_max and steps >= 2, "
                             f"got [{self.omega_min}, {self.omega_max}] x {self.steps}")
        if self.mode is SweepMode.FRESH and self.integrator.seed_amplitude <= 0:
            raise ValueError("fresh sweeps need a positive seed_amplitude")


@dataclass(frozen=True)
class Map2DSpec:
    omega_min: float
    omega_max: float
    omega_steps: int
    delta_omega1_min: float
    delta_omega1_max: float
    delta_omega1_steps: int
    offset: float = 2e-3
    integrator: IntegratorConfig = field(default_factory=IntegratorConfig)

    def __post_init__(self):
        if self.omega_steps < 2 or self.delta_omega1_steps < 2:
            raise RangeError("map grid must be at least 2 x 2")
        if not (0.0 <= self.omega_min < self.omega_max) or not self.delta_omega1_min < self.delta_omega1_max:
            raise RangeError("invalid map ranges")


def drive_grid(params: SystemParams, omega_min: float, omega_max: float, steps: int) -> np.ndarray:
    """Uniform grid, shifted by half a step if a node would sit on the threshold."""
    grid = np.linspace(omega_min, omega_max, steps)
    if np.any(np.abs(grid - omega_th(params)) < COLLISION_TOL):
        grid = grid + 0.5 * (grid[1] - grid[0])
    return grid


@dataclass
class LaserCurve:
    omega: np.ndarray
    I1: np.ndarray
    I2: np.ndarray
    Ib: np.ndarray
    delta_omega_est: np.ndarray
    converged: np.ndarray
    branch_class: list
    error: list
    mode: SweepMode = SweepMode.FRESH

    @property
    def failed(self) -> bool:
        return any(self.error)

    def max_adjacent_jump(self) -> tuple[float, int]:
        """Largest increase of I2 between neighbouring points and its left index."""
        d = np.diff(self.I2)
        if not np.any(np.isfinite(d)):
            return float("nan"), -1
        k = int(np.nanargmax(d))
        return float(d[k]), k

    def rows(self):
        header = ["omega", "I1", "I2", "Ib", "delta_omega_est", "converged", "branch_class", "error"]
        body = zip(self.omega, self.I1, self.I2, self.Ib, self.delta_omega_est,
                   self.converged.astype(int), self.branch_class, self.error)
        return header, [list(r) for r in body]


def nearest_branch(params: SystemParams, intensity: float) -> str:
    if not np.isfinite(intensity):
        return ""
    branches = all_branches(params)
    best = min(branches, key=lambda b: abs(b.intensity_a2 - intensity))
    return best.branch.value


def _point(params: SystemParams, init: ModeState, config: IntegratorConfig):
    try:
        return settle(params, init, config), ""
    except DivergenceError as exc:
        return None, f"diverged at t={exc.t:.6g}"


def _assemble(params: SystemParams, omegas, results, mode) -> LaserCurve:
    n = len(omegas)
    cols = {k: np.full(n, np.nan) for k in ("I1", "I2", "Ib", "dw")}
    converged = np.zeros(n, dtype=bool)
    labels, errors = [], []
    for k, (obs, err) in enumerate(results):
        errors.append(err)
        if obs is None:
            labels.append("")
            continue
        cols["I1"][k], cols["I2"][k], cols["Ib"][k], cols["dw"][k] = obs.I1, obs.I2, obs.Ib, obs.delta_omega_est
        converged[k] = obs.converged
        labels.append(nearest_branch(params.with_drive(omegas[k]), obs.I2))
    return LaserCurve(np.asarray(omegas), cols["I1"], cols["I2"], cols["Ib"], cols["dw"],
                      converged, labels, errors, mode)


def _reseed(state: ModeState, floor: float) -> ModeState:
    # keeps continuation runs off the invariant zero manifold
    b = state.b
    if abs(b) < floor:
        b = floor * (b / abs(b)) if b != 0 else complex(floor)
    return ModeState(state.a1, state.a2, b)


def laser_curve_dynamic(params: SystemParams, spec: SweepSpec) -> LaserCurve:
    omegas = drive_grid(params, spec.omega_min, spec.omega_max, spec.steps)
    cfg = spec.integrator
    if spec.mode is SweepMode.FRESH:
        def run(om):
            p = params.with_drive(om)
            return _point(p, seeded_start(p, cfg.seed_amplitude), cfg)
        results = ordered_map(run, omegas)
        return _assemble(params, omegas, results, spec.mode)

    order = range(len(omegas)) if spec.mode is SweepMode.CONTINUE_FORWARD else range(len(omegas) - 1, -1, -1)
    results: list = [None] * len(omegas)
    state = None
    for k in order:
        p = params.with_drive(omegas[k])
        init = seeded_start(p, cfg.seed_amplitude) if state is None else _reseed(state, cfg.seed_amplitude)
        obs, err = _point(p, init, cfg)
        results[k] = (obs, err)
        state = obs.final_state if obs is not None else None
    return _assemble(params, omegas, results, spec.mode)


@dataclass
class Map2D:
    delta_omega1: np.ndarray
    omega: np.ndarray
    I2: np.ndarray  # shape (len(delta_omega1), len(omega))
    converged: np.ndarray
    error: np.ndarray
    row_class: list
    row_omega_th: np.ndarray

    def rows(self):
        header = ["delta_omega1", "omega", "I2", "converged", "class", "error"]
        body = []
        for i, d1 in enumerate(self.delta_omega1):
            for j, om in enumerate(self.omega):
                body.append([d1, om, self.I2[i, j], int(self.converged[i, j]),
                             self.row_class[i].value, self.error[i, j]])
        return header, body


def row_params(base: SystemParams, delta_omega1: float, offset: float) -> SystemParams:
    return base.replace(delta_omega1=float(delta_omega1), delta_omega2=float(delta_omega1 + offset))


def class_grid(base: SystemParams, spec: Map2DSpec) -> list[ExcitationClass]:
    d1 = np.linspace(spec.delta_omega1_min, spec.delta_omega1_max, spec.delta_omega1_steps)
    return [excitation_class(row_params(base, d, spec.offset)) for d in d1]


def map2d(base_params: SystemParams, spec: Map2DSpec) -> Map2D:
    d1 = np.linspace(spec.delta_omega1_min, spec.delta_omega1_max, spec.delta_omega1_steps)
    om = np.linspace(spec.omega_min, spec.omega_max, spec.omega_steps)
    rows = [row_params(base_params, d, spec.offset) for d in d1]
    cfg = spec.integrator
    cells = [(i, j) for i in range(len(d1)) for j in range(len(om))]

    def run(ij):
        p = rows[ij[0]].with_drive(om[ij[1]])
        return _point(p, seeded_start(p, cfg.seed_amplitude), cfg)

    results = ordered_map(run, cells)
    I2 = np.full((len(d1), len(om)), np.nan)
    conv = np.zeros_like(I2, dtype=bool)
    err = np.full(I2.shape, "", dtype=object)
    for (i, j), (obs, e) in zip(cells, results):
        err[i, j] = e
        if obs is not None:
            I2[i, j] = obs.I2
            conv[i, j] = obs.converged
    return Map2D(d1, om, I2, conv, err, [excitation_class(p) for p in rows],
                 np.array([omega_th(p) for p in rows]))


@dataclass
class HysteresisReport:
    omega_th: float
    omega_ex: float
    forward_jump_at: tuple[float, float]
    forward_jump: float
    backward_drop_at: tuple[float, float]
    backward_drop: float

    @property
    def forward_jump_omega(self) -> float:
        return 0.5 * sum(self.forward_jump_at)

    @property
    def backward_drop_omega(self) -> float:
        return 0.5 * sum(self.backward_drop_at)

    @property
    def width(self) -> float:
        return self.forward_jump_omega - self.backward_drop_omega

    def as_dict(self) -> dict:
        return {
            "omega_th": self.omega_th,
            "omega_ex": self.omega_ex,
            "forward_jump_between": list(self.forward_jump_at),
            "forward_jump": self.forward_jump,
            "backward_drop_between": list(self.backward_drop_at),
            "backward_drop": self.backward_drop,
            "backward_drop_minus_omega_th": self.backward_drop_omega - self.omega_th,
            "backward_drop_minus_omega_ex": self.backward_drop_omega - self.omega_ex,
            "hysteresis_width": self.width,
        }


def hysteresis_scan(params: SystemParams, spec: SweepSpec):
    """Forward and backward continuation scans and where each one jumps."""
    fwd = laser_curve_dynamic(params, SweepSpec(spec.omega_min, spec.omega_max, spec.steps,
                                                SweepMode.CONTINUE_FORWARD, spec.integrator))
    bwd = laser_curve_dynamic(params, SweepSpec(spec.omega_min, spec.omega_max, spec.steps,
                                                SweepMode.CONTINUE_BACKWARD, spec.integrator))
    jf, kf = fwd.max_adjacent_jump()
    jb, kb = bwd.max_adjacent_jump()
    om = fwd.omega
    report = HysteresisReport(
        omega_th=omega_th(params),
        omega_ex=omega_ex(params),
        forward_jump_at=(float(om[kf]), float(om[kf + 1])),
        forward_jump=jf,
        backward_drop_at=(float(om[kb]), float(om[kb + 1])),
        backward_drop=jb,
    )
    return fwd, bwd, report
