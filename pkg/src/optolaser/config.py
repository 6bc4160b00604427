"""Run configuration files (TOML).

Layout::

    seed = 0                      # RNG seed for noise and oracle starts

    [params]                      # required; all frequencies in units of the reference
    delta_omega1 = 4e-3
    delta_omega2 = 5e-3
    omega_b = 5e-3
    gamma1 = 1e-2
    gamma2 = 1e-3
    gamma_b = 1e-3
    g = 1e-2
    omega_drive_amp = 6e-3        # optional, default 0

    [integrator]                  # optional; dt, t_end, seed_amplitude, tail_fraction,
                                  # stationarity_tol, save_interval, max_doublings
    [noise]                       # optional; n1, n2, nb, dt, t_end, n_realizations,
                                  # base_seed, transient_fraction, save_interval
    [sweep]                       # optional; omega_min, omega_max, steps, mode
    [map2d]                       # optional; omega_min, omega_max, omega_steps,
                                  # delta_omega1_min, delta_omega1_max, delta_omega1_steps, offset
    [output]                      # optional; prefix

Unknown keys anywhere are rejected.
"""

from __future__ import annotations

import dataclasses
import sys
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .dynamics import IntegratorConfig
from .model import SystemParams
from .stochastic import NoiseConfig
from .sweep import Map2DSpec, SweepMode, SweepSpec

FIXTURES = ("fig1a", "fig1b", "fig1c", "fig2", "fig3")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    params: SystemParams
    integrator: IntegratorConfig
    noise: NoiseConfig
    sweep: SweepSpec | None
    map2d: Map2DSpec | None
    output_prefix: str
    seed: int
    source: str = ""


_NUMERIC_INT = {"steps", "omega_steps", "delta_omega1_steps", "n_realizations", "base_seed",
                "max_doublings", "chunk_steps"}


def _check_number(section: str, key: str, value):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"key '{section}.{key}' must be a number, got {value!r}")
    if key in _NUMERIC_INT:
        if not isinstance(value, int):
            raise ConfigError(f"key '{section}.{key}' must be an integer, got {value!r}")
        return value
    return float(value)


def _block(raw: dict, section: str, allowed, required=()) -> dict:
    data = raw.get(section, {})
    if not isinstance(data, dict):
        raise ConfigError(f"'{section}' must be a table")
    unknown = sorted(set(data) - set(allowed))
    if unknown:
        raise ConfigError(f"unknown key '{section}.{unknown[0]}' (allowed: {', '.join(sorted(allowed))})")
    for key in required:
        if key not in data:
            raise ConfigError(f"missing required key '{section}.{key}'")
    return data


def _field_names(cls, exclude=()):
    return [f.name for f in dataclasses.fields(cls) if f.name not in exclude]


def parse_config(text: str, source: str = "<string>") -> RunConfig:
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{source}: {exc}") from exc
    top_allowed = {"seed", "params", "integrator", "noise", "sweep", "map2d", "output"}
    unknown = sorted(set(raw) - top_allowed)
    if unknown:
        raise ConfigError(f"{source}: unknown key '{unknown[0]}'")
    try:
        return _build(raw, source)
    except ConfigError as exc:
        raise ConfigError(f"{source}: {exc}") from exc
    except ValueError as exc:
        raise ConfigError(f"{source}: {exc}") from exc


def _build(raw: dict, source: str) -> RunConfig:
    seed = raw.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int):
        raise ConfigError("key 'seed' must be an integer")

    p_names = _field_names(SystemParams)
    p_raw = _block(raw, "params", p_names, required=[n for n in p_names if n != "omega_drive_amp"])
    params = SystemParams(**{k: _check_number("params", k, v) for k, v in p_raw.items()})

    i_raw = _block(raw, "integrator", _field_names(IntegratorConfig))
    integrator = IntegratorConfig(**{k: _check_number("integrator", k, v) for k, v in i_raw.items()})

    n_raw = _block(raw, "noise", _field_names(NoiseConfig))
    n_vals = {k: _check_number("noise", k, v) for k, v in n_raw.items()}
    n_vals.setdefault("base_seed", seed)
    noise = NoiseConfig(**n_vals)

    sweep = None
    if "sweep" in raw:
        s_raw = _block(raw, "sweep", ["omega_min", "omega_max", "steps", "mode"],
                       required=["omega_min", "omega_max", "steps"])
        mode = s_raw.get("mode", "fresh")
        try:
            mode = SweepMode(mode)
        except ValueError:
            raise ConfigError(f"key 'sweep.mode' must be one of {[m.value for m in SweepMode]}") from None
        sweep = SweepSpec(_check_number("sweep", "omega_min", s_raw["omega_min"]),
                          _check_number("sweep", "omega_max", s_raw["omega_max"]),
                          _check_number("sweep", "steps", s_raw["steps"]), mode, integrator)

    map_spec = None
    if "map2d" in raw:
        m_names = _field_names(Map2DSpec, exclude=("integrator",))
        m_raw = _block(raw, "map2d", m_names, required=[n for n in m_names if n != "offset"])
        map_spec = Map2DSpec(**{k: _check_number("map2d", k, v) for k, v in m_raw.items()},
                             integrator=integrator)

    o_raw = _block(raw, "output", ["prefix"])
    prefix = o_raw.get("prefix", "")
    if not isinstance(prefix, str):
        raise ConfigError("key 'output.prefix' must be a string")
    return RunConfig(params, integrator, noise, sweep, map_spec, prefix, seed, source)


def load_config(name_or_path: str) -> RunConfig:
    """Load a config file, or a shipped fixture by name (``fig1a`` ... ``fig3``)."""
    path = Path(name_or_path)
    if not path.exists() and name_or_path in FIXTURES:
        text = resources.files("optolaser.configs").joinpath(f"{name_or_path}.toml").read_text("utf-8")
        cfg = parse_config(text, name_or_path)
        if not cfg.output_prefix:
            cfg.output_prefix = f"{name_or_path}_"
        return cfg
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {name_or_path!r}: {exc.strerror}") from exc
    cfg = parse_config(text, str(path))
    if not cfg.output_prefix:
        cfg.output_prefix = f"{path.stem}_"
    return cfg
