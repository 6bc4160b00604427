"""Command-line front end.

Exit codes: 0 success, 2 configuration or input error, 3 partial numerical
failure (some sweep point or realization diverged).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .config import FIXTURES, ConfigError, load_config
from .csvio import write_csv
from .dynamics import DivergenceError, integrate, seeded_start
from .oracle import compare_with_analytic, solve_stationary
from .stability import StabilityError, assess
from .steady_state import (Branch, RangeError, delta2_locked, excitation_class, generated_frequency,
                           jump_magnitude, laser_curve_analytic, max_jump, nonzero_branch, omega_ex,
                           omega_th, zero_branch)
from .stochastic import ensemble_curve, integrate_sde
from .sweep import drive_grid, hysteresis_scan, laser_curve_dynamic, map2d

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3


def _prefix(args, cfg) -> str:
    return args.out if args.out is not None else cfg.output_prefix


def _emit(path, schema, obj, written):
    header, rows = obj.rows()
    written.append(write_csv(path, schema, header, rows))
    print(f"wrote {path}")


def thresholds_report(params) -> dict:
    return {
        "omega_ex": omega_ex(params),
        "omega_th": omega_th(params),
        "class": excitation_class(params).value,
        "jump": jump_magnitude(params),
        "max_jump": max_jump(params),
        "delta2": delta2_locked(params),
        "delta_omega": generated_frequency(params),
    }


def cmd_thresholds(args, cfg) -> int:
    report = thresholds_report(cfg.params)
    text = json.dumps(report, indent=2)
    print(text)
    if args.out is not None or cfg.output_prefix:
        path = Path(f"{_prefix(args, cfg)}thresholds.json")
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text + "\n", encoding="utf-8")
    return EXIT_OK


def _require_sweep(cfg):
    if cfg.sweep is None:
        raise ConfigError(f"{cfg.source}: a [sweep] block is required for this command")
    return cfg.sweep


def cmd_curve(args, cfg) -> int:
    spec = _require_sweep(cfg)
    kinds = [k for k in ("analytic", "dynamic", "noisy") if getattr(args, k)] or ["analytic"]
    prefix = _prefix(args, cfg)
    written: list = []
    status = EXIT_OK
    analytic = dynamic = noisy = None
    if "analytic" in kinds:
        analytic = laser_curve_analytic(cfg.params, spec.omega_min, spec.omega_max, spec.steps)
        _emit(f"{prefix}curve_analytic.csv", "curve-analytic", analytic, written)
    if "dynamic" in kinds:
        dynamic = laser_curve_dynamic(cfg.params, spec)
        _emit(f"{prefix}curve_dynamic.csv", "curve-dynamic", dynamic, written)
        if dynamic.failed:
            status = EXIT_NUMERIC
    if "noisy" in kinds:
        grid = drive_grid(cfg.params, spec.omega_min, spec.omega_max, spec.steps)
        noisy = ensemble_curve(cfg.params, grid, cfg.noise)
        _emit(f"{prefix}curve_noisy.csv", "curve-noisy", noisy, written)
        if noisy.failed.any():
            status = EXIT_NUMERIC
    def render(png):
        from .plotting import plot_laser_curves

        plot_laser_curves(png, analytic, dynamic, noisy, title=Path(cfg.source).stem)

    _figures(args, prefix, "curve", written, render)
    return status


def _figures(args, prefix, stem, written, render):
    png = f"{prefix}{stem}.png"
    if args.plot:
        render(png)
        print(f"wrote {png}")
    if args.emit_plot_script:
        from .plotting import write_plot_script

        script = write_plot_script(f"{prefix}{stem}_plot.py", written, png)
        print(f"wrote {script}")


def cmd_map2d(args, cfg) -> int:
    if cfg.map2d is None:
        raise ConfigError(f"{cfg.source}: a [map2d] block is required for this command")
    result = map2d(cfg.params, cfg.map2d)
    prefix = _prefix(args, cfg)
    written: list = []
    _emit(f"{prefix}map2d.csv", "map2d", result, written)

    def render(png):
        from .plotting import plot_map2d

        plot_map2d(png, result)

    _figures(args, prefix, "map2d", written, render)
    return EXIT_NUMERIC if any(result.error.ravel()) else EXIT_OK


def cmd_hysteresis(args, cfg) -> int:
    spec = _require_sweep(cfg)
    fwd, bwd, report = hysteresis_scan(cfg.params, spec)
    prefix = _prefix(args, cfg)
    written: list = []
    _emit(f"{prefix}hysteresis_forward.csv", "curve-dynamic", fwd, written)
    _emit(f"{prefix}hysteresis_backward.csv", "curve-dynamic", bwd, written)
    print(json.dumps(report.as_dict(), indent=2))

    def render(png):
        from .plotting import plot_hysteresis

        plot_hysteresis(png, fwd, bwd, report)

    _figures(args, prefix, "hysteresis", written, render)
    return EXIT_NUMERIC if fwd.failed or bwd.failed else EXIT_OK


def _drive(args, cfg):
    om = args.omega if args.omega is not None else cfg.params.omega_drive_amp
    if om < 0:
        raise ConfigError("--omega must be non-negative")
    return cfg.params.with_drive(om)


def cmd_stability(args, cfg) -> int:
    params = _drive(args, cfg)
    branch = Branch(args.branch)
    point = zero_branch(params) if branch is Branch.ZERO else nonzero_branch(params, branch)
    if point is None:
        print(f"error: {branch.value} branch does not exist at omega={params.omega_drive_amp}",
              file=sys.stderr)
        return EXIT_CONFIG
    rep = assess(params, point)
    out = {
        "branch": branch.value,
        "omega": params.omega_drive_amp,
        "intensity_a2": point.intensity_a2,
        "verdict": rep.verdict.value,
        "max_re_effective": rep.max_re_effective,
        "goldstone_index": rep.goldstone_index,
        "eigenvalues": [[float(w.real), float(w.imag)] for w in rep.eigenvalues],
    }
    print(json.dumps(out, indent=2))
    return EXIT_OK


def cmd_oracle(args, cfg) -> int:
    params = _drive(args, cfg)
    roots = solve_stationary(params, args.n_starts, cfg.seed)
    cmp = compare_with_analytic(params, roots)
    rows = []
    for r in roots:
        rows.append([r.a1.real, r.a1.imag, r.a2.real, r.a2.imag, r.b_real, r.delta_omega,
                     abs(r.a2) ** 2, r.residual_norm, r.newton_iterations])
    header = ["re_a1", "im_a1", "re_a2", "im_a2", "b", "delta_omega", "I2", "residual", "iterations"]
    if args.out is not None or cfg.output_prefix:
        path = f"{_prefix(args, cfg)}oracle_roots.csv"
        write_csv(path, "oracle-roots", header, rows)
        print(f"wrote {path}")
    labels = ", ".join(m[1].branch.value for m in cmp.matches)
    print(f"{cmp.n_classes} root classes ({labels}), max deviation {cmp.max_deviation:.3e} (< 1e-08)"
          if not cmp.unmatched_roots else
          f"{cmp.n_classes} root classes, {len(cmp.unmatched_roots)} without an analytic counterpart")
    if cmp.missing_branches:
        print("analytic branches not reached: " + ", ".join(b.branch.value for b in cmp.missing_branches))
    return EXIT_OK if not cmp.unmatched_roots else EXIT_NUMERIC


def cmd_trajectory(args, cfg) -> int:
    params = cfg.params
    prefix = _prefix(args, cfg)
    try:
        if args.noisy:
            traj = integrate_sde(params, zero_branch(params).state(), cfg.noise, args.realization)
        else:
            traj = integrate(params, seeded_start(params, cfg.integrator.seed_amplitude), cfg.integrator)
    except DivergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    _emit(f"{prefix}trajectory.csv", "trajectory", traj, [])
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="optolaser",
        description="Soft and hard excitation of a two-mode optomechanical laser.",
        epilog=f"CONFIG is a TOML file or one of the shipped fixtures: {', '.join(FIXTURES)}. "
               "Defaults: integrator dt=0.01 t_end=2e4 seed_amplitude=1e-6 tail_fraction=0.25 "
               "stationarity_tol=1e-6 max_doublings=2; noise n1=n2=nb=1e-3 dt=0.005 t_end=2e4 "
               "n_realizations=16 transient_fraction=0.5. Thread count: OPTOLASER_THREADS.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("config", help="config file or fixture name")
        p.add_argument("--out", default=None, help="output path prefix (default from config)")
        p.set_defaults(func=func)
        return p

    def figures(p):
        p.add_argument("--plot", action="store_true", help="render a PNG figure next to the CSVs")
        p.add_argument("--emit-plot-script", action="store_true",
                       help="write a standalone matplotlib script that re-plots the CSVs")

    add("thresholds", cmd_thresholds, "closed-form thresholds, jump and excitation class")
    p = add("curve", cmd_curve, "laser curve(s) over the [sweep] range")
    p.add_argument("--analytic", action="store_true", help="closed-form branches")
    p.add_argument("--dynamic", action="store_true", help="time-domain sweep")
    p.add_argument("--noisy", action="store_true", help="Langevin ensemble sweep")
    figures(p)
    figures(add("map2d", cmd_map2d, "intensity map over drive and detuning"))
    figures(add("hysteresis", cmd_hysteresis, "forward/backward continuation scans"))
    p = add("stability", cmd_stability, "eigenvalue stability of one branch")
    p.add_argument("--branch", choices=[b.value for b in Branch], default="zero")
    p.add_argument("--omega", type=float, default=None)
    p = add("oracle", cmd_oracle, "multi-start Newton solve of the stationary equations")
    p.add_argument("--omega", type=float, default=None)
    p.add_argument("--n-starts", type=int, default=200)
    p = add("trajectory", cmd_trajectory, "export one trajectory as CSV")
    p.add_argument("--noisy", action="store_true")
    p.add_argument("--realization", type=int, default=0)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config)
        return args.func(args, cfg)
    except (ConfigError, RangeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except StabilityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
