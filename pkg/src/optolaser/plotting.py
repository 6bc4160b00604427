"""Figure rendering for sweep outputs (files only, Agg backend)."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def _finish(fig, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_laser_curves(path, analytic=None, dynamic=None, noisy=None, title: str = "") -> Path:
    """Mode-2 intensity against drive amplitude, one panel.

    Closed-form branches are solid (unstable zero branch dotted), the
    time-domain curve is dashed and the noisy ensemble is black with error bars.
    """
    fig, ax = plt.subplots(figsize=(5.0, 3.6))
    if analytic is not None:
        om = analytic.omega
        ax.plot(om, analytic.intensity_a2_plus, "r-", lw=1.5, label="plus branch")
        ax.plot(om, analytic.intensity_a2_minus, "r:", lw=1.0, label="minus branch")
        stable = np.where(analytic.zero_stable, 0.0, np.nan)
        ax.plot(om, stable, "r-", lw=1.5)
        ax.axvline(analytic.omega_th, color="0.6", lw=0.8, ls="--")
        ax.axvline(analytic.omega_ex, color="0.8", lw=0.8, ls=":")
    if dynamic is not None:
        ax.plot(dynamic.omega, dynamic.I2, "b--", lw=1.2, label="time domain")
    if noisy is not None:
        ax.errorbar(noisy.omega, noisy.mean_I2, yerr=noisy.stderr_I2, color="k", lw=1.0,
                    capsize=1.5, label="with noise")
    ax.set_xlabel(r"$\Omega/\omega_0$")
    ax.set_ylabel(r"$|a_2|^2$")
    if title:
        ax.set_title(title)
    ax.legend(frameon=False, fontsize=8)
    return _finish(fig, path)


def plot_map2d(path, result, title: str = "") -> Path:
    fig, ax = plt.subplots(figsize=(5.0, 3.8))
    extent = [result.omega[0], result.omega[-1], result.delta_omega1[0], result.delta_omega1[-1]]
    im = ax.imshow(result.I2, origin="lower", aspect="auto", extent=extent, cmap="viridis")
    ax.plot(result.row_omega_th, result.delta_omega1, "w--", lw=0.8)
    fig.colorbar(im, ax=ax, label=r"$|a_2|^2$")
    ax.set_xlabel(r"$\Omega/\omega_0$")
    ax.set_ylabel(r"$\delta\omega_1/\omega_0$")
    if title:
        ax.set_title(title)
    return _finish(fig, path)


def plot_hysteresis(path, forward, backward, report, title: str = "") -> Path:
    fig, ax = plt.subplots(figsize=(5.0, 3.6))
    ax.plot(forward.omega, forward.I2, "b.-", lw=1.0, label="increasing drive")
    ax.plot(backward.omega, backward.I2, "m.-", lw=1.0, label="decreasing drive")
    ax.axvline(report.omega_th, color="0.5", ls="--", lw=0.8)
    ax.axvline(report.omega_ex, color="0.7", ls=":", lw=0.8)
    ax.set_xlabel(r"$\Omega/\omega_0$")
    ax.set_ylabel(r"$|a_2|^2$")
    if title:
        ax.set_title(title)
    ax.legend(frameon=False, fontsize=8)
    return _finish(fig, path)


_SCRIPT = '''"""Plot optolaser CSV outputs. Usage: python {name} [output.png]"""
import csv
import os
import sys

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

FILES = {files!r}
COLUMNS = {{"curve-analytic": "I2_plus", "curve-dynamic": "I2", "curve-noisy": "mean_I2"}}


def load(path):
    with open(path) as fh:
        meta = dict(kv.split("=", 1) for kv in fh.readline()[1:].split())
        return meta["schema"], list(csv.DictReader(fh))


fig, ax = plt.subplots(figsize=(5, 3.6))
HERE = os.path.dirname(os.path.abspath(__file__))
for name in FILES:
    schema, rows = load(os.path.join(HERE, name))
    if schema == "map2d":
        continue
    col = COLUMNS.get(schema)
    if col is None:
        continue
    ax.plot([float(r["omega"]) for r in rows], [float(r[col]) for r in rows], label=schema)
ax.set_xlabel("Omega")
ax.set_ylabel("|a2|^2")
ax.legend(frameon=False)
fig.tight_layout()
fig.savefig(sys.argv[1] if len(sys.argv) > 1 else {default!r}, dpi=150)
'''


def write_plot_script(path, csv_files, default_png: str) -> Path:
    """Standalone script that re-plots the given CSV files."""
    path = Path(path)
    names = [Path(f).name for f in csv_files]
    path.write_text(_SCRIPT.format(name=path.name, files=names, default=Path(default_png).name),
                    encoding="utf-8")
    return path
