"""CSV emission with a one-line schema header."""

from __future__ import annotations

import csv
import math
from pathlib import Path

import numpy as np

from . import __version__

SCHEMAS = {
    "curve-analytic": 1,
    "curve-dynamic": 1,
    "curve-noisy": 1,
    "map2d": 1,
    "trajectory": 1,
    "oracle-roots": 1,
}


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        x = float(value)
        return "nan" if math.isnan(x) else repr(x)
    return str(value)


def write_csv(path, schema: str, header, rows) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(f"# schema={schema} version={SCHEMAS[schema]} optolaser={__version__}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])
    return path


def read_csv(path) -> tuple[dict, list[dict]]:
    """Parse a file written by :func:`write_csv` into (schema info, rows)."""
    with open(path, encoding="utf-8") as fh:
        first = fh.readline()
        if not first.startswith("#"):
            raise ValueError(f"{path}: missing schema comment line")
        meta = dict(item.split("=", 1) for item in first[1:].split())
        rows = list(csv.DictReader(fh))
    return meta, rows
