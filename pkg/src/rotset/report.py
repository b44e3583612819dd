"""CSV and JSON serialisation of rotation-set results."""

from __future__ import annotations

import csv
import json
from collections import Counter
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path

import numpy as np

from .discretize import DiscretizedRotationSet, RationalVector
from .observable import SampleSet

REPORT_SCHEMA = "rotset.report/1"
DISCRETIZED_COLUMNS = ["n", "period", "rot_num_x", "rot_num_y", "rot_den", "multiplicity", "basin_size"]
SAMPLE_COLUMNS = ["start_x", "start_y", "T", "vx", "vy"]


def tool_version() -> str:
    try:
        return version("artifact")
    except PackageNotFoundError:
        return "unknown"


def discretized_rows(dset: DiscretizedRotationSet):
    """One row per (period, rotation vector) with cycle count and total basin size."""
    mult = Counter()
    basin = Counter()
    for c in dset.cycles:
        key = (c.period, c.rotation_vector)
        mult[key] += 1
        basin[key] += c.basin_size
    for period, vec in sorted(mult, key=lambda k: (k[1], k[0])):
        yield dict(n=dset.n, period=period, rot_num_x=vec.num_x, rot_num_y=vec.num_y,
                   rot_den=vec.den, multiplicity=mult[period, vec], basin_size=basin[period, vec])


def write_discretized_csv(path, sets) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=DISCRETIZED_COLUMNS)
        writer.writeheader()
        for dset in sets:
            writer.writerows(discretized_rows(dset))
    return path


def write_samples_csv(path, samples: SampleSet) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SAMPLE_COLUMNS)
        for (sx, sy), (vx, vy) in zip(samples.starts.tolist(), samples.vectors.tolist()):
            writer.writerow([repr(sx), repr(sy), samples.length, repr(vx), repr(vy)])
    return path


def read_vectors_csv(path) -> tuple[np.ndarray, list]:
    """Load rotation vectors from any CSV written by this package (or plain ``x,y`` columns).

    Returns float points and, for discretised files, the exact RationalVectors.
    """
    with Path(path).open(newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        return np.empty((0, 2)), []
    cols = rows[0].keys()
    if "rot_den" in cols:
        exact = sorted({RationalVector(int(r["rot_num_x"]), int(r["rot_num_y"]), int(r["rot_den"]))
                        for r in rows})
        return np.array([v.to_float() for v in exact]), exact
    if "vx" in cols:
        return np.array([[float(r["vx"]), float(r["vy"])] for r in rows]), []
    if "x" in cols:
        return np.array([[float(r["x"]), float(r["y"])] for r in rows]), []
    raise ValueError(f"{path}: no recognised vector columns in {list(cols)}")


def rational_json(entries) -> list[dict]:
    return [dict(num_x=e.vector.num_x, num_y=e.vector.num_y, den=e.vector.den,
                 multiplicity=e.multiplicity, basin_mass=e.basin_mass) for e in entries]


def write_json(path, report: dict) -> Path:
    path = Path(path)
    path.write_text(json.dumps(report, indent=1, default=_json_default) + "\n")
    return path


def _json_default(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, Path):
        return str(obj)
    raise TypeError(f"cannot serialise {type(obj).__name__}")
