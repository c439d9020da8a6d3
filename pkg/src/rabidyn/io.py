"""Trajectory serialization: delimited text and JSON.

Both formats carry 17 significant digits, enough to reproduce every double
bit-exactly on read-back.  The delimited layout is one row per step with
header ``t,x1,x2,x3`` plus one column per requested monitor, LF line
endings.
"""

from __future__ import annotations

import json

import numpy as np

from .core import DomainError, Trajectory

__all__ = ["format_float", "write_csv", "write_json", "read_csv"]


def format_float(v: float) -> str:
    return format(float(v), ".17g")


def write_csv(traj: Trajectory, path: str, monitor_order=None) -> None:
    names = list(monitor_order) if monitor_order is not None else sorted(traj.monitors)
    for name in names:
        if name not in traj.monitors:
            raise DomainError(f"trajectory has no monitor {name!r}")
    header = "t,x1,x2,x3" + "".join("," + n for n in names)
    times = traj.times
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(header + "\n")
        for k in range(len(traj.states)):
            row = [format_float(times[k])]
            row.extend(format_float(v) for v in traj.states[k])
            row.extend(format_float(traj.monitors[n][k]) for n in names)
            fh.write(",".join(row) + "\n")


def write_json(traj: Trajectory, path: str, meta: dict | None = None, monitor_order=None) -> None:
    names = list(monitor_order) if monitor_order is not None else sorted(traj.monitors)
    data = {
        "t": [float(v) for v in traj.times],
        "x1": [float(v) for v in traj.states[:, 0]],
        "x2": [float(v) for v in traj.states[:, 1]],
        "x3": [float(v) for v in traj.states[:, 2]],
    }
    for n in names:
        data[n] = [float(v) for v in traj.monitors[n]]
    doc = {"meta": dict(meta or {}), "data": data}
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def read_csv(path: str):
    """Read a trajectory table back: (column names, dict of float arrays)."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln.rstrip("\n") for ln in fh if ln.strip()]
    if not lines:
        raise DomainError(f"{path!r} is empty")
    names = lines[0].split(",")
    if names[:4] != ["t", "x1", "x2", "x3"]:
        raise DomainError(f"{path!r} does not start with the t,x1,x2,x3 header")
    cols = {n: [] for n in names}
    for ln in lines[1:]:
        parts = ln.split(",")
        if len(parts) != len(names):
            raise DomainError(f"{path!r}: row has {len(parts)} fields, header has {len(names)}")
        for n, p in zip(names, parts):
            cols[n].append(float(p))
    return names, {n: np.asarray(v) for n, v in cols.items()}
