"""Delimited and JSON outputs.

Numbers are written with 9 significant digits, '.' decimals and '\\n' line
endings so identical runs give byte-identical files.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Iterable, Sequence

from .dynamics import Trajectory
from .spectra import FlowRecord


def fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if x is None:
        return ""
    if isinstance(x, int):
        return str(x)
    x = float(x)
    if x == 0.0:
        return "0"
    return f"{x:.9g}"


def write_rows(path: str | Path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])
    return path


def flow_header(dim: int) -> list[str]:
    return ["t"] + [f"lambda_{k}" for k in range(dim)] + ["gap", "m_pi", "m_p", "m_i"]


def write_flow_csv(flow: Sequence[FlowRecord], path: str | Path) -> Path:
    dim = len(flow[0].values)
    rows = ([r.t, *r.values, r.gap, r.m_pi, r.m_p, r.m_i] for r in flow)
    return write_rows(path, flow_header(dim), rows)


def trajectory_header(dim: int) -> list[str]:
    return ["t"] + [f"p_fock_{k}" for k in range(dim)] + ["p_ground", "p_excited"]


def write_trajectory_csv(traj: Trajectory, path: str | Path) -> Path:
    dim = len(traj.samples[0].fock_probs)
    rows = ([s.t, *s.fock_probs, s.p_ground, s.p_excited] for s in traj.samples)
    return write_rows(path, trajectory_header(dim), rows)


def _clean(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if hasattr(obj, "item"):
        return _clean(obj.item())
    return obj


def write_json(obj: dict, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(_clean(obj), indent=2) + "\n")
    return path
