"""Figures rendered next to the CSV outputs.

Figures are built on bare ``Figure`` objects, not pyplot, so sweeps can render
from worker threads without sharing global state.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import numpy as np
from matplotlib.figure import Figure

from .dynamics import Trajectory
from .spectra import CrossingReport, FlowRecord

STYLE = {
    "figsize": (6.4, 4.2),
    "dpi": 120,
}


def _figure():
    fig = Figure(figsize=STYLE["figsize"], dpi=STYLE["dpi"])
    ax = fig.add_subplot(111)
    ax.grid(True, alpha=0.3)
    return fig, ax


def _save(fig, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(path, metadata={"Software": None})
    return path


def plot_occupations(traj: Trajectory, path, title: str = "") -> Path:
    fig, ax = _figure()
    t = traj.times
    ax.plot(t, traj.p_ground, "s", ms=3, mfc="none", label="instantaneous ground")
    ax.plot(t, traj.p_excited, "^", ms=3, mfc="none", label="first excited")
    ax.set_xlabel("t")
    ax.set_ylabel("occupation probability")
    ax.set_title(title)
    ax.legend(loc="best")
    return _save(fig, path)


def plot_spectral_flow(flow: Sequence[FlowRecord], crossing: CrossingReport | None, path,
                       title: str = "") -> Path:
    fig, ax = _figure()
    t = np.array([r.t for r in flow])
    vals = np.array([r.values for r in flow])
    for k in range(vals.shape[1]):
        ax.plot(t, vals[:, k], lw=1.2, label=f"level {k}" if k < 2 else None)
    ax.set_xlabel("t")
    ax.set_ylabel("eigenvalues of H(t)")
    ax.set_title(title)
    if crossing is not None:
        # zoom on the two lowest branches around the gap minimum
        width = max(0.05 * t[-1], 20 * crossing.min_gap)
        lo, hi = crossing.t_min_gap - width, crossing.t_min_gap + width
        sel = (t >= lo) & (t <= hi)
        if sel.sum() > 2:
            inset = ax.inset_axes([0.08, 0.55, 0.38, 0.38])
            inset.plot(t[sel], vals[sel, 0], lw=1)
            inset.plot(t[sel], vals[sel, 1], lw=1)
            inset.set_title(f"min gap {crossing.min_gap:.3g} at t={crossing.t_min_gap:.4g}", fontsize=7)
            inset.tick_params(labelsize=6)
    ax.legend(loc="lower right", fontsize=8)
    return _save(fig, path)


def plot_matrix_elements(flow: Sequence[FlowRecord], crossing: CrossingReport | None, path,
                         title: str = "") -> Path:
    fig, ax = _figure()
    t = np.array([r.t for r in flow])
    ax.plot(t, [r.m_pi for r in flow], "r--", label="|<e|H_P - H_I|g>|")
    ax.plot(t, [r.m_p for r in flow], "g-.", label="|<e|H_P|g>|")
    ax.plot(t, [r.m_i for r in flow], "b", dashes=(8, 3, 2, 3), label="|<e|H_I|g>|")
    if crossing is not None:
        for tz in crossing.zero_times:
            ax.axvline(tz, color="k", lw=0.6, alpha=0.6)
    ax.set_xlabel("t")
    ax.set_ylabel("matrix element magnitude")
    ax.set_title(title)
    ax.legend(loc="best", fontsize=8)
    return _save(fig, path)


def plot_sweep(values: Sequence[float], probs: np.ndarray, path, axis: str, labels: Sequence[str],
               highlight: int | None = None, title: str = "") -> Path:
    fig, ax = _figure()
    probs = np.asarray(probs)
    markers = "so^vD<>ph*"
    for k in range(probs.shape[1]):
        if probs[:, k].max() < 1e-3 and k != highlight:
            continue
        ax.plot(values, probs[:, k], marker=markers[k % len(markers)], ms=4, mfc="none",
                lw=2.0 if k == highlight else 0.8, label=labels[k])
    ax.axhline(0.5, color="k", lw=0.6, ls=":")
    ax.set_xlabel("|alpha|" if axis == "alpha_mod" else "T")
    ax.set_ylabel("final occupation probability")
    ax.set_title(title)
    ax.legend(loc="best", fontsize=8)
    return _save(fig, path)
