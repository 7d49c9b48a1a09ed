"""Instantaneous spectra of H(t): spectral flow, gap minimum and the matrix-element monitor.

Branches are identified by energy order at each time, so ``g`` and ``e`` are
always the instantaneous ground and first excited states.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import ConvergenceFailure, DimMismatch
from .hamiltonians import HermitianOperator, Schedule, interpolate

log = logging.getLogger(__name__)

DEFAULT_EPS = 1e-3
DEFAULT_DEGENERACY_TOL = 1e-8
REFINE_RTOL = 1e-6
RESIDUAL_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class EigenSystem:
    values: np.ndarray
    vectors: np.ndarray = field(repr=False)

    @property
    def ground(self) -> np.ndarray:
        return self.vectors[:, 0]

    @property
    def excited(self) -> np.ndarray:
        return self.vectors[:, 1]


def eigensystem(h: HermitianOperator) -> EigenSystem:
    m = h.matrix
    try:
        values, vectors = np.linalg.eigh(m)
    except np.linalg.LinAlgError as exc:
        log.error("eigensolver failed on matrix:\n%s", np.array2string(m, precision=6))
        raise ConvergenceFailure(f"Hermitian eigensolver did not converge: {exc}") from exc
    scale = max(float(np.max(np.abs(m))), 1.0)
    residual = np.max(np.abs(m @ vectors - vectors * values))
    ortho = np.max(np.abs(vectors.conj().T @ vectors - np.eye(h.dim)))
    if residual > RESIDUAL_TOL * scale * h.dim or ortho > RESIDUAL_TOL:
        log.error("inaccurate eigensystem (residual %.3e, orthogonality %.3e) for:\n%s",
                  residual, ortho, np.array2string(m, precision=6))
        raise ConvergenceFailure(f"eigensystem residual {residual:.3e}, orthogonality defect {ortho:.3e}")
    values.flags.writeable = False
    vectors.flags.writeable = False
    return EigenSystem(values, vectors)


def degeneracy_check(es: EigenSystem, tol: float = DEFAULT_DEGENERACY_TOL) -> bool:
    """True when the two lowest levels are closer than ``tol``."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    return bool(es.values[1] - es.values[0] < tol)


@dataclass(frozen=True, eq=False)
class FlowRecord:
    t: float
    values: np.ndarray
    gap: float
    m_pi: float
    m_p: float
    m_i: float

    @property
    def max_element(self) -> float:
        return max(self.m_pi, self.m_p, self.m_i)


def flow_record(h_initial: HermitianOperator, h_problem: HermitianOperator, t: float,
                sched: Schedule) -> FlowRecord:
    es = eigensystem(interpolate(h_initial, h_problem, t, sched))
    g, e = es.ground, es.excited
    hp_g = h_problem.matrix @ g
    hi_g = h_initial.matrix @ g
    m_p = abs(np.vdot(e, hp_g))
    m_i = abs(np.vdot(e, hi_g))
    m_pi = abs(np.vdot(e, hp_g - hi_g))
    return FlowRecord(float(t), es.values, float(es.values[1] - es.values[0]),
                      float(m_pi), float(m_p), float(m_i))


def spectral_flow(h_initial: HermitianOperator, h_problem: HermitianOperator,
                  sched: Schedule) -> list[FlowRecord]:
    if h_initial.dim != h_problem.dim:
        raise DimMismatch(f"H_I is {h_initial.dim}-dimensional, H_P is {h_problem.dim}")
    return [flow_record(h_initial, h_problem, t, sched) for t in sched.grid]


@dataclass(frozen=True)
class CrossingReport:
    t_min_gap: float
    min_gap: float
    is_avoided: bool
    zero_times: tuple[float, ...]
    zero_magnitudes: tuple[float, ...] = ()

    def to_dict(self) -> dict:
        return {
            "t_min_gap": self.t_min_gap,
            "min_gap": self.min_gap,
            "is_avoided": self.is_avoided,
            "zero_times": list(self.zero_times),
            "zero_magnitudes": list(self.zero_magnitudes),
        }


def _refine(fun, lo: float, hi: float, xtol: float) -> tuple[float, float]:
    res = minimize_scalar(fun, bounds=(lo, hi), method="bounded", options={"xatol": xtol})
    return float(res.x), float(res.fun)


def condition_monitor(flow: list[FlowRecord], eps: float = DEFAULT_EPS, *,
                      h_initial: HermitianOperator | None = None,
                      h_problem: HermitianOperator | None = None,
                      sched: Schedule | None = None) -> CrossingReport:
    """Locate the gap minimum and the interior zeros of the matrix elements.

    A zero is an isolated interior minimum of ``max(m_pi, m_p, m_i)`` over the
    grid that lies below ``eps``. A monotone decay into an endpoint is not an
    isolated minimum and is never reported. With the Hamiltonians and schedule
    supplied, both the gap minimum and each zero are refined inside their
    bracketing grid interval down to ``T * 1e-6``; otherwise grid values are used.
    """
    if not flow:
        raise ValueError("empty flow")
    if eps <= 0:
        raise ValueError("eps must be positive")
    refine = h_initial is not None and h_problem is not None and sched is not None
    times = np.array([r.t for r in flow])
    gaps = np.array([r.gap for r in flow])
    mags = np.array([r.max_element for r in flow])
    t_end = times[-1]
    xtol = (sched.T if refine else t_end) * REFINE_RTOL

    def bracket(k):
        return times[max(k - 1, 0)], times[min(k + 1, len(times) - 1)]

    k = int(np.argmin(gaps))
    t_min, min_gap = float(times[k]), float(gaps[k])
    if refine and len(times) > 1:
        lo, hi = bracket(k)
        t_ref, g_ref = _refine(lambda t: flow_record(h_initial, h_problem, t, sched).gap, lo, hi, xtol)
        if g_ref < min_gap:
            t_min, min_gap = t_ref, g_ref

    zero_times, zero_mags = [], []
    for j in range(1, len(flow) - 1):
        if not (mags[j] <= mags[j - 1] and mags[j] < mags[j + 1]):
            continue
        if not 0.0 < times[j] < (sched.T if refine else t_end):
            continue
        t_z, m_z = float(times[j]), float(mags[j])
        if refine:
            lo, hi = bracket(j)
            t_r, m_r = _refine(lambda t: flow_record(h_initial, h_problem, t, sched).max_element, lo, hi, xtol)
            if m_r < m_z:
                t_z, m_z = t_r, m_r
        if m_z < eps:
            zero_times.append(t_z)
            zero_mags.append(m_z)
    # a true crossing refines to rounding noise, so 'positive' means above the degeneracy floor
    is_avoided = min_gap > DEFAULT_DEGENERACY_TOL
    return CrossingReport(t_min, min_gap, bool(is_avoided), tuple(zero_times), tuple(zero_mags))
