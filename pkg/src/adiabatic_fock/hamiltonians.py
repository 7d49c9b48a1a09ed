"""Initial, problem and interpolated Hamiltonians on a truncated Fock space."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (DimMismatch, LengthMismatch, NotHermitian, ShiftUnsupported,
                     TimeOutOfRange, VariableCountMismatch, ConfigError)
from .fockspace import FockSpace, embed, single_mode_annihilation
from .polynomial import DiophantineSpec

HERMITICITY_TOL = 1e-12


@dataclass(frozen=True)
class Alpha:
    """Per-mode coherent-state displacements."""

    values: tuple[complex, ...]

    @classmethod
    def of(cls, value, modes: int = 1) -> "Alpha":
        if isinstance(value, Alpha):
            vals = value.values
        elif np.ndim(value) == 0:
            vals = (complex(value),) * modes
        else:
            vals = tuple(complex(v) for v in value)
        if len(vals) != modes:
            raise LengthMismatch(f"alpha has {len(vals)} components for {modes} modes")
        return cls(vals)

    @property
    def norm_sq(self) -> float:
        return float(sum(abs(v) ** 2 for v in self.values))

    def scaled(self, factor: float) -> "Alpha":
        """Scale every |alpha_i| by ``factor``, keeping phases."""
        return Alpha(tuple(v * factor for v in self.values))


@dataclass(frozen=True, eq=False)
class HermitianOperator:
    """Dense complex matrix certified Hermitian (elementwise to 1e-12) at construction."""

    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimMismatch(f"operator must be square, got shape {m.shape}")
        dev = float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0
        if dev > HERMITICITY_TOL:
            raise NotHermitian(f"max |H - H^dag| = {dev:.3e} exceeds {HERMITICITY_TOL}")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def diagonal(self) -> np.ndarray:
        return self.matrix.diagonal().real

    def is_diagonal(self) -> bool:
        return not np.any(self.matrix - np.diag(self.matrix.diagonal()))

    def norm(self) -> float:
        return float(np.linalg.norm(self.matrix, 2))


@dataclass(frozen=True, eq=False)
class Schedule:
    """Total time ``T`` of the linear sweep plus the sample grid on [0, T]."""

    T: float
    grid: np.ndarray = field(repr=False)

    def __post_init__(self):
        if not (self.T > 0 and math.isfinite(self.T)):
            raise ConfigError(f"T must be positive and finite, got {self.T}")
        g = np.array(self.grid, dtype=float)
        if g.ndim != 1 or g.size < 2:
            raise ConfigError("grid needs at least two points")
        if g[0] != 0.0 or g[-1] != self.T:
            raise ConfigError(f"grid must run from 0 to T={self.T}, got [{g[0]}, {g[-1]}]")
        if np.any(np.diff(g) <= 0):
            raise ConfigError("grid must be strictly increasing")
        g.flags.writeable = False
        object.__setattr__(self, "grid", g)

    @classmethod
    def uniform(cls, T: float, points: int = 2001) -> "Schedule":
        if points < 2:
            raise ConfigError(f"need at least 2 grid points, got {points}")
        g = np.linspace(0.0, T, int(points))
        g[-1] = T
        return cls(float(T), g)


def build_h_initial(space: FockSpace, alpha, shifted: bool = False) -> HermitianOperator:
    """``sum_i (a_i^dag - alpha_i^*)(a_i - alpha_i)``, optionally plus ``(1 - |alpha|^2) 1``.

    The shifted form is single-mode only; under the rigid cutoff its diagonal
    is ``(1, 2, ..., d)``.

    Under (anti)periodic truncation the number operator carries ``d`` on
    ``|0>`` and the wrap-around coupling enters with the boundary sign:
    ``+-alpha^* sqrt(d)`` at ``(0, d-1)`` and ``+-alpha sqrt(d)`` at ``(d-1, 0)``.
    """
    alpha = Alpha.of(alpha, space.modes)
    if shifted and space.modes > 1:
        raise ShiftUnsupported("the (1 - |alpha|^2) shift is only defined for a single mode")
    sign = space.boundary.wrap_sign
    total = np.zeros((space.dim, space.dim), dtype=complex)
    for i, (d, al) in enumerate(zip(space.dims, alpha.values)):
        a = single_mode_annihilation(d, space.boundary)
        number = a.conj().T @ a
        hop = np.diag(np.sqrt(np.arange(1, d, dtype=float)), 1).astype(complex)
        h = number - al * hop.T - np.conj(al) * hop + abs(al) ** 2 * np.eye(d)
        if sign:
            h[0, d - 1] = sign * np.conj(al) * math.sqrt(d)
            h[d - 1, 0] = sign * al * math.sqrt(d)
        total += embed(h, i, space.dims)
    if shifted:
        total += (1.0 - alpha.norm_sq) * np.eye(space.dim)
    return HermitianOperator(total)


def build_h_problem_diag(space: FockSpace, diag: Sequence[float]) -> HermitianOperator:
    diag = np.asarray(diag, dtype=float)
    if diag.shape != (space.dim,):
        raise LengthMismatch(f"diagonal has {diag.size} entries for dimension {space.dim}")
    return HermitianOperator(np.diag(diag).astype(complex))


def dioph_diagonal(space: FockSpace, spec: DiophantineSpec) -> np.ndarray:
    if spec.n_vars != space.modes:
        raise VariableCountMismatch(f"polynomial has {spec.n_vars} variables, space has {space.modes} modes")
    # exact integers before the float conversion
    return np.array([float(spec(label) ** 2) for label in space.basis])


def build_h_problem_dioph(space: FockSpace, spec: DiophantineSpec) -> HermitianOperator:
    """Diagonal operator with ``D(n_1, ..., n_K)^2`` on every basis state."""
    return HermitianOperator(np.diag(dioph_diagonal(space, spec)).astype(complex))


def _fraction(t: float, sched: Schedule) -> float:
    if not 0.0 <= t <= sched.T:
        raise TimeOutOfRange(f"t={t} outside [0, {sched.T}]")
    return t / sched.T


def interpolate(h_initial: HermitianOperator, h_problem: HermitianOperator, t: float,
                sched: Schedule) -> HermitianOperator:
    if h_initial.dim != h_problem.dim:
        raise DimMismatch(f"H_I is {h_initial.dim}-dimensional, H_P is {h_problem.dim}")
    s = _fraction(t, sched)
    if s == 0.0:
        return h_initial
    if s == 1.0:
        return h_problem
    return HermitianOperator((1.0 - s) * h_initial.matrix + s * h_problem.matrix)


def diagonal_dominance(hp_diag_m: float, t: float, sched: Schedule, m: int, alpha,
                       hi_diag_m: float | None = None) -> float:
    """Ratio of the initial to the problem part of ``<m|H(t)|m>``.

    The initial part is ``(1 - t/T)(m + |alpha|^2)`` unless ``hi_diag_m`` overrides
    ``m + |alpha|^2``; the problem part is ``(t/T) <m|H_P|m>``. Returns ``inf``
    when the problem part vanishes.
    """
    if not 0.0 < t < sched.T:
        raise TimeOutOfRange(f"dominance needs 0 < t < T, got t={t}, T={sched.T}")
    s = t / sched.T
    if hi_diag_m is None:
        norm_sq = alpha.norm_sq if isinstance(alpha, Alpha) else float(np.sum(np.abs(np.atleast_1d(alpha)) ** 2))
        hi_diag_m = m + norm_sq
    first = (1.0 - s) * hi_diag_m
    second = s * hp_diag_m
    if second == 0.0:
        return math.inf
    return first / second
