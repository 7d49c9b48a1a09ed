"""Time-dependent Schrodinger evolution along the linear schedule.

Each uniform substep ``[t, t + h]`` applies ``exp(-i h H(t + h/2))`` exactly.
The generator is Hermitian, so the exponential is taken through its
eigendecomposition, batched over blocks of substeps; the step is unitary to
rounding error regardless of ``h``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DegenerateStart, DimMismatch, NormDrift
from .hamiltonians import HermitianOperator, Schedule, interpolate
from .spectra import DEFAULT_DEGENERACY_TOL, degeneracy_check, eigensystem

REFERENCE_T = 13.3444
REFERENCE_SUBSTEPS = 20000
MIN_SUBSTEPS = 100
NORM_TOL = 1e-8
_BLOCK_ELEMENTS = 1 << 21


@dataclass(frozen=True)
class PropagatorConfig:
    substeps: int = REFERENCE_SUBSTEPS
    method: str = "exponential-midpoint"

    def __post_init__(self):
        if int(self.substeps) < MIN_SUBSTEPS:
            raise ConfigError(f"substeps must be >= {MIN_SUBSTEPS}, got {self.substeps}")
        if self.method != "exponential-midpoint":
            raise ConfigError(f"unknown propagation method {self.method!r}")

    @classmethod
    def for_duration(cls, T: float) -> "PropagatorConfig":
        """Default resolution: 20000 substeps at T = 13.3444, scaled linearly with T."""
        return cls(max(MIN_SUBSTEPS, math.ceil(REFERENCE_SUBSTEPS * T / REFERENCE_T)))


@dataclass(frozen=True, eq=False)
class StateVector:
    amplitudes: np.ndarray = field(repr=False)
    t: float = 0.0

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


@dataclass(frozen=True, eq=False)
class Sample:
    t: float
    state: StateVector
    fock_probs: np.ndarray
    p_ground: float
    p_excited: float


@dataclass(frozen=True, eq=False)
class Trajectory:
    samples: tuple[Sample, ...]

    @property
    def times(self) -> np.ndarray:
        return np.array([s.t for s in self.samples])

    @property
    def fock_probs(self) -> np.ndarray:
        return np.array([s.fock_probs for s in self.samples])

    @property
    def p_ground(self) -> np.ndarray:
        return np.array([s.p_ground for s in self.samples])

    @property
    def p_excited(self) -> np.ndarray:
        return np.array([s.p_excited for s in self.samples])

    @property
    def initial(self) -> Sample:
        return self.samples[0]

    @property
    def final(self) -> Sample:
        return self.samples[-1]


def initial_state(h_initial: HermitianOperator, tol: float = DEFAULT_DEGENERACY_TOL) -> StateVector:
    """Ground state of ``h_initial`` with its largest amplitude made real and positive."""
    es = eigensystem(h_initial)
    if degeneracy_check(es, tol):
        raise DegenerateStart(f"initial ground level is degenerate (gap {es.values[1] - es.values[0]:.3e})")
    v = np.array(es.ground, dtype=complex)
    k = int(np.argmax(np.abs(v)))
    v *= np.conj(v[k]) / abs(v[k])
    v /= np.linalg.norm(v)
    return StateVector(v, 0.0)


def _exponentials(h_initial: np.ndarray, delta: np.ndarray, fractions: np.ndarray, dt: float) -> np.ndarray:
    """Stack of ``exp(-i dt H(s))`` for ``H(s) = H_I + s (H_P - H_I)``."""
    w, v = np.linalg.eigh(h_initial[None, :, :] + fractions[:, None, None] * delta[None, :, :])
    return np.einsum("kij,kj,klj->kil", v, np.exp(-1j * dt * w), v.conj())


def _check_norm(psi: np.ndarray, t: float):
    drift = abs(np.linalg.norm(psi) - 1.0)
    if drift > NORM_TOL:
        raise NormDrift(f"|psi| drifted by {drift:.3e} at t={t:.6g}; increase substeps")


def evolve(h_initial: HermitianOperator, h_problem: HermitianOperator, sched: Schedule,
           cfg: PropagatorConfig | None = None, psi0: StateVector | None = None) -> Trajectory:
    """Integrate ``d/dt psi = -i H(t) psi`` from ``psi0`` and sample at the schedule grid.

    ``psi0`` defaults to the ground state of ``h_initial``. Grid times that fall
    between substep boundaries are reached by a partial midpoint step from the
    preceding boundary, leaving the uniform stepping untouched.
    """
    if h_initial.dim != h_problem.dim:
        raise DimMismatch(f"H_I is {h_initial.dim}-dimensional, H_P is {h_problem.dim}")
    cfg = cfg or PropagatorConfig.for_duration(sched.T)
    psi0 = psi0 if psi0 is not None else initial_state(h_initial)
    psi = np.array(psi0.amplitudes, dtype=complex)
    if psi.shape != (h_initial.dim,):
        raise DimMismatch(f"state has {psi.size} amplitudes for dimension {h_initial.dim}")
    _check_norm(psi, 0.0)

    T, n = sched.T, int(cfg.substeps)
    h = T / n
    hi = h_initial.matrix
    delta = h_problem.matrix - hi

    # grid time -> (boundary index, remaining partial step)
    pending = []
    for t in sched.grid:
        kb = min(n, int(math.floor(t / h)))
        if abs(t - (kb + 1) * h) <= 1e-12 * T and kb < n:
            kb += 1
        pending.append((kb, max(0.0, t - kb * h), float(t)))

    samples = []
    cursor = 0

    def emit(k, psi):
        nonlocal cursor
        while cursor < len(pending) and pending[cursor][0] == k:
            kb, rest, t = pending[cursor]
            state = psi
            if rest > 0.0:
                frac = np.array([(kb * h + 0.5 * rest) / T])
                state = _exponentials(hi, delta, frac, rest)[0] @ psi
            _check_norm(state, t)
            es = eigensystem(interpolate(h_initial, h_problem, t, sched))
            probs = np.abs(state) ** 2
            samples.append(Sample(t, StateVector(state, t), probs,
                                  float(abs(np.vdot(es.ground, state)) ** 2),
                                  float(abs(np.vdot(es.excited, state)) ** 2)))
            cursor += 1

    block = max(1, min(4096, _BLOCK_ELEMENTS // (h_initial.dim ** 2)))
    for start in range(0, n, block):
        stop = min(n, start + block)
        steps = _exponentials(hi, delta, (np.arange(start, stop) + 0.5) / n, h)
        for j, u in enumerate(steps):
            emit(start + j, psi)
            psi = u @ psi
    emit(n, psi)
    return Trajectory(tuple(samples))


def final_fock_probs(traj: Trajectory) -> np.ndarray:
    return traj.final.fock_probs.copy()


def transfer_time(traj: Trajectory) -> float | None:
    """First sampled time at which the first excited state outweighs the ground state."""
    for s in traj.samples:
        if s.p_excited > s.p_ground:
            return s.t
    return None
