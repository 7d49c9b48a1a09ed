"""Ground-state identification from final occupation probabilities.

``apply_criterion`` claims a Fock state as the ground state of a diagonal H_P
when its final probability is strictly above one half, provided no state
started above one half and the H_P ground level is nondegenerate.
``select_alpha`` repeats the evolution with growing |alpha| until the claimed
candidate is stable under a diagonal-dominance check late in the sweep.
``truncation_convergence`` compares final distributions across growing
truncations.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .dynamics import PropagatorConfig, evolve, final_fock_probs
from .errors import ConfigError, FixedDimension, NoConvergence
from .fockspace import BoundaryCondition, FockSpace, make_space
from .hamiltonians import (Alpha, HermitianOperator, Schedule, build_h_initial,
                           build_h_problem_dioph, diagonal_dominance)
from .polynomial import DiophantineSpec
from .spectra import DEFAULT_DEGENERACY_TOL

log = logging.getLogger(__name__)

THRESHOLD = 0.5
DEFAULT_DOMINANCE_THRESHOLD = 2.0
DEFAULT_DOMINANCE_FRACTION = 0.9


@dataclass(frozen=True)
class Verdict:
    candidate: int | None
    probability: float
    is_ground_claim: bool
    degenerate_target: bool
    precondition_met: bool = True

    def to_dict(self) -> dict:
        return {
            "candidate": self.candidate,
            "probability": self.probability,
            "is_ground_claim": self.is_ground_claim,
            "degenerate_target": self.degenerate_target,
            "precondition_met": self.precondition_met,
        }


def problem_ground_level(h_problem: HermitianOperator, tol: float = DEFAULT_DEGENERACY_TOL):
    """Index of the lowest diagonal entry of H_P and whether that level is degenerate."""
    if not h_problem.is_diagonal():
        raise ConfigError("problem Hamiltonian must be diagonal in the Fock basis")
    diag = h_problem.diagonal
    order = np.argsort(diag, kind="stable")
    degenerate = diag.size > 1 and diag[order[1]] - diag[order[0]] < tol
    return int(order[0]), bool(degenerate)


def apply_criterion(final_probs: Sequence[float], h_problem: HermitianOperator,
                    precheck_initial: Sequence[float]) -> Verdict:
    final_probs = np.asarray(final_probs, dtype=float)
    initial = np.asarray(precheck_initial, dtype=float)
    if final_probs.shape != (h_problem.dim,) or initial.shape != (h_problem.dim,):
        raise ConfigError("probability vectors must match the H_P dimension")
    for name, p in (("final", final_probs), ("initial", initial)):
        if abs(p.sum() - 1.0) > 1e-6:
            raise ConfigError(f"{name} probabilities sum to {p.sum():.9f}, not 1")
    _, degenerate = problem_ground_level(h_problem)
    precondition = bool(np.all(initial < THRESHOLD))
    k = int(np.argmax(final_probs))
    p = float(final_probs[k])
    candidate = k if p > THRESHOLD else None
    claim = candidate is not None and precondition and not degenerate
    return Verdict(candidate, p, claim, degenerate, precondition)


@dataclass(frozen=True)
class AlphaRound:
    alpha: Alpha
    verdict: Verdict
    dominance_ratio: float
    accepted: bool

    def to_dict(self) -> dict:
        return {
            "alpha_re": [v.real for v in self.alpha.values],
            "alpha_im": [v.imag for v in self.alpha.values],
            "candidate": self.verdict.candidate,
            "probability": self.verdict.probability,
            "dominance_ratio": _json_float(self.dominance_ratio),
            "accepted": self.accepted,
            "is_ground_claim": self.verdict.is_ground_claim,
            "degenerate_target": self.verdict.degenerate_target,
        }


@dataclass
class AlphaSearchTrace:
    rounds: list[AlphaRound] = field(default_factory=list)

    @property
    def accepted(self) -> AlphaRound | None:
        return self.rounds[-1] if self.rounds and self.rounds[-1].accepted else None

    @property
    def degenerate_target(self) -> bool:
        return any(r.verdict.degenerate_target for r in self.rounds)

    def to_dict(self) -> dict:
        acc = self.accepted
        return {
            "rounds": [r.to_dict() for r in self.rounds],
            "accepted_candidate": acc.verdict.candidate if acc else None,
            "degenerate_target": self.degenerate_target,
        }


def _json_float(x: float):
    return None if not np.isfinite(x) else float(x)


def select_alpha(h_problem: HermitianOperator, space: FockSpace, sched: Schedule, start_alpha,
                 dominance_threshold: float = DEFAULT_DOMINANCE_THRESHOLD, max_rounds: int = 8, *,
                 shifted: bool = False, cfg: PropagatorConfig | None = None,
                 dominance_fraction: float = DEFAULT_DOMINANCE_FRACTION,
                 growth: float = 2.0) -> AlphaSearchTrace:
    """Escalate |alpha| until two consecutive rounds claim the same dominant candidate.

    Each round evolves from the ground state of H_I(alpha) and applies the
    criterion. A claimed candidate ``m`` is scored by ``diagonal_dominance`` at
    ``t = dominance_fraction * T``. Below ``dominance_threshold`` (or with no
    claim) |alpha| is multiplied by ``growth`` with its phase kept; otherwise
    the process is repeated at the same alpha. A round is accepted when its
    ratio passes and the previous round claimed the same candidate.

    Raises NoConvergence carrying the trace after ``max_rounds`` rounds.
    """
    if max_rounds < 2:
        raise ConfigError("max_rounds must be at least 2")
    if growth <= 1.0:
        raise ConfigError("growth factor must exceed 1")
    alpha = Alpha.of(start_alpha, space.modes)
    if alpha.norm_sq == 0.0:
        raise ConfigError("alpha search needs a nonzero starting alpha")
    trace = AlphaSearchTrace()
    previous = None
    t_check = dominance_fraction * sched.T
    for r in range(max_rounds):
        h_initial = build_h_initial(space, alpha, shifted)
        traj = evolve(h_initial, h_problem, sched, cfg)
        verdict = apply_criterion(final_fock_probs(traj), h_problem, traj.initial.fock_probs)
        ratio = float("nan")
        if verdict.is_ground_claim:
            m = verdict.candidate
            ratio = diagonal_dominance(float(h_problem.diagonal[m]), t_check, sched,
                                       space.occupation(m), alpha)
        passes = verdict.is_ground_claim and ratio >= dominance_threshold
        accepted = passes and previous == verdict.candidate
        trace.rounds.append(AlphaRound(alpha, verdict, ratio, accepted))
        log.info("round %d: alpha=%s candidate=%s p=%.6f ratio=%.4g accepted=%s", r + 1,
                 alpha.values, verdict.candidate, verdict.probability, ratio, accepted)
        if accepted:
            return trace
        previous = verdict.candidate if verdict.is_ground_claim else None
        if not passes:
            alpha = alpha.scaled(growth)
    raise NoConvergence(f"no stable candidate after {max_rounds} rounds"
                        + (" (H_P ground level is degenerate)" if trace.degenerate_target else ""),
                        trace)


@dataclass
class ConvergenceReport:
    dims: list[int]
    distributions: list[np.ndarray]
    total_variation: list[float]
    converged: bool
    tol: float

    def to_dict(self) -> dict:
        return {
            "dims": list(self.dims),
            "distributions": [list(map(float, p)) for p in self.distributions],
            "total_variation": list(self.total_variation),
            "converged": self.converged,
            "tol": self.tol,
        }


def _aligned(small: FockSpace, large: FockSpace, p_small: np.ndarray, p_large: np.ndarray):
    """Both distributions on the shared labels of ``small`` plus one tail bucket."""
    shared = np.array([large.index(lab) for lab in small.basis])
    q = p_large[shared]
    tail_large = max(0.0, 1.0 - q.sum())
    return np.append(p_small, 0.0), np.append(q, tail_large)


def total_variation(p: np.ndarray, q: np.ndarray) -> float:
    return float(min(1.0, 0.5 * np.abs(np.asarray(p) - np.asarray(q)).sum()))


def truncation_convergence(problem: "DiophantineSpec | Callable[[FockSpace], HermitianOperator]",
                           alpha, sched: Schedule, dims: Sequence[int], tol: float = 1e-3, *,
                           shifted: bool = False, cfg: PropagatorConfig | None = None) -> ConvergenceReport:
    """Rerun the sweep on growing rigid truncations and compare final distributions.

    ``problem`` must be able to grow with the truncation: a Diophantine
    polynomial or a callable building H_P for a given space. A fixed matrix
    is rejected with FixedDimension. Each size is applied to every mode.
    """
    if isinstance(problem, HermitianOperator):
        raise FixedDimension(f"a fixed {problem.dim}x{problem.dim} H_P cannot follow a growing truncation")
    dims = [int(d) for d in dims]
    if len(dims) < 2 or any(b < a for a, b in zip(dims, dims[1:])):
        raise ConfigError(f"dims must be non-decreasing with at least two entries, got {dims}")
    if isinstance(problem, DiophantineSpec):
        modes = problem.n_vars
        build = lambda sp: build_h_problem_dioph(sp, problem)  # noqa: E731
    else:
        modes = len(np.atleast_1d(alpha)) if not isinstance(alpha, Alpha) else len(alpha.values)
        build = problem
    spaces, dists = [], []
    for d in dims:
        space = make_space(modes, [d] * modes, BoundaryCondition.RIGID)
        traj = evolve(build_h_initial(space, alpha, shifted), build(space), sched, cfg)
        spaces.append(space)
        dists.append(final_fock_probs(traj))
    tv = []
    for (s1, p1), (s2, p2) in zip(zip(spaces, dists), zip(spaces[1:], dists[1:])):
        a, b = _aligned(s1, s2, p1, p2)
        tv.append(total_variation(a, b))
    return ConvergenceReport(dims, dists, tv, bool(tv[-1] < tol), tol)
