"""Scenario runs and parameter sweeps, writing ``<scenario>_<artifact>`` files."""

from __future__ import annotations

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from . import plotting, report
from .config import RunConfig
from .dynamics import PropagatorConfig, Trajectory, evolve, final_fock_probs, transfer_time
from .errors import ConfigError, FixedDimension, NoConvergence
from .fockspace import FockSpace, make_space
from .hamiltonians import (Alpha, HermitianOperator, Schedule, build_h_initial,
                           build_h_problem_diag, build_h_problem_dioph)
from .identify import (AlphaSearchTrace, ConvergenceReport, Verdict, apply_criterion,
                       problem_ground_level, select_alpha, truncation_convergence)
from .polynomial import DiophantineSpec
from .spectra import CrossingReport, FlowRecord, condition_monitor, spectral_flow

log = logging.getLogger(__name__)

SWEEP_AXES = ("alpha_mod", "T")


@dataclass
class Setup:
    space: FockSpace
    h_initial: HermitianOperator
    h_problem: HermitianOperator
    sched: Schedule
    propagator: PropagatorConfig


def build_setup(cfg: RunConfig) -> Setup:
    space = make_space(cfg.modes, cfg.dims, cfg.boundary)
    alpha = Alpha.of(cfg.alpha_value, cfg.modes)
    h_initial = build_h_initial(space, alpha, cfg.shifted)
    if cfg.hp_polynomial is not None:
        h_problem = build_h_problem_dioph(space, DiophantineSpec.parse(cfg.hp_polynomial, cfg.modes))
    else:
        h_problem = build_h_problem_diag(space, cfg.hp_diag)
    sched = Schedule.uniform(cfg.T, cfg.grid_points)
    prop = PropagatorConfig(cfg.substeps) if cfg.substeps else PropagatorConfig.for_duration(cfg.T)
    return Setup(space, h_initial, h_problem, sched, prop)


@dataclass
class RunResult:
    cfg: RunConfig
    setup: Setup
    trajectory: Trajectory
    flow: list[FlowRecord]
    crossing: CrossingReport
    verdict: Verdict
    true_ground: int
    transfer: float | None
    alpha_search: AlphaSearchTrace | None = None
    convergence: ConvergenceReport | None = None
    files: list[Path] = field(default_factory=list)

    @property
    def exit_code(self) -> int:
        return 4 if self.verdict.degenerate_target else 0


def _verdict_payload(cfg: RunConfig, space: FockSpace, verdict: Verdict, true_ground: int,
                     initial: np.ndarray, final: np.ndarray) -> dict:
    out = {"scenario": cfg.scenario, **verdict.to_dict()}
    out["candidate_label"] = space.format_label(verdict.candidate) if verdict.candidate is not None else None
    out["true_ground"] = true_ground
    out["true_ground_label"] = space.format_label(true_ground)
    out["claim_correct"] = bool(verdict.is_ground_claim and verdict.candidate == true_ground)
    out["initial_fock_probs"] = [float(p) for p in initial]
    out["final_fock_probs"] = [float(p) for p in final]
    return out


def run_scenario(cfg: RunConfig, *, alpha_search: bool = False,
                 truncation_dims: Sequence[int] | None = None, write: bool = True) -> RunResult:
    setup = build_setup(cfg)
    traj = evolve(setup.h_initial, setup.h_problem, setup.sched, setup.propagator)
    flow = spectral_flow(setup.h_initial, setup.h_problem, setup.sched)
    crossing = condition_monitor(flow, cfg.eps_condition, h_initial=setup.h_initial,
                                 h_problem=setup.h_problem, sched=setup.sched)
    final = final_fock_probs(traj)
    verdict = apply_criterion(final, setup.h_problem, traj.initial.fock_probs)
    true_ground, _ = problem_ground_level(setup.h_problem)
    result = RunResult(cfg, setup, traj, flow, crossing, verdict, true_ground, transfer_time(traj))

    if alpha_search:
        try:
            result.alpha_search = select_alpha(setup.h_problem, setup.space, setup.sched, cfg.alpha_value,
                                               cfg.dominance_threshold, cfg.max_rounds,
                                               shifted=cfg.shifted, cfg=None if cfg.substeps is None else setup.propagator)
        except NoConvergence as exc:
            result.alpha_search = exc.trace
            log.warning("%s", exc)
    if truncation_dims:
        if cfg.hp_polynomial is None:
            raise FixedDimension("truncation convergence needs a polynomial H_P; an explicit diagonal cannot grow")
        result.convergence = truncation_convergence(DiophantineSpec.parse(cfg.hp_polynomial, cfg.modes),
                                                    cfg.alpha_value, setup.sched, truncation_dims,
                                                    shifted=cfg.shifted)
    if write:
        _write_run(result)
    return result


def _write_run(res: RunResult):
    cfg, out = res.cfg, Path(res.cfg.output_dir)
    stem = out / cfg.scenario
    files = [
        report.write_trajectory_csv(res.trajectory, f"{stem}_trajectory.csv"),
        report.write_flow_csv(res.flow, f"{stem}_flow.csv"),
    ]
    crossing = res.crossing.to_dict()
    crossing.update(scenario=cfg.scenario, eps=cfg.eps_condition, transfer_time=res.transfer,
                    zeros_before_transfer=[t for t in res.crossing.zero_times
                                           if res.transfer is not None and t < res.transfer])
    files.append(report.write_json(crossing, f"{stem}_crossing.json"))
    files.append(report.write_json(
        _verdict_payload(cfg, res.setup.space, res.verdict, res.true_ground,
                         res.trajectory.initial.fock_probs, res.trajectory.final.fock_probs),
        f"{stem}_verdict.json"))
    if res.alpha_search is not None:
        files.append(report.write_json(res.alpha_search.to_dict(), f"{stem}_alpha_search.json"))
    if res.convergence is not None:
        files.append(report.write_json(res.convergence.to_dict(), f"{stem}_convergence.json"))
    if cfg.figures:
        files.append(plotting.plot_occupations(res.trajectory, f"{stem}_occupations.png", cfg.scenario))
        files.append(plotting.plot_spectral_flow(res.flow, res.crossing, f"{stem}_spectral_flow.png", cfg.scenario))
        files.append(plotting.plot_matrix_elements(res.flow, res.crossing, f"{stem}_matrix_elements.png",
                                                   cfg.scenario))
    res.files = files


@dataclass
class SweepRow:
    value: float
    final_probs: np.ndarray
    verdict: Verdict


@dataclass
class SweepResult:
    cfg: RunConfig
    axis: str
    rows: list[SweepRow]
    true_ground: int
    labels: list[str]
    files: list[Path] = field(default_factory=list)

    def probabilities(self) -> np.ndarray:
        return np.array([r.final_probs for r in self.rows])


def config_for(cfg: RunConfig, axis: str, value: float) -> RunConfig:
    if axis == "alpha_mod":
        if value < 0:
            raise ConfigError(f"|alpha| must be non-negative, got {value}")
        phased = []
        for a in cfg.alpha:
            phase = a / abs(a) if a != 0 else 1.0
            phased.append(complex(value * phase))
        return cfg.replace(alpha=tuple(phased))
    if axis == "T":
        if value <= 0:
            raise ConfigError(f"T must be positive, got {value}")
        return cfg.replace(T=float(value))
    raise ConfigError(f"unknown sweep axis {axis!r}; expected one of {SWEEP_AXES}")


def _sweep_point(cfg: RunConfig, axis: str, value: float) -> SweepRow:
    setup = build_setup(config_for(cfg, axis, value))
    traj = evolve(setup.h_initial, setup.h_problem, setup.sched, setup.propagator)
    final = final_fock_probs(traj)
    return SweepRow(float(value), final, apply_criterion(final, setup.h_problem, traj.initial.fock_probs))


def sweep(cfg: RunConfig, axis: str, values: Sequence[float], workers: int | None = None,
          write: bool = True) -> SweepResult:
    if axis not in SWEEP_AXES:
        raise ConfigError(f"unknown sweep axis {axis!r}; expected one of {SWEEP_AXES}")
    values = [float(v) for v in values]
    if not values:
        raise ConfigError("sweep needs at least one value")
    workers = workers or min(4, os.cpu_count() or 1)
    if workers > 1 and len(values) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda v: _sweep_point(cfg, axis, v), values))
    else:
        rows = [_sweep_point(cfg, axis, v) for v in values]
    setup = build_setup(cfg)
    true_ground, _ = problem_ground_level(setup.h_problem)
    labels = [setup.space.format_label(k) for k in range(setup.space.dim)]
    result = SweepResult(cfg, axis, rows, true_ground, labels)
    if write:
        stem = Path(cfg.output_dir) / f"{cfg.scenario}_sweep_{axis}"
        dim = setup.space.dim
        header = ([axis] + [f"p_fock_{k}" for k in range(dim)]
                  + ["p_true_ground", "candidate", "probability", "is_ground_claim",
                     "degenerate_target", "precondition_met"])
        body = ([r.value, *r.final_probs, r.final_probs[true_ground], r.verdict.candidate,
                 r.verdict.probability, r.verdict.is_ground_claim, r.verdict.degenerate_target,
                 r.verdict.precondition_met] for r in rows)
        result.files.append(report.write_rows(f"{stem}.csv", header, body))
        if cfg.figures:
            result.files.append(plotting.plot_sweep([r.value for r in rows], result.probabilities(),
                                                    f"{stem}.png", axis, labels, true_ground, cfg.scenario))
    return result


def parse_values(spec: str) -> list[float]:
    """``"1,2,3"`` or inclusive ranges ``"start:stop:step"``, comma-separated."""
    out = []
    for part in spec.split(","):
        part = part.strip()
        if not part:
            continue
        if ":" in part:
            try:
                start, stop, step = (float(x) for x in part.split(":"))
            except ValueError:
                raise ConfigError(f"bad range {part!r}; expected start:stop:step") from None
            if step <= 0 or stop < start:
                raise ConfigError(f"bad range {part!r}")
            n = int(np.floor((stop - start) / step + 1e-9)) + 1
            out.extend(round(start + k * step, 12) for k in range(n))
        else:
            try:
                out.append(float(part))
            except ValueError:
                raise ConfigError(f"bad sweep value {part!r}") from None
    if not out:
        raise ConfigError("no sweep values given")
    return out
