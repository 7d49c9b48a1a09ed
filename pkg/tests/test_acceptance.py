"""Acceptance gate. Each check records one PASS/FAIL line in the terminal summary.

Run alone with ``pytest tests/test_acceptance.py``.
"""

import math
import time

import numpy as np
import pytest
from scipy.linalg import expm

from adiabatic_fock import (PropagatorConfig, Schedule, build_h_initial, build_h_problem_diag, eigensystem,
                            evolve, final_fock_probs, initial_state, interpolate, make_space, select_alpha)
from adiabatic_fock.config import SCENARIOS, preset
from adiabatic_fock.runner import build_setup, run_scenario, sweep
from adiabatic_fock.spectra import flow_record

from conftest import SMITH_T

TRUE_GROUND = 4
T_SWEEP = [13.3444, 20.0, 40.0, 80.0, 100.0]


@pytest.fixture(scope="module")
def smith_run():
    start = time.perf_counter()
    res = run_scenario(preset("smith-counterexample"), write=False)
    return res, time.perf_counter() - start


@pytest.fixture(scope="module")
def alpha3_run():
    return run_scenario(preset("alpha3"), write=False)


def test_1_counterexample(smith_run, criterion):
    res, elapsed = smith_run
    p0 = res.trajectory.final.fock_probs[0]
    initial = res.trajectory.initial.fock_probs
    ok = abs(p0 - 0.999323) <= 2e-3 and bool(np.all(initial < 0.5)) and elapsed < 30
    criterion("1 counterexample reproduction", ok,
              f"P(|0>)={p0:.6f}, max initial={initial.max():.4f}, {elapsed:.1f}s")


def test_2_spectral_anomaly(smith_run, criterion):
    res, _ = smith_run
    c, setup = res.crossing, res.setup
    early = [t for t in c.zero_times if res.transfer is not None and t < res.transfer]
    all_small = [t for t in early if flow_record(setup.h_initial, setup.h_problem, t, setup.sched).max_element < 1e-3]
    ok = 9.5 < c.t_min_gap < 11.5 and c.is_avoided and c.min_gap > 0 and bool(all_small)
    criterion("2 spectral anomaly", ok,
              f"min gap {c.min_gap:.3e} at t={c.t_min_gap:.4f}; zeros {list(c.zero_times)}; "
              f"transfer t={res.transfer}")


def test_3_initial_spectrum(smith_hi, criterion):
    vals = eigensystem(smith_hi).values
    err_v = np.max(np.abs(vals - [0.0114457, 1.13072, 2.54058, 4.38841, 6.92885]))
    err_s = np.max(np.abs(np.diff(vals) - [1.11927, 1.40986, 1.84784, 2.54043]))
    criterion("3 initial spectrum", err_v <= 1e-4 and err_s <= 1e-4,
              f"max eigenvalue error {err_v:.2e}, max spacing error {err_s:.2e}")


def test_4_alpha_repair(smith_space, smith_hp, criterion):
    res = sweep(preset("smith-counterexample"), "alpha_mod", [1.0, 1.5, 2.0, 2.5, 3.0], write=False)
    p = {r.value: r.final_probs[TRUE_GROUND] for r in res.rows}
    trace = select_alpha(smith_hp, smith_space, Schedule.uniform(SMITH_T, 2), 1.0, shifted=True)
    acc = trace.accepted
    ok = p[2.5] > 0.5 and p[3.0] > 0.5 and p[1.0] < 0.5 and acc is not None and acc.verdict.candidate == 4
    criterion("4 alpha repair", ok,
              "P(|4>) " + ", ".join(f"a={a:g}:{v:.3f}" for a, v in p.items())
              + f"; select_alpha accepted {acc.verdict.candidate if acc else None} after {len(trace.rounds)} rounds")


def test_5_alpha3_smooth(alpha3_run, criterion):
    res = alpha3_run
    low = float(res.trajectory.p_ground.min())
    ok = low >= 0.5 and res.crossing.zero_times == ()
    criterion("5 alpha=3 smoothness", ok, f"min P(ground)={low:.4f}, zero_times={list(res.crossing.zero_times)}")


@pytest.mark.parametrize("bc", ["periodic", "antiperiodic"])
def test_6_boundary_monitor(bc, criterion):
    res = run_scenario(preset(bc), write=False)
    h = res.setup.h_initial.matrix
    entries_ok = h[0, 0].real == pytest.approx(6) and abs(abs(h[0, 4]) - math.sqrt(5)) < 1e-12
    zeros = res.crossing.zero_times
    criterion(f"6 boundary repair, {bc}: no simultaneous vanishing", entries_ok and zeros == (),
              f"zero_times={[round(t, 4) for t in zeros]}, magnitudes={list(res.crossing.zero_magnitudes)}")


@pytest.mark.parametrize("bc", ["periodic", "antiperiodic"])
def test_6_boundary_sweep(bc, criterion):
    res = sweep(preset(bc), "T", T_SWEEP, write=False)
    winners = [int(np.argmax(r.final_probs)) if r.final_probs.max() > 0.5 else None for r in res.rows]
    # from some T on, |4> is the only state above 1/2
    tail = winners[-2:]
    ok = all(w == TRUE_GROUND for w in tail) and all(int(np.sum(r.final_probs > 0.5)) <= 1 for r in res.rows)
    criterion(f"6 boundary repair, {bc}: T sweep", ok,
              ", ".join(f"T={r.value:g}:P4={r.final_probs[TRUE_GROUND]:.3f}" for r in res.rows))


def test_7a_norm_every_scenario(criterion):
    worst = 0.0
    for name in SCENARIOS:
        s = build_setup(preset(name).replace(grid_points=201))
        traj = evolve(s.h_initial, s.h_problem, s.sched, s.propagator)
        worst = max(worst, max(abs(x.fock_probs.sum() - 1) for x in traj.samples))
    criterion("7a norm conservation", worst < 1e-8, f"max |norm^2 - 1| = {worst:.2e}")


def test_7b_step_halving(smith_hi, smith_hp, criterion):
    sched = Schedule.uniform(SMITH_T, 2)
    finals = [final_fock_probs(evolve(smith_hi, smith_hp, sched, PropagatorConfig(n))) for n in (1000, 2000, 4000)]
    d1, d2 = (np.max(np.abs(b - a)) for a, b in zip(finals, finals[1:]))
    criterion("7b step-halving second order", 3.5 < d1 / d2 < 4.5, f"changes {d1:.2e} -> {d2:.2e}, ratio {d1 / d2:.3f}")


def test_7c_brute_force_oracle(criterion):
    worst = 0.0
    for d, al, diag in [(2, 0.8, (1.0, 0.0)), (3, 1.2j, (2.0, 0.0, 1.0)), (4, 0.7 + 0.3j, (3.0, 0.5, 2.0, 1.0))]:
        sp = make_space(1, [d], "rigid")
        hi, hp = build_h_initial(sp, al), build_h_problem_diag(sp, diag)
        T, n = 3.0, 2000
        ours = final_fock_probs(evolve(hi, hp, Schedule.uniform(T, 2), PropagatorConfig(n)))
        psi, m = initial_state(hi).amplitudes, 10 * n
        for k in range(m):
            s = (k + 0.5) / m
            psi = expm(-1j * (T / m) * ((1 - s) * hi.matrix + s * hp.matrix)) @ psi
        worst = max(worst, float(np.max(np.abs(ours - np.abs(psi) ** 2))))
    criterion("7c brute-force propagator oracle", worst <= 1e-6, f"max deviation {worst:.2e}")


def test_7d_poisson_oracle(criterion):
    probs = initial_state(build_h_initial(make_space(1, [50], "rigid"), 1.0)).probabilities()
    err = max(abs(probs[n] - math.exp(-1) / math.factorial(n)) for n in range(50))
    criterion("7d Poisson coherent-state oracle", err <= 1e-6, f"max deviation {err:.2e}")


def test_7e_endpoints_and_hermiticity(criterion):
    ok, worst = True, 0.0
    for name in SCENARIOS:
        s = build_setup(preset(name))
        ok &= interpolate(s.h_initial, s.h_problem, 0.0, s.sched) is s.h_initial
        ok &= interpolate(s.h_initial, s.h_problem, s.sched.T, s.sched) is s.h_problem
        for t in s.sched.grid[::250]:
            m = interpolate(s.h_initial, s.h_problem, t, s.sched).matrix
            worst = max(worst, float(np.max(np.abs(m - m.conj().T))))
    criterion("7e endpoint identities and Hermiticity", ok and worst <= 1e-12, f"max |H - H^dag| = {worst:.1e}")


def test_8_adiabatic_limit(smith_hi, smith_hp, criterion):
    traj = evolve(smith_hi, smith_hp, Schedule.uniform(200.0, 2))
    p = traj.final.fock_probs[TRUE_GROUND]
    criterion("8 adiabatic limit T=200", p > 0.99, f"P(|4>)={p:.3e}")
