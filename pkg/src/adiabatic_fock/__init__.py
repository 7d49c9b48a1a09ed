"""Adiabatic evolution on truncated bosonic Fock spaces.

Builds coherent-state initial Hamiltonians and diagonal problem Hamiltonians,
integrates the linear interpolation between them, tracks the spectral flow and
the ground/first-excited matrix elements, and applies the >1/2 occupation
criterion for identifying the problem ground state.
"""

from .dynamics import PropagatorConfig, StateVector, Trajectory, evolve, final_fock_probs, initial_state
from .fockspace import BoundaryCondition, FockSpace, LadderMatrices, ladder_matrices, make_space
from .hamiltonians import (Alpha, HermitianOperator, Schedule, build_h_initial, build_h_problem_diag,
                           build_h_problem_dioph, diagonal_dominance, interpolate)
from .identify import apply_criterion, select_alpha, truncation_convergence
from .polynomial import DiophantineSpec
from .spectra import condition_monitor, degeneracy_check, eigensystem, spectral_flow

__version__ = "0.1.0"
