"""Truncated multi-mode Fock bases and boundary-conditioned ladder operators."""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DimensionOverflow, ZeroDimension, ConfigError

DEFAULT_MAX_DIM = 4096


class BoundaryCondition(enum.Enum):
    """Ladder action at the edges of a truncated mode.

    RIGID cuts the ladder off (``a|0> = 0``, ``a^dag|d-1> = 0``). PERIODIC and
    ANTIPERIODIC wrap it around with amplitude ``+sqrt(d)`` / ``-sqrt(d)``:
    ``a^dag|d-1> = +-sqrt(d)|0>`` and ``a|0> = +-sqrt(d)|d-1>``.
    """

    RIGID = "rigid"
    PERIODIC = "periodic"
    ANTIPERIODIC = "antiperiodic"

    @property
    def wrap_sign(self) -> int:
        return {"rigid": 0, "periodic": 1, "antiperiodic": -1}[self.value]

    @classmethod
    def parse(cls, value: "str | BoundaryCondition") -> "BoundaryCondition":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("-", "").replace("_", "")
        for member in cls:
            if member.value == key:
                return member
        raise ConfigError(f"unknown boundary condition {value!r}; expected one of "
                          + ", ".join(m.value for m in cls))


@dataclass(frozen=True)
class FockSpace:
    modes: int
    dims: tuple[int, ...]
    boundary: BoundaryCondition
    basis: tuple[tuple[int, ...], ...] = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def index(self, label: Sequence[int]) -> int:
        label = tuple(int(n) for n in label)
        if len(label) != self.modes or any(not 0 <= n < d for n, d in zip(label, self.dims)):
            raise ConfigError(f"label {label} outside basis with dims {self.dims}")
        return int(np.ravel_multi_index(label, self.dims))

    def label(self, index: int) -> tuple[int, ...]:
        return self.basis[index]

    def occupation(self, index: int) -> int:
        """Total occupation number sum(n_i) of a basis state."""
        return sum(self.basis[index])

    def format_label(self, index: int) -> str:
        lab = self.basis[index]
        return f"|{lab[0]}>" if self.modes == 1 else "|" + ",".join(map(str, lab)) + ">"


def make_space(modes: int, dims: Sequence[int],
               boundary: BoundaryCondition | str = BoundaryCondition.RIGID,
               max_dim: int = DEFAULT_MAX_DIM) -> FockSpace:
    """Enumerate the tensor-product basis, lexicographic with mode 1 slowest."""
    dims = tuple(int(d) for d in dims)
    if modes < 1:
        raise ZeroDimension(f"need at least one mode, got {modes}")
    if len(dims) != modes:
        raise ConfigError(f"{modes} modes but {len(dims)} truncation sizes")
    if any(d < 2 for d in dims):
        raise ZeroDimension(f"every mode needs at least 2 levels, got dims={dims}")
    total = math.prod(dims)
    if total > max_dim:
        raise DimensionOverflow(f"total dimension {total} exceeds cap {max_dim}")
    basis = tuple(itertools.product(*(range(d) for d in dims)))
    return FockSpace(modes, dims, BoundaryCondition.parse(boundary), basis)


def single_mode_annihilation(d: int, boundary: BoundaryCondition) -> np.ndarray:
    a = np.diag(np.sqrt(np.arange(1, d, dtype=float)), 1).astype(complex)
    # a|0> = +-sqrt(d)|d-1>
    a[d - 1, 0] = boundary.wrap_sign * math.sqrt(d)
    return a


def embed(op: np.ndarray, mode: int, dims: Sequence[int]) -> np.ndarray:
    """Place a single-mode operator on ``mode`` of the tensor product (identity elsewhere)."""
    out = np.eye(1, dtype=complex)
    for i, d in enumerate(dims):
        out = np.kron(out, op if i == mode else np.eye(d))
    return out


def _frozen(m: np.ndarray) -> np.ndarray:
    m.flags.writeable = False
    return m


@dataclass(frozen=True)
class LadderMatrices:
    a: tuple[np.ndarray, ...]
    adag: tuple[np.ndarray, ...]
    number: tuple[np.ndarray, ...]


def ladder_matrices(space: FockSpace) -> LadderMatrices:
    a, adag, number = [], [], []
    for i, d in enumerate(space.dims):
        ai = single_mode_annihilation(d, space.boundary)
        ai_full = embed(ai, i, space.dims)
        adag_full = embed(ai.conj().T, i, space.dims)
        a.append(_frozen(ai_full))
        adag.append(_frozen(adag_full))
        number.append(_frozen(adag_full @ ai_full))
    return LadderMatrices(tuple(a), tuple(adag), tuple(number))
