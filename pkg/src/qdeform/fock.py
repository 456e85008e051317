"""Truncated multi-mode Fock spaces and dense operator algebra.

Bosonic (Weyl) and fermionic (Clifford) mode algebras are realized as
complex matrices over a finite occupation basis.  Raising past the
cutoff maps to the zero vector (hard wall), which keeps
``annihilator(space, i) == creator(space, i).dag()`` exact and confines
every truncation artifact to the top shell of the basis.  The interior
projector masks that shell off: a relation whose sides are operator
words of length ``L`` or less is truncation-exact on the image of a
projector with ``margin >= L``.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass
from enum import Enum
from functools import cached_property

import numpy as np

__all__ = [
    "Statistics",
    "FockSpace",
    "Op",
    "InteriorProjector",
    "make_space",
    "identity",
    "zero",
    "diagonal_op",
    "creator",
    "annihilator",
    "number_ops",
    "interior",
    "commutator",
    "anticommutator",
    "bracket",
]


class Statistics(Enum):
    BOSE = "bose"
    FERMI = "fermi"


@dataclass(frozen=True)
class FockSpace:
    """Finite occupation basis for ``mode_count`` modes.

    The basis ordering is graded: ascending total quantum number, and
    within each grade tuples are listed with earlier modes filled first,
    so ``(1, 0)`` precedes ``(0, 1)``.  The ordering is total and
    deterministic; two constructions of the same space coincide.
    """

    mode_count: int
    statistics: Statistics
    cutoff: int
    basis: tuple

    @property
    def dimension(self) -> int:
        return len(self.basis)

    @cached_property
    def _lookup(self) -> dict:
        return {occ: k for k, occ in enumerate(self.basis)}

    @cached_property
    def totals(self) -> np.ndarray:
        arr = np.array([sum(occ) for occ in self.basis], dtype=int)
        arr.setflags(write=False)
        return arr

    def index(self, occupation) -> int:
        return self._lookup[tuple(occupation)]

    def occupations(self, mode: int) -> np.ndarray:
        return np.array([occ[mode] for occ in self.basis], dtype=int)

    @property
    def vacuum_index(self) -> int:
        return self._lookup[(0,) * self.mode_count]


def make_space(mode_count: int, statistics=Statistics.BOSE, cutoff: int = 0) -> FockSpace:
    """Build a truncated space; for Fermi the cutoff is clamped to mode_count."""
    if mode_count < 1:
        raise ValueError("mode_count must be at least 1")
    if cutoff < 0:
        raise ValueError("cutoff must be nonnegative")
    statistics = Statistics(statistics)
    if statistics is Statistics.FERMI:
        cutoff = min(cutoff, mode_count)
        per_mode = range(2)
    else:
        per_mode = range(cutoff + 1)
    tuples = [t for t in itertools.product(per_mode, repeat=mode_count) if sum(t) <= cutoff]
    tuples.sort(key=lambda t: (sum(t), tuple(-x for x in t)))
    return FockSpace(mode_count, statistics, cutoff, tuple(tuples))


@dataclass(frozen=True, eq=False)
class Op:
    """Dense square matrix tied to one space.

    All algebra (sum, product, adjoint, scalar multiple) stays on that
    space; combining operators from different spaces raises.
    """

    space: object
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        d = self.space.dimension
        if m.shape != (d, d):
            raise ValueError(f"matrix shape {m.shape} does not match space dimension {d}")
        object.__setattr__(self, "matrix", m)

    def _peer(self, other: "Op") -> "Op":
        if not isinstance(other, Op):
            raise TypeError(f"expected Op, got {type(other).__name__}")
        if self.space != other.space:
            raise ValueError("operators live on different spaces")
        return other

    def __add__(self, other):
        return Op(self.space, self.matrix + self._peer(other).matrix)

    def __sub__(self, other):
        return Op(self.space, self.matrix - self._peer(other).matrix)

    def __neg__(self):
        return Op(self.space, -self.matrix)

    def __mul__(self, scalar):
        return Op(self.space, self.matrix * complex(scalar))

    __rmul__ = __mul__

    def __matmul__(self, other):
        return Op(self.space, self.matrix @ self._peer(other).matrix)

    def __pow__(self, k: int):
        return Op(self.space, np.linalg.matrix_power(self.matrix, int(k)))

    def dag(self) -> "Op":
        return Op(self.space, self.matrix.conj().T)

    def norm(self) -> float:
        """Max absolute entry."""
        return float(np.max(np.abs(self.matrix))) if self.matrix.size else 0.0

    def diag(self) -> np.ndarray:
        return np.diag(self.matrix).copy()

    def apply(self, vec: np.ndarray) -> np.ndarray:
        return self.matrix @ np.asarray(vec, dtype=complex)


def identity(space) -> Op:
    return Op(space, np.eye(space.dimension, dtype=complex))


def zero(space) -> Op:
    return Op(space, np.zeros((space.dimension, space.dimension), dtype=complex))


def diagonal_op(space, values) -> Op:
    vals = np.asarray(values, dtype=complex)
    if vals.shape != (space.dimension,):
        raise ValueError("diagonal length does not match space dimension")
    return Op(space, np.diag(vals))


def creator(space: FockSpace, i: int) -> Op:
    """Matrix of a+_i in the occupation basis.

    Bose: sqrt(n_i + 1) raising n_i, zero past the cutoff wall.
    Fermi: Jordan-Wigner string sign (-1)**(n_0 + ... + n_{i-1}).
    """
    if not 0 <= i < space.mode_count:
        raise IndexError(f"mode index {i} out of range for {space.mode_count} modes")
    d = space.dimension
    m = np.zeros((d, d), dtype=complex)
    for col, occ in enumerate(space.basis):
        if sum(occ) + 1 > space.cutoff:
            continue
        if space.statistics is Statistics.FERMI:
            if occ[i] == 1:
                continue
            target = occ[:i] + (1,) + occ[i + 1:]
            sign = -1.0 if sum(occ[:i]) % 2 else 1.0
            m[space.index(target), col] = sign
        else:
            target = occ[:i] + (occ[i] + 1,) + occ[i + 1:]
            m[space.index(target), col] = np.sqrt(occ[i] + 1.0)
    return Op(space, m)


def annihilator(space: FockSpace, i: int) -> Op:
    """Exactly the adjoint of :func:`creator`."""
    return creator(space, i).dag()


def number_ops(space: FockSpace):
    """Per-mode number operators and their sum, all diagonal."""
    per_mode = tuple(diagonal_op(space, space.occupations(i)) for i in range(space.mode_count))
    total = diagonal_op(space, space.totals)
    return per_mode, total


@dataclass(frozen=True, eq=False)
class InteriorProjector:
    """0/1 diagonal projector onto the truncation-safe subspace.

    ``P @ P == P == P.dag()`` exactly.  ``norm(op)`` is the max absolute
    entry of ``P op P``, the residual measure used throughout.
    """

    space: object
    margin: int
    mask: np.ndarray

    @property
    def rank(self) -> int:
        return int(np.count_nonzero(self.mask))

    @property
    def op(self) -> Op:
        return Op(self.space, np.diag(self.mask.astype(complex)))

    def project(self, op: Op) -> Op:
        m = op.matrix.copy()
        m[~self.mask, :] = 0.0
        m[:, ~self.mask] = 0.0
        return Op(self.space, m)

    def norm(self, op: Op) -> float:
        sub = op.matrix[np.ix_(self.mask, self.mask)]
        return float(np.max(np.abs(sub))) if sub.size else 0.0


def interior(space: FockSpace, margin: int = 2) -> InteriorProjector:
    """Projector onto states with total quanta <= cutoff - margin."""
    if margin < 0:
        raise ValueError("margin must be nonnegative")
    if margin > space.cutoff:
        warnings.warn(
            f"interior margin {margin} exceeds cutoff {space.cutoff}; projector is empty",
            stacklevel=2,
        )
    mask = space.totals <= space.cutoff - margin
    return InteriorProjector(space, margin, mask)


def commutator(a: Op, b: Op) -> Op:
    return a @ b - b @ a


def anticommutator(a: Op, b: Op) -> Op:
    return a @ b + b @ a


def bracket(a: Op, b: Op, statistics: Statistics) -> Op:
    """Commutator for Bose, anticommutator for Fermi."""
    if Statistics(statistics) is Statistics.FERMI:
        return anticommutator(a, b)
    return commutator(a, b)
