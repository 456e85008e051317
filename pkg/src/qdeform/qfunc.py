"""q-deformed scalar functions and the spectral calculus behind them.

Conventions, fixed once for the whole package:

* ``q**x`` always means ``exp(x * log(q))`` with the principal branch,
  so complex and root-of-unity runs are reproducible;
* the 0/0 ratios ``(x)_q / x`` and ``[x]_q / x`` take their analytic
  limits at ``x = 0``.  Every construction that consumes them either
  multiplies the ``x = 0`` value by an annihilated vector or never
  evaluates it below ``x = 1``, so the convention cannot leak into map
  outputs (the test suite perturbs it to prove that).
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .fock import Op

__all__ = [
    "ConstructionError",
    "Regime",
    "DeformationParam",
    "classify",
    "root_of_unity",
    "as_param",
    "qpow",
    "qnum_std",
    "qnum_sym",
    "qnum_ladder",
    "qratio_safe",
    "q_gamma",
    "spectral_apply",
]

_TOL = 1e-12
_MAX_ROOT_ORDER = 256


class ConstructionError(Exception):
    """An operator construction is singular for the supplied deformation."""

    def __init__(self, message, offending=()):
        super().__init__(message)
        self.offending = tuple(offending)


class Regime(Enum):
    CLASSICAL = "classical"
    GENERIC_REAL_POSITIVE = "generic-real-positive"
    ROOT_OF_UNITY = "root-of-unity"
    GENERIC_COMPLEX = "generic-complex"


@dataclass(frozen=True)
class DeformationParam:
    """The scalar q, its principal logarithm h, and the regime of q."""

    q: complex
    h: complex
    regime: Regime
    root_order: int | None = None

    @property
    def is_real_positive(self) -> bool:
        return self.regime in (Regime.CLASSICAL, Regime.GENERIC_REAL_POSITIVE)

    def __str__(self):
        return format_complex(self.q)


def format_complex(z: complex, digits: int = 17) -> str:
    z = complex(z)
    if z.imag == 0.0:
        return format(z.real, f".{digits}g")
    return format(z.real, f".{digits}g") + format(z.imag, f"+.{digits}g") + "i"


def classify(q, tol: float = _TOL) -> DeformationParam:
    """Classify q as classical, generic real-positive, root of unity, or complex.

    Root-of-unity means ``q**(2p) == 1`` with ``q**(2k) != 1`` for
    ``0 < k < p`` and integer ``p >= 2`` (orders up to 256 are probed).
    """
    q = complex(q)
    if q == 0:
        raise ValueError("q must be nonzero")
    h = cmath.log(q)
    if abs(q - 1.0) <= tol:
        return DeformationParam(q, h, Regime.CLASSICAL)
    if abs(q.imag) <= tol and q.real > 0:
        return DeformationParam(complex(q.real), cmath.log(complex(q.real)), Regime.GENERIC_REAL_POSITIVE)
    if abs(abs(q) - 1.0) <= tol:
        for p in range(2, _MAX_ROOT_ORDER + 1):
            if abs(q ** (2 * p) - 1.0) <= tol * p:
                return DeformationParam(q, h, Regime.ROOT_OF_UNITY, root_order=p)
    return DeformationParam(q, h, Regime.GENERIC_COMPLEX)


def root_of_unity(p: int) -> DeformationParam:
    """Principal primitive choice q = exp(i pi / p), so q**(2p) = 1."""
    p = int(p)
    if p < 2:
        raise ValueError("root-of-unity order must be at least 2")
    h = 1j * cmath.pi / p
    return DeformationParam(cmath.exp(h), h, Regime.ROOT_OF_UNITY, root_order=p)


def as_param(q) -> DeformationParam:
    if isinstance(q, DeformationParam):
        return q
    return classify(q)


def qpow(q, x):
    """Principal-branch power q**x for scalar q and scalar or array x."""
    lq = cmath.log(complex(q))
    out = np.exp(np.asarray(x, dtype=complex) * lq)
    return out if isinstance(x, np.ndarray) else complex(out)


def qnum_std(x, q):
    """(x)_q := (q**x - 1)/(q - 1); equals x at q = 1 by continuity."""
    q = complex(q)
    if abs(q - 1.0) <= _TOL:
        return np.asarray(x, dtype=complex) if isinstance(x, np.ndarray) else complex(x)
    val = (np.exp(np.asarray(x, dtype=complex) * cmath.log(q)) - 1.0) / (q - 1.0)
    return val if isinstance(x, np.ndarray) else complex(val)


def qnum_sym(x, q):
    """[x]_q := (q**x - q**-x)/(q - 1/q); equals x at q = 1 by continuity."""
    q = complex(q)
    if abs(q - 1.0) <= _TOL:
        return np.asarray(x, dtype=complex) if isinstance(x, np.ndarray) else complex(x)
    if abs(q + 1.0) <= _TOL:
        raise ValueError("symmetric q-number is undefined at q = -1")
    xs = np.asarray(x, dtype=complex)
    lq = cmath.log(q)
    val = (np.exp(xs * lq) - np.exp(-xs * lq)) / (q - 1.0 / q)
    return val if isinstance(x, np.ndarray) else complex(val)


def qratio_safe(x, q, kind: str = "std"):
    """(x)_q / x or [x]_q / x for real x >= 0, with the analytic x -> 0 limit.

    The limit values are log(q)/(q-1) for the standard kind and
    2 log(q)/(q - 1/q) for the symmetric kind (1 in both cases at q = 1).
    """
    if kind not in ("std", "sym"):
        raise ValueError(f"unknown kind {kind!r}")
    q = complex(q)
    arr = np.asarray(x, dtype=float)
    if np.any(arr < -_TOL):
        raise ValueError("qratio_safe requires x >= 0")
    if abs(q - 1.0) <= _TOL:
        out = np.ones(arr.shape, dtype=complex)
        return out if isinstance(x, np.ndarray) else complex(out)
    small = arr <= _TOL
    safe = np.where(small, 1.0, arr)
    num = qnum_std(safe, q) if kind == "std" else qnum_sym(safe, q)
    if kind == "std":
        limit = cmath.log(q) / (q - 1.0)
    else:
        limit = 2.0 * cmath.log(q) / (q - 1.0 / q)
    out = np.where(small, limit, np.asarray(num) / safe)
    return out if isinstance(x, np.ndarray) else complex(out)


def qnum_ladder(top: int, q) -> np.ndarray:
    """[(0)_q, (1)_q, ..., (top)_q] built from (m+1)_q = 1 + q (m)_q.

    The recurrence keeps the telescoping identity between consecutive
    q-numbers exact to roundoff, which the quadratic-relation residuals
    need at large cutoffs; the values agree with :func:`qnum_std` to a
    few ulp.
    """
    if top < 0:
        raise ValueError("top must be nonnegative")
    q = complex(q)
    out = np.empty(top + 1, dtype=complex)
    acc = 0.0 + 0.0j
    for m in range(top + 1):
        out[m] = acc
        acc = 1.0 + q * acc
    return out


def q_gamma(k: int, q) -> complex:
    """Integer q-Gamma: product of (m)_q for m = 1 .. k-1, with value 1 at k = 1.

    Satisfies the recurrence q_gamma(k+1, q) = (k)_q * q_gamma(k, q).
    """
    if int(k) != k or k < 1:
        raise ValueError("q_gamma is defined for integer arguments k >= 1")
    acc = 1.0 + 0.0j
    for m in range(1, int(k)):
        acc *= qnum_std(m, q)
    return acc


def spectral_apply(fn, op: Op, tol: float = 1e-13) -> Op:
    """Apply a scalar function entrywise to a diagonal operator.

    The input must be diagonal in the stored basis (off-diagonal mass
    below ``tol``); anything else is an error, not a warning.
    """
    m = op.matrix
    off = m - np.diag(np.diag(m))
    off_mass = float(np.max(np.abs(off))) if off.size else 0.0
    if off_mass > tol:
        raise ValueError(f"operator is not diagonal in the stored basis (off-diagonal mass {off_mass:.3e})")
    vals = np.diag(m)
    new = np.asarray([fn(v) for v in vals], dtype=complex)
    return Op(op.space, np.diag(new))
