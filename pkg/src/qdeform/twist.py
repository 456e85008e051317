"""Concrete twist data for the deformation laboratory.

Two instances are provided.  The semiuniversal sl(2) twist is a 2x2
matrix F whose first leg is the fundamental representation and whose
second leg is realized through the Jordan-Schwinger map,

    F = || a(j,j0)      b(j,j0) j-   ||        F^-1 = F with b -> -b,
        || -j+ b(j,j0)  a(j,j0-1)    ||

with scalar functions a, b evaluated on the joint (j, j0) spectrum at
the position where they stand.  The abelian (Reshetikhin) twist is
exp(h w_ij h_i ⊗ h_j) over a commuting Cartan family with antisymmetric
w, for which every derived object (legs, gamma elements, R-matrix) is
diagonal and computable entrywise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fock import FockSpace, Op, diagonal_op, number_ops
from .jschwinger import Sl2Triple, sigma_sl2
from .qfunc import ConstructionError, DeformationParam, Regime, as_param, qnum_sym, qpow, qratio_safe

__all__ = [
    "MatrixTwist",
    "AbelianTwist",
    "f_matrix_sl2",
    "r_matrix_sl2",
    "yang_baxter_residual",
    "hecke_residual",
    "flip_matrix",
    "reshetikhin_twist",
    "standard_abelian_twist",
]


@dataclass(frozen=True)
class MatrixTwist:
    """2x2 matrix twist with operator-valued second leg.

    ``f[i][k] @ f_inv[k][j]`` summed over k is the block identity, and
    for real positive q the twist is unitary: f[i][j].dag() == f_inv[j][i].
    """

    space: FockSpace
    q: DeformationParam
    f: tuple
    f_inv: tuple
    triple: Sl2Triple

    def counit_block(self, which: str = "f") -> np.ndarray:
        """Vacuum expectation of the operator leg, a 2x2 scalar matrix."""
        entries = self.f if which == "f" else self.f_inv
        v = self.space.vacuum_index
        return np.array([[entries[i][j].matrix[v, v] for j in range(2)] for i in range(2)])


def _ab_values(triple: Sl2Triple, q: complex):
    """Spectra of the scalar functions a(j, j0), a(j, j0-1), b(j, j0)."""
    j = triple.j_values
    j0 = triple.j0_values

    def afun(jv, j0v):
        pref = qpow(q, (jv - j0v) / 2.0) / np.sqrt(
            (1.0 + 2.0 * jv) * np.asarray(qnum_sym(1.0 + 2.0 * jv, q)))
        main = np.sqrt((1.0 + jv + j0v) * np.asarray(qnum_sym(1.0 + jv + j0v, q)))
        tail = qpow(q, -(1.0 + 2.0 * jv) / 2.0) * np.sqrt(
            (jv - j0v) * np.asarray(qnum_sym(jv - j0v, q)))
        return pref * (main + tail)

    def bfun(jv, j0v):
        pref = qpow(q, (jv - j0v) / 2.0) / np.sqrt(
            (1.0 + 2.0 * jv) * np.asarray(qnum_sym(1.0 + 2.0 * jv, q)))
        main = np.sqrt(np.asarray(qratio_safe(1.0 + jv + j0v, q, "sym")))
        tail = qpow(q, -(1.0 + 2.0 * jv) / 2.0) * np.sqrt(
            np.asarray(qratio_safe(jv - j0v, q, "sym")))
        return pref * (main - tail)

    return afun(j, j0), afun(j, j0 - 1.0), bfun(j, j0)


def f_matrix_sl2(space: FockSpace, q) -> MatrixTwist:
    """Matrix twist on a two-mode space.

    The 0/0 ratio in b at j = j0 takes its analytic limit; wherever that
    limit value appears it multiplies an annihilated vector, so the map
    output does not depend on it.  At a root of unity the radicands go
    negative on spins past the order, which is reported as a
    construction failure listing the offending (j, j0) eigenvalues.
    """
    qp = as_param(q)
    tr = sigma_sl2(space)
    if qp.regime is Regime.ROOT_OF_UNITY:
        j, j0 = tr.j_values, tr.j0_values
        labels = list(zip(j, j0))
        bad = []
        for vals in (
            (1.0 + 2.0 * j) * np.asarray(qnum_sym(1.0 + 2.0 * j, qp.q)),
            (1.0 + j + j0) * np.asarray(qnum_sym(1.0 + j + j0, qp.q)),
            (j - j0) * np.asarray(qnum_sym(j - j0, qp.q)),
        ):
            bad += [(labels[k], complex(v)) for k, v in enumerate(vals)
                    if abs(v.imag) < 1e-12 and v.real < -1e-12]
        if bad:
            raise ConstructionError(
                f"matrix twist has negative radicands on {len(bad)} eigenvalue(s): {bad[:4]}", bad)
    a0, a1, b0 = _ab_values(tr, qp.q)
    a0_op = diagonal_op(space, a0)
    a1_op = diagonal_op(space, a1)
    b_op = diagonal_op(space, b0)
    f = (
        (a0_op, b_op @ tr.j_minus),
        ((-1.0) * (tr.j_plus @ b_op), a1_op),
    )
    f_inv = (
        (a0_op, (-1.0) * (b_op @ tr.j_minus)),
        (tr.j_plus @ b_op, a1_op),
    )
    return MatrixTwist(space, qp, f, f_inv, tr)


def r_matrix_sl2(q) -> np.ndarray:
    """Numerical 4x4 R-matrix in the fundamental ⊗ fundamental.

    Row/column order is uu, ud, du, dd; the only off-diagonal entry is
    R[du, ud] = q - 1/q.
    """
    q = complex(as_param(q).q)
    r = np.zeros((4, 4), dtype=complex)
    r[0, 0] = q
    r[1, 1] = 1.0
    r[2, 2] = 1.0
    r[3, 3] = q
    r[2, 1] = q - 1.0 / q
    return r


def yang_baxter_residual(r: np.ndarray) -> float:
    """Max-entry norm of R12 R13 R23 - R23 R13 R12 on the triple tensor space."""
    r = np.asarray(r, dtype=complex)
    d = int(round(np.sqrt(r.shape[0])))
    if r.shape != (d * d, d * d):
        raise ValueError("R must be a d^2 x d^2 matrix")
    eye = np.eye(d, dtype=complex)
    r4 = r.reshape(d, d, d, d)
    r12 = np.kron(r, eye)
    r23 = np.kron(eye, r)
    r13 = np.einsum("acxz,by->abcxyz", r4, eye).reshape(d**3, d**3)
    lhs = r12 @ r13 @ r23
    rhs = r23 @ r13 @ r12
    return float(np.max(np.abs(lhs - rhs)))


def flip_matrix(d: int) -> np.ndarray:
    """Tensor-factor swap P(e_i ⊗ e_j) = e_j ⊗ e_i on C^d ⊗ C^d."""
    p = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            p[j * d + i, i * d + j] = 1.0
    return p


def hecke_residual(r: np.ndarray, q) -> float:
    """Hecke condition on the braid form PR: (PR - q)(PR + 1/q) = 0.

    The braid matrix has eigenvalues q and -1/q; R itself is unipotent
    on the mixed block, so the condition is a property of PR.
    """
    q = complex(as_param(q).q)
    r = np.asarray(r, dtype=complex)
    d = int(round(np.sqrt(r.shape[0])))
    rb = flip_matrix(d) @ r
    eye = np.eye(d * d, dtype=complex)
    m = (rb - q * eye) @ (rb + eye / q)
    return float(np.max(np.abs(m)))


@dataclass(frozen=True)
class AbelianTwist:
    """Reshetikhin twist exp(h w_ij h_i ⊗ h_j) with diagonal Cartan legs.

    ``weights[l][i]`` is the eigenvalue of h_i on mode l, so
    sigma(h_i) = sum_l weights[l][i] n_l is diagonal.  Antisymmetry of w
    makes gamma and gamma' the identity and F21 = F^-1, hence
    R = (rho ⊗ rho)(F^-2), stored as a dense diagonal matrix.
    """

    space: FockSpace
    weights: tuple
    omega: np.ndarray
    h: float
    cartan_ops: tuple
    gamma: Op
    gamma_prime: Op
    r_matrix: np.ndarray

    def leg_exponent(self, mode: int) -> np.ndarray:
        """Diagonal of sum_ij w_ij rho(h_i)_mode sigma(h_j)."""
        out = np.zeros(self.space.dimension, dtype=float)
        k = len(self.weights[mode])
        for i in range(k):
            for jj in range(k):
                if self.omega[i, jj] == 0.0:
                    continue
                out = out + self.omega[i, jj] * self.weights[mode][i] * np.real(
                    self.cartan_ops[jj].diag())
        return out

    def leg_factor(self, mode: int, power: int = 1) -> Op:
        """Operator leg of (rho ⊗ sigma) F**power on the given mode."""
        return diagonal_op(self.space, np.exp(power * self.h * self.leg_exponent(mode)))

    def rho_rho(self, power: int = 1) -> np.ndarray:
        """(rho ⊗ rho) F**power as an M^2 x M^2 diagonal matrix."""
        m = self.space.mode_count
        out = np.zeros((m * m, m * m), dtype=complex)
        k = self.omega.shape[0]
        for l in range(m):
            for mm in range(m):
                expo = sum(
                    self.omega[i, jj] * self.weights[l][i] * self.weights[mm][jj]
                    for i in range(k)
                    for jj in range(k)
                )
                out[l * m + mm, l * m + mm] = np.exp(power * self.h * expo)
        return out

    def rho_gamma(self, which: str = "gamma", inverse: bool = False) -> np.ndarray:
        """rho of gamma or gamma' as an M x M diagonal (the identity here)."""
        m = self.space.mode_count
        k = self.omega.shape[0]
        sign = -1.0 if inverse else 1.0
        out = np.zeros((m, m), dtype=complex)
        for l in range(m):
            expo = sum(
                self.omega[i, jj] * self.weights[l][i] * self.weights[l][jj]
                for i in range(k)
                for jj in range(k)
            )
            out[l, l] = np.exp(sign * self.h * expo)
        return out


def reshetikhin_twist(space: FockSpace, weights, omega, h: float) -> AbelianTwist:
    """Build the abelian twist together with its derived products.

    gamma = m(S ⊗ id) F^-1 and gamma' = m(id ⊗ S) F are evaluated from
    the expansion; antisymmetry of omega kills the exponent, so both
    come out as the exact identity (asserted by the test suite, not
    assumed here).
    """
    omega = np.asarray(omega, dtype=float)
    k = omega.shape[0]
    if omega.shape != (k, k) or not np.array_equal(omega, -omega.T):
        raise ValueError("omega must be a real antisymmetric square matrix")
    weights = tuple(tuple(float(x) for x in w) for w in weights)
    if len(weights) != space.mode_count or any(len(w) != k for w in weights):
        raise ValueError("need one weight vector of length len(omega) per mode")
    per_mode, _ = number_ops(space)
    cartan = tuple(
        diagonal_op(
            space,
            sum(weights[l][i] * np.real(per_mode[l].diag()) for l in range(space.mode_count)),
        )
        for i in range(k)
    )
    dvals = [np.real(c.diag()) for c in cartan]
    gamma_expo = np.zeros(space.dimension, dtype=float)
    for i in range(k):
        for jj in range(k):
            if omega[i, jj] == 0.0:
                continue
            gamma_expo = gamma_expo + omega[i, jj] * dvals[i] * dvals[jj]
    gamma = diagonal_op(space, np.exp(h * gamma_expo))
    gamma_prime = diagonal_op(space, np.exp(h * gamma_expo))
    tw = AbelianTwist(
        space=space,
        weights=weights,
        omega=omega,
        h=float(h),
        cartan_ops=cartan,
        gamma=gamma,
        gamma_prime=gamma_prime,
        r_matrix=np.empty(0),
    )
    object.__setattr__(tw, "r_matrix", tw.rho_rho(-2))
    return tw


def standard_abelian_twist(space: FockSpace, h: float, omega0: float = 1.0) -> AbelianTwist:
    """Two-mode Cartan pair with weights (1,0), (0,1) and w = [[0, w0], [-w0, 0]]."""
    if space.mode_count != 2:
        raise ValueError("the standard abelian instance uses exactly 2 modes")
    omega = np.array([[0.0, omega0], [-omega0, 0.0]])
    return reshetikhin_twist(space, ((1.0, 0.0), (0.0, 1.0)), omega, h)
