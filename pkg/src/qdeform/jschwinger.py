"""Jordan-Schwinger sl(2) realization, its q-deformation, and the
adjoint-like Hopf actions on mode operators.

The classical generators are sigma(j+) = a+_up a_dn, sigma(j-) =
a+_dn a_up, sigma(j0) = (n_up - n_dn)/2.  The deformed ones are
J0 = sigma(j0) and

    J± = sqrt([j±j0]_q [1+j∓j0]_q / ((j±j0)(1+j∓j0))) sigma(j±),

with the scalar prefactor evaluated on the joint spectrum of j and j0
and placed to the left of sigma(j±) as written.  The label j solves
j(j+1) = Casimir eigenvalue; on a bosonic space it coincides with n/2,
while on a fermionic space the doubly occupied state is an sl(2)
singlet with j = 0, so the Casimir spectrum is the usable definition.
0/0 ratios take their analytic limits, which only ever multiply
annihilated vectors.

Actions are implemented for single generators (plus the group-likes
q^{±J0} appearing in coproduct legs) and extended to words through the
composition law, which is all the low-degree checks need.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fock import FockSpace, Op, annihilator, creator, diagonal_op, identity, number_ops
from .qfunc import ConstructionError, DeformationParam, Regime, as_param, qpow, qratio_safe

__all__ = [
    "GENERATORS",
    "Word",
    "HopfData",
    "Sl2Triple",
    "QuantumSl2Triple",
    "sigma_sl2",
    "phi_h_generators",
    "antipode_data",
    "classical_action",
    "quantum_action",
    "realize",
    "fundamental",
]

GENERATORS = ("J0", "J+", "J-")


@dataclass(frozen=True)
class Word:
    """Scalar multiple of an ordered product of generator symbols."""

    coeff: complex
    symbols: tuple

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.coeff * other.coeff, self.symbols + other.symbols)


ONE = Word(1.0 + 0.0j, ())


@dataclass(frozen=True)
class Sl2Triple:
    """Classical Jordan-Schwinger generators on a two-mode space."""

    space: FockSpace
    j0: Op
    j_plus: Op
    j_minus: Op
    j_half_n: Op
    casimir: Op
    j_values: np.ndarray
    j0_values: np.ndarray


@dataclass(frozen=True)
class QuantumSl2Triple:
    """Images of the deformed sl(2) generators under sigma o phi_h."""

    space: FockSpace
    q: DeformationParam
    J0: Op
    J_plus: Op
    J_minus: Op
    q_j0: Op
    q_j0_inv: Op
    triple: Sl2Triple


def sigma_sl2(space: FockSpace) -> Sl2Triple:
    """Jordan-Schwinger realization; needs exactly two modes."""
    if space.mode_count != 2:
        raise ValueError("the Jordan-Schwinger sl(2) realization needs exactly 2 modes")
    ad_up, ad_dn = creator(space, 0), creator(space, 1)
    a_up, a_dn = annihilator(space, 0), annihilator(space, 1)
    j_plus = ad_up @ a_dn
    j_minus = ad_dn @ a_up
    (n_up, n_dn), n_tot = number_ops(space)
    j0 = 0.5 * (n_up - n_dn)
    casimir = j_minus @ j_plus + j0 @ j0 + j0
    cvals = np.real(casimir.diag())
    j_values = 0.5 * (np.sqrt(np.maximum(1.0 + 4.0 * cvals, 0.0)) - 1.0)
    j0_values = np.real(j0.diag())
    return Sl2Triple(
        space=space,
        j0=j0,
        j_plus=j_plus,
        j_minus=j_minus,
        j_half_n=0.5 * n_tot,
        casimir=casimir,
        j_values=j_values,
        j0_values=j0_values,
    )


def _check_real_nonnegative(values: np.ndarray, what: str, labels) -> None:
    vals = np.asarray(values)
    bad = [(labels[k], complex(v)) for k, v in enumerate(vals)
           if abs(v.imag) < 1e-12 and v.real < -1e-12]
    if bad:
        raise ConstructionError(
            f"{what} has negative radicands on {len(bad)} eigenvalue(s): {bad[:4]}", bad
        )


def phi_h_generators(space: FockSpace, q) -> QuantumSl2Triple:
    """Deformed generators J0, J± built by spectral calculus over (j, j0).

    At a root of unity the radicands can turn negative on large spins;
    that is reported as a :class:`ConstructionError` listing the
    offending eigenvalues rather than silently branching.
    """
    qp = as_param(q)
    tr = sigma_sl2(space)
    j, j0 = tr.j_values, tr.j0_values
    rad_plus = np.asarray(qratio_safe(j + j0, qp.q, "sym")) * np.asarray(
        qratio_safe(1.0 + j - j0, qp.q, "sym"))
    rad_minus = np.asarray(qratio_safe(j - j0, qp.q, "sym")) * np.asarray(
        qratio_safe(1.0 + j + j0, qp.q, "sym"))
    if qp.regime is Regime.ROOT_OF_UNITY:
        labels = list(zip(j, j0))
        _check_real_nonnegative(rad_plus, "phi_h(J+)", labels)
        _check_real_nonnegative(rad_minus, "phi_h(J-)", labels)
    J_plus = diagonal_op(space, np.sqrt(rad_plus)) @ tr.j_plus
    J_minus = diagonal_op(space, np.sqrt(rad_minus)) @ tr.j_minus
    q_j0 = diagonal_op(space, qpow(qp.q, j0))
    q_j0_inv = diagonal_op(space, qpow(qp.q, -j0))
    return QuantumSl2Triple(space, qp, tr.j0, J_plus, J_minus, q_j0, q_j0_inv, tr)


@dataclass(frozen=True)
class HopfData:
    """Coproduct, antipode and counit for the deformed generators.

    The coproduct legs live in the symbol alphabet {1, J0, J±, q^{±J0}}.
    The antipode is the unique solution of the axiom
    m(S ⊗ id)Δ(X) = ε(X) 1, namely S(J0) = -J0 and S(J±) = -q^{∓1} J±;
    the axiom itself is re-verified numerically in the test suite.
    """

    q: complex
    coproduct: dict
    antipode: dict
    counit: dict

    def antipode_word(self, word: Word) -> Word:
        out = Word(word.coeff, ())
        for sym in reversed(word.symbols):
            out = out * self.antipode[sym]
        return out

    def coproduct_word(self, symbols) -> list:
        pairs = [(ONE, ONE)]
        for sym in symbols:
            pairs = [
                (l1 * l2, r1 * r2)
                for (l1, r1) in pairs
                for (l2, r2) in self.coproduct[sym]
            ]
        return pairs

    def counit_word(self, symbols) -> complex:
        val = 1.0 + 0.0j
        for sym in symbols:
            val *= self.counit[sym]
        return val


def antipode_data(q) -> HopfData:
    qp = as_param(q)
    q = qp.q
    j0 = Word(1.0, ("J0",))
    jp = Word(1.0, ("J+",))
    jm = Word(1.0, ("J-",))
    qj = Word(1.0, ("q^J0",))
    qji = Word(1.0, ("q^-J0",))
    coproduct = {
        "1": ((ONE, ONE),),
        "J0": ((ONE, j0), (j0, ONE)),
        "J+": ((jp, qji), (qj, jp)),
        "J-": ((jm, qji), (qj, jm)),
        "q^J0": ((qj, qj),),
        "q^-J0": ((qji, qji),),
    }
    antipode = {
        "1": ONE,
        "J0": Word(-1.0, ("J0",)),
        "J+": Word(-1.0 / q, ("J+",)),
        "J-": Word(-q, ("J-",)),
        "q^J0": Word(1.0, ("q^-J0",)),
        "q^-J0": Word(1.0, ("q^J0",)),
    }
    counit = {"1": 1.0, "J0": 0.0, "J+": 0.0, "J-": 0.0, "q^J0": 1.0, "q^-J0": 1.0}
    return HopfData(q, coproduct, antipode, counit)


def realize(qtriple: QuantumSl2Triple, word: Word) -> Op:
    """Operator image of a word through sigma o phi_h."""
    table = {
        "1": None,
        "J0": qtriple.J0,
        "J+": qtriple.J_plus,
        "J-": qtriple.J_minus,
        "q^J0": qtriple.q_j0,
        "q^-J0": qtriple.q_j0_inv,
    }
    acc = identity(qtriple.space)
    for sym in word.symbols:
        op = table[sym]
        if op is not None:
            acc = acc @ op
    return word.coeff * acc


def fundamental(q, word: Word) -> np.ndarray:
    """Spin-1/2 matrix of a word (the fundamental representation is undeformed)."""
    q = complex(as_param(q).q)
    sq = np.sqrt(q)
    table = {
        "1": np.eye(2, dtype=complex),
        "J0": np.diag([0.5, -0.5]).astype(complex),
        "J+": np.array([[0, 1], [0, 0]], dtype=complex),
        "J-": np.array([[0, 0], [1, 0]], dtype=complex),
        "q^J0": np.diag([sq, 1.0 / sq]),
        "q^-J0": np.diag([1.0 / sq, sq]),
    }
    acc = np.eye(2, dtype=complex)
    for sym in word.symbols:
        acc = acc @ table[sym]
    return word.coeff * acc


def _as_word(x) -> Word:
    if isinstance(x, Word):
        return x
    if isinstance(x, str):
        return Word(1.0, (x,))
    return Word(1.0, tuple(x))


def quantum_action(x, target: Op, qtriple: QuantumSl2Triple, hopf: HopfData) -> Op:
    """Adjoint-like left action: sum over the coproduct of
    sigma_phi(x_(1)) target sigma_phi(S x_(2))."""
    word = _as_word(x)
    for sym in word.symbols:
        if sym not in hopf.coproduct:
            raise KeyError(f"no Hopf data for generator {sym!r}")
    out = None
    for left, right in hopf.coproduct_word(word.symbols):
        term = realize(qtriple, left) @ target @ realize(qtriple, hopf.antipode_word(right))
        out = term if out is None else out + term
    return word.coeff * out


def classical_action(x, target: Op, triple: Sl2Triple) -> Op:
    """Left action of classical generator words, x > a = [sigma(x), a]
    for primitive x, nested right-to-left over the word."""
    word = _as_word(x)
    table = {"j0": triple.j0, "j+": triple.j_plus, "j-": triple.j_minus}
    acc = target
    for sym in reversed(word.symbols):
        key = sym.lower()
        if key not in table:
            raise KeyError(f"unknown classical generator {sym!r}")
        s = table[key]
        acc = s @ acc - acc @ s
    return word.coeff * acc
