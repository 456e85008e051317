"""Deforming maps between classical and q-deformed mode algebras.

Closed forms, the twist-built construction, the abelian instance, the
map of the algebraic (non-star) family, the inner automorphism alpha
connecting them, the inverse map with its singularity scan, and the
root-of-unity variant.  Every formula keeps its factors in the order
the closed forms are written, so matrix elements can be audited factor
by factor; square roots are principal-branch throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .fock import (
    FockSpace,
    InteriorProjector,
    Op,
    Statistics,
    annihilator,
    creator,
    diagonal_op,
    identity,
    interior,
)
from .qfunc import (
    ConstructionError,
    DeformationParam,
    Regime,
    as_param,
    q_gamma,
    qnum_ladder,
    qpow,
    qratio_safe,
)
from .twist import AbelianTwist, MatrixTwist, f_matrix_sl2, r_matrix_sl2

__all__ = [
    "Sign",
    "Provenance",
    "STAR_COMPATIBLE",
    "DeformedQuartet",
    "AlphaElement",
    "InverseMapResult",
    "SingularLogArgument",
    "map_1d",
    "map_sl2_weyl",
    "map_sl2_clifford",
    "map_universal_sl2",
    "map_abelian",
    "abelian_forms",
    "alpha_element",
    "conjugate_quartet",
    "map_chaichian",
    "inverse_map_sl2",
    "root_unity_quartet",
    "weyl_qcr_residual",
]


class Sign(Enum):
    """Weyl (+) / Clifford (-) toggle threaded through the relation checks."""

    WEYL = 1
    CLIFFORD = -1


class Provenance(Enum):
    CLOSED_FORM_WEYL = "closed-form-weyl"
    CLOSED_FORM_CLIFFORD = "closed-form-clifford"
    TWIST_BUILT = "twist-built"
    CHAICHIAN = "chaichian"
    ALPHA_CONJUGATED = "alpha-conjugated"
    ONE_DIM = "one-dim"
    ABELIAN_TWIST = "abelian-twist"


# Provenances whose construction preserves (A^i)^dag = A+_i for real positive q.
STAR_COMPATIBLE = frozenset(
    {
        Provenance.CLOSED_FORM_WEYL,
        Provenance.CLOSED_FORM_CLIFFORD,
        Provenance.TWIST_BUILT,
        Provenance.ONE_DIM,
    }
)


@dataclass(frozen=True, eq=False)
class DeformedQuartet:
    """Deformed annihilators/creators paired with their space and regime."""

    space: FockSpace
    q: DeformationParam
    annihilators: tuple
    creators: tuple
    provenance: Provenance
    sign: Sign

    @property
    def A_up(self) -> Op:
        return self.annihilators[0]

    @property
    def A_dn(self) -> Op:
        return self.annihilators[1]

    @property
    def Ap_up(self) -> Op:
        return self.creators[0]

    @property
    def Ap_dn(self) -> Op:
        return self.creators[1]

    def number_op(self) -> Op:
        out = None
        for c, a in zip(self.creators, self.annihilators):
            term = c @ a
            out = term if out is None else out + term
        return out


def _ladder_sqrt(space: FockSpace, qp: DeformationParam, what: str) -> np.ndarray:
    """sqrt((m)_{q^2}) for m = 0 .. cutoff, principal branch.

    The q-numbers come from the telescoping recurrence so consecutive
    values satisfy (m+1) = 1 + q^2 (m) to roundoff, which keeps the
    quadratic-relation residuals at the few-ulp level even when the
    values reach 1e4.  At a root of unity a real negative value would
    make the branch ambiguous; it is reported instead of silently
    chosen (vanishing values are fine and expected there).
    """
    vals = qnum_ladder(space.cutoff, qp.q * qp.q)
    if qp.regime is Regime.ROOT_OF_UNITY:
        # (m)_{q^2} vanishes exactly iff p divides m; snap those to zero
        # so the square root does not amplify the roundoff remainder.
        vals[np.arange(space.cutoff + 1) % qp.root_order == 0] = 0.0
        bad = [(m, complex(v)) for m, v in enumerate(vals)
               if abs(v.imag) < 1e-12 and v.real < -1e-12]
        if bad:
            raise ConstructionError(f"{what} has negative radicands: {bad[:4]}", bad)
    return np.sqrt(vals)


def map_1d(space: FockSpace, q):
    """One-mode prototype pair A = a f(n), A+ = f(n) a+ with f = sqrt((n)_{q^2}/n).

    Matrix elements: <m+1| A+ |m> = <m| A |m+1> = sqrt((m+1)_{q^2}),
    assembled in fused form so the square root is taken once per
    element.  The 0/0 value of f at n = 0 multiplies the annihilated
    vacuum column and never enters any element.
    """
    if space.mode_count != 1 or space.statistics is not Statistics.BOSE:
        raise ValueError("the one-dimensional prototype map needs a single bosonic mode")
    qp = as_param(q)
    amp = _ladder_sqrt(space, qp, "map_1d")
    d = space.dimension
    ap = np.zeros((d, d), dtype=complex)
    for col, (m,) in enumerate(space.basis):
        if m + 1 <= space.cutoff:
            ap[space.index((m + 1,)), col] = amp[m + 1]
    # A has the same elements transposed (not conjugated: same f for both)
    return Op(space, ap.T.copy()), Op(space, ap)


def map_sl2_weyl(space: FockSpace, q) -> DeformedQuartet:
    """Closed-form two-mode bosonic map:

        A+_up = sqrt((n_up)_{q^2}/n_up) q^{n_dn} a+_up
        A+_dn = sqrt((n_dn)_{q^2}/n_dn) a+_dn
        A_up  = a_up sqrt((n_up)_{q^2}/n_up) q^{n_dn}
        A_dn  = a_dn sqrt((n_dn)_{q^2}/n_dn)

    Matrix elements are assembled in fused form,
    <m1+1, m2| A+_up |m1, m2> = sqrt((m1+1)_{q^2}) q^{m2} and
    <m2+1 analog for down>, with annihilators the exact (unconjugated)
    transposes, so adjointness at real q is bitwise and the q-ladder
    telescoping survives at roundoff level.
    """
    if space.mode_count != 2 or space.statistics is not Statistics.BOSE:
        raise ValueError("map_sl2_weyl needs a two-mode bosonic space")
    qp = as_param(q)
    amp = _ladder_sqrt(space, qp, "map_sl2_weyl")
    qdn = qpow(qp.q, np.arange(space.cutoff + 1))
    d = space.dimension
    ap_up = np.zeros((d, d), dtype=complex)
    ap_dn = np.zeros((d, d), dtype=complex)
    for col, (m1, m2) in enumerate(space.basis):
        if m1 + m2 + 1 > space.cutoff:
            continue
        ap_up[space.index((m1 + 1, m2)), col] = amp[m1 + 1] * qdn[m2]
        ap_dn[space.index((m1, m2 + 1)), col] = amp[m2 + 1]
    return DeformedQuartet(
        space=space,
        q=qp,
        annihilators=(Op(space, ap_up.T.copy()), Op(space, ap_dn.T.copy())),
        creators=(Op(space, ap_up), Op(space, ap_dn)),
        provenance=Provenance.CLOSED_FORM_WEYL,
        sign=Sign.WEYL,
    )


def map_sl2_clifford(space: FockSpace, q) -> DeformedQuartet:
    """Closed-form two-mode fermionic map:

        A+_up = q^{-n_dn} a+_up     A+_dn = a+_dn
        A_up  = a_up q^{-n_dn}      A_dn  = a_dn
    """
    if space.mode_count != 2 or space.statistics is not Statistics.FERMI:
        raise ValueError("map_sl2_clifford needs a two-mode fermionic space")
    qp = as_param(q)
    q_dn_inv = diagonal_op(space, qpow(qp.q, -space.occupations(1)))
    ad_up, ad_dn = creator(space, 0), creator(space, 1)
    a_up, a_dn = annihilator(space, 0), annihilator(space, 1)
    return DeformedQuartet(
        space=space,
        q=qp,
        annihilators=(a_up @ q_dn_inv, a_dn),
        creators=(q_dn_inv @ ad_up, ad_dn),
        provenance=Provenance.CLOSED_FORM_CLIFFORD,
        sign=Sign.CLIFFORD,
    )


def _sign_for(space: FockSpace, sign) -> Sign:
    expected = Sign.WEYL if space.statistics is Statistics.BOSE else Sign.CLIFFORD
    if sign is None:
        return expected
    sign = Sign(sign)
    if sign is not expected:
        raise ValueError(f"{sign} does not match {space.statistics} statistics")
    return sign


def map_universal_sl2(space: FockSpace, q, sign=None, matrix_twist: MatrixTwist | None = None) -> DeformedQuartet:
    """Twist-built quartet, contracting the matrix twist with the mode operators:

        A+_i = sum_l a+_l [F^-1]^l_i f(n)
        A^i  = f(n) sum_l [F]^i_l a^l

    with f(x) = sqrt((x+1)_{q^{±2}}/(x+1)) split evenly between the two
    lines (the star-compatible choice); the exponent sign follows the
    Weyl/Clifford toggle.
    """
    sign = _sign_for(space, sign)
    qp = as_param(q)
    mt = matrix_twist if matrix_twist is not None else f_matrix_sl2(space, qp)
    if mt.space != space:
        raise ValueError("matrix twist was built on a different space")
    qexp = qp.q ** (2 * sign.value)
    f_diag = diagonal_op(space, np.sqrt(np.asarray(qratio_safe(space.totals + 1, qexp, "std"))))
    ads = (creator(space, 0), creator(space, 1))
    ans = (annihilator(space, 0), annihilator(space, 1))
    creators = tuple(
        ads[0] @ mt.f_inv[0][i] @ f_diag + ads[1] @ mt.f_inv[1][i] @ f_diag for i in range(2)
    )
    annihilators = tuple(
        f_diag @ (mt.f[i][0] @ ans[0] + mt.f[i][1] @ ans[1]) for i in range(2)
    )
    return DeformedQuartet(space, qp, annihilators, creators, Provenance.TWIST_BUILT, sign)


def abelian_forms(space: FockSpace, tw: AbelianTwist):
    """The four equivalent expressions for the abelian quartet.

    Creators:  (1) a+_i [(rho⊗sigma)F^-1]^i_i
               (2) rho(S F γ'^-1)-leg placed left of a+_i
    Annihilators: (3) [(rho⊗sigma)F]^i_i a^i
                  (4) a^i [(rho⊗sigma-with-S-first-leg)F^-1]^i_i rho(γ^-1)
    All legs are diagonal, and gamma, gamma' are the identity.
    """
    if tw.space != space:
        raise ValueError("abelian twist was built on a different space")
    m = space.mode_count
    ads = tuple(creator(space, i) for i in range(m))
    ans = tuple(annihilator(space, i) for i in range(m))
    rho_gp_inv = tw.rho_gamma("gamma_prime", inverse=True)
    rho_g_inv = tw.rho_gamma("gamma", inverse=True)
    form1 = tuple(ads[i] @ tw.leg_factor(i, -1) for i in range(m))
    form2 = tuple(complex(rho_gp_inv[i, i]) * (tw.leg_factor(i, -1) @ ads[i]) for i in range(m))
    form3 = tuple(tw.leg_factor(i, +1) @ ans[i] for i in range(m))
    form4 = tuple(complex(rho_g_inv[i, i]) * (ans[i] @ tw.leg_factor(i, +1)) for i in range(m))
    return form1, form2, form3, form4


def map_abelian(space: FockSpace, tw: AbelianTwist, sign=None, agreement_tol: float = 1e-11) -> DeformedQuartet:
    """Quartet from the abelian twist; all four defining forms must agree.

    A disagreement beyond ``agreement_tol`` signals a convention bug in
    the caller-supplied twist data and is raised, not reported.
    """
    sign = _sign_for(space, sign)
    form1, form2, form3, form4 = abelian_forms(space, tw)
    worst = 0.0
    for i in range(space.mode_count):
        worst = max(worst, (form1[i] - form2[i]).norm(), (form3[i] - form4[i]).norm())
    if worst > agreement_tol:
        raise ConstructionError(f"abelian quartet forms disagree by {worst:.3e}")
    return DeformedQuartet(
        space=space,
        q=as_param(np.exp(tw.h)),
        annihilators=form3,
        creators=form1,
        provenance=Provenance.ABELIAN_TWIST,
        sign=sign,
    )


@dataclass(frozen=True)
class AlphaElement:
    """Diagonal inner automorphism alpha = 1 + O(h) with exact inverse."""

    alpha: Op
    alpha_inv: Op


def alpha_element(space: FockSpace, q) -> AlphaElement:
    """alpha = sqrt(n_up! n_dn! / (Gamma_{q^2}(n_up+1) Gamma_{q^2}(n_dn+1))).

    Positive radicands need real positive q; other regimes are rejected.
    """
    if space.mode_count != 2 or space.statistics is not Statistics.BOSE:
        raise ValueError("alpha_element needs a two-mode bosonic space")
    qp = as_param(q)
    if not qp.is_real_positive:
        raise ConstructionError("alpha is only defined for real positive q")
    q2 = qp.q**2
    vals = np.empty(space.dimension, dtype=complex)
    for k, (m1, m2) in enumerate(space.basis):
        rad = (math.factorial(m1) * math.factorial(m2)) / (
            q_gamma(m1 + 1, q2) * q_gamma(m2 + 1, q2)
        )
        if rad.real <= 0:
            raise ConstructionError(f"nonpositive radicand in alpha at {(m1, m2)}")
        vals[k] = np.sqrt(rad)
    return AlphaElement(diagonal_op(space, vals), diagonal_op(space, 1.0 / vals))


def conjugate_quartet(quartet: DeformedQuartet, alpha: AlphaElement) -> DeformedQuartet:
    """Inner automorphism X -> alpha X alpha^-1 applied to every member."""
    conj = lambda x: alpha.alpha @ x @ alpha.alpha_inv
    return DeformedQuartet(
        space=quartet.space,
        q=quartet.q,
        annihilators=tuple(conj(x) for x in quartet.annihilators),
        creators=tuple(conj(x) for x in quartet.creators),
        provenance=Provenance.ALPHA_CONJUGATED,
        sign=quartet.sign,
    )


def map_chaichian(space: FockSpace, q) -> DeformedQuartet:
    """The algebraic (non-star) two-mode bosonic map:

        A+_up = q^{n_dn} a+_up          A+_dn = a+_dn
        A_up  = a_up ((n_up)_{q^2}/n_up) q^{n_dn}
        A_dn  = a_dn ((n_dn)_{q^2}/n_dn)

    It satisfies the same quadratic relations but not (A^i)^dag = A+_i;
    conjugation by :func:`alpha_element` carries the closed-form map
    onto it.
    """
    if space.mode_count != 2 or space.statistics is not Statistics.BOSE:
        raise ValueError("map_chaichian needs a two-mode bosonic space")
    qp = as_param(q)
    vals = qnum_ladder(space.cutoff, qp.q * qp.q)
    qdn = qpow(qp.q, np.arange(space.cutoff + 1))
    d = space.dimension
    ap_up = np.zeros((d, d), dtype=complex)
    a_up = np.zeros((d, d), dtype=complex)
    a_dn = np.zeros((d, d), dtype=complex)
    for col, (m1, m2) in enumerate(space.basis):
        if m1 + m2 + 1 <= space.cutoff:
            ap_up[space.index((m1 + 1, m2)), col] = qdn[m2] * np.sqrt(m1 + 1.0)
        if m1 >= 1:
            a_up[space.index((m1 - 1, m2)), col] = vals[m1] / np.sqrt(float(m1)) * qdn[m2]
        if m2 >= 1:
            a_dn[space.index((m1, m2 - 1)), col] = vals[m2] / np.sqrt(float(m2))
    return DeformedQuartet(
        space=space,
        q=qp,
        annihilators=(Op(space, a_up), Op(space, a_dn)),
        creators=(Op(space, ap_up), creator(space, 1)),
        provenance=Provenance.CHAICHIAN,
        sign=Sign.WEYL,
    )


def root_unity_quartet(space: FockSpace, p: int) -> DeformedQuartet:
    """Closed-form bosonic quartet at q = exp(i pi / p).

    Radicands (m)_{q^2}/m vanish on multiples of p (expected; that is
    the whole point) and are never real negative, so the principal
    square root is unambiguous.  Star checks do not apply at complex q.
    """
    from .qfunc import root_of_unity

    p = int(p)
    if p < 2:
        raise ValueError("root order must be at least 2")
    if space.cutoff < 3 * p:
        raise ValueError(f"cutoff {space.cutoff} too small; need at least 3p = {3 * p}")
    return map_sl2_weyl(space, root_of_unity(p))


def weyl_qcr_residual(annihilators, creators, q, proj: InteriorProjector) -> float:
    """Worst interior residual of the deformed two-mode Weyl relations.

    Used as the precondition gate of the inverse map; the relations are
    the explicit q-quadratic ones the closed forms satisfy.
    """
    a_up, a_dn = annihilators
    ap_up, ap_dn = creators
    q = complex(as_param(q).q)
    space = a_up.space
    one = identity(space)
    rels = (
        a_up @ ap_up - one - (q**2) * (ap_up @ a_up) - (q**2 - 1.0) * (ap_dn @ a_dn),
        a_dn @ ap_dn - one - (q**2) * (ap_dn @ a_dn),
        a_up @ ap_dn - q * (ap_dn @ a_up),
        a_dn @ ap_up - q * (ap_up @ a_dn),
        a_dn @ a_up - q * (a_up @ a_dn),
        ap_up @ ap_dn - q * (ap_dn @ ap_up),
    )
    return max(proj.norm(r) for r in rels)


@dataclass(frozen=True)
class SingularLogArgument:
    """One basis vector on which an inverse-map logarithm is ill-defined."""

    index: int
    label: tuple
    arg_dn: float
    arg_ratio: float


@dataclass(frozen=True)
class InverseMapResult:
    """Either the recovered classical quartet or the singularity report."""

    annihilators: tuple | None
    creators: tuple | None
    singular: tuple
    nu_up: np.ndarray
    nu_dn: np.ndarray
    qcr_residual: float

    @property
    def succeeded(self) -> bool:
        return self.annihilators is not None


def _diag_spectrum(op: Op, name: str) -> np.ndarray:
    m = op.matrix
    off = m - np.diag(np.diag(m))
    if off.size and float(np.max(np.abs(off))) > 1e-10:
        raise ValueError(f"{name} is not diagonal in the supplied basis")
    return np.real(np.diag(m))


def inverse_map_sl2(quartet, q=None, proj: InteriorProjector | None = None,
                    precondition_tol: float = 1e-8) -> InverseMapResult:
    """Inverse of the two-mode Weyl deforming map by spectral calculus.

    ``quartet`` is a :class:`DeformedQuartet` or a 4-tuple
    (A_up, A_dn, A+_up, A+_dn) of operators satisfying the deformed Weyl
    relations (checked first).  With N_dn = A+_dn A_dn, N_up = A+_up A_up
    and N their sum, all simultaneously diagonal, the recovered pair is

        a+_dn = sqrt( log[1 + (q^2-1) N_dn] / (2 N_dn log q) ) A+_dn
        a+_up = sqrt( log[ (1 + (q^2-1) N) / (1 + (q^2-1) N_dn) ]
                      / (2 N_up log q) ) A+_up

    (annihilators mirrored with the factor on the right).  Before any
    logarithm is evaluated the spectra of its arguments are scanned;
    nonpositive values are returned as a report, not raised, because
    they are the expected outcome on the representations that have no
    classical counterpart.  The 0/0 at a vanishing N-eigenvalue takes
    its analytic limit (q^2-1)/(2 log q), appropriately rescaled for the
    up component.
    """
    if isinstance(quartet, DeformedQuartet):
        a_up, a_dn = quartet.annihilators
        ap_up, ap_dn = quartet.creators
        q = quartet.q if q is None else q
    else:
        a_up, a_dn, ap_up, ap_dn = quartet
    if q is None:
        raise ValueError("a deformation parameter is required")
    qp = as_param(q)
    if not qp.is_real_positive or qp.regime is Regime.CLASSICAL:
        raise ConstructionError("the inverse map needs real positive q != 1")
    space = a_up.space
    if proj is None:
        if not isinstance(space, FockSpace):
            raise ValueError("an interior projector is required for non-Fock spaces")
        proj = interior(space, 2)
    residual = weyl_qcr_residual((a_up, a_dn), (ap_up, ap_dn), qp, proj)
    if residual > precondition_tol:
        raise ValueError(
            f"input operators violate the deformed Weyl relations (residual {residual:.3e})")

    nu_up = _diag_spectrum(ap_up @ a_up, "N_up")
    nu_dn = _diag_spectrum(ap_dn @ a_dn, "N_dn")
    q2 = qp.q.real**2
    lnq = float(np.log(qp.q.real))
    arg_dn = 1.0 + (q2 - 1.0) * nu_dn
    arg_tot = 1.0 + (q2 - 1.0) * (nu_up + nu_dn)
    labels = getattr(space, "basis", None)
    if labels is None:
        labels = space.labels
    singular = tuple(
        SingularLogArgument(k, tuple(labels[k]), float(arg_dn[k]), float(arg_tot[k] / arg_dn[k])
                            if arg_dn[k] > 1e-12 else float("nan"))
        for k in range(len(arg_dn))
        if arg_dn[k] <= 1e-12 or arg_tot[k] / arg_dn[k] <= 1e-12
    )
    if singular:
        return InverseMapResult(None, None, singular, nu_up, nu_dn, residual)

    small_dn = nu_dn <= 1e-12
    safe_dn = np.where(small_dn, 1.0, nu_dn)
    fac_dn_sq = np.where(
        small_dn,
        (q2 - 1.0) / (2.0 * lnq),
        np.log(arg_dn) / (2.0 * safe_dn * lnq),
    )
    small_up = nu_up <= 1e-12
    safe_up = np.where(small_up, 1.0, nu_up)
    fac_up_sq = np.where(
        small_up,
        (q2 - 1.0) / (2.0 * lnq * arg_dn),
        np.log(arg_tot / arg_dn) / (2.0 * safe_up * lnq),
    )
    f_dn = diagonal_op(space, np.sqrt(fac_dn_sq.astype(complex)))
    f_up = diagonal_op(space, np.sqrt(fac_up_sq.astype(complex)))
    return InverseMapResult(
        annihilators=(a_up @ f_up, a_dn @ f_dn),
        creators=(f_up @ ap_up, f_dn @ ap_dn),
        singular=(),
        nu_up=nu_up,
        nu_dn=nu_dn,
        qcr_residual=residual,
    )
