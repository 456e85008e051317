"""Inequivalent *-representations of the deformed two-mode Weyl algebra
and the root-of-unity block structure of the Fock representation.

The Pusz-Woronowicz family is parametrized by (E, r, s) with 0 < q < 1
and q^2 < E < 1; on the eigenbasis |eta, eta_dn> the ladder amplitudes
are

    A_up  |eta, eta_dn> = sqrt(eta - eta_dn)          |q^-2 eta, eta_dn>
    A_dn  |eta, eta_dn> = sqrt(eta_dn - 1/(q^2-1))    |q^-2 eta, q^-2 eta_dn>
    A+_up |eta, eta_dn> = sqrt(q^2 eta - eta_dn)      |q^2 eta, eta_dn>
    A+_dn |eta, eta_dn> = sqrt(q^2 eta_dn - 1/(q^2-1))|q^2 eta, q^2 eta_dn>

with every amplitude taken nonnegative real (the free phase is fixed
that way).  The eta shifts are integer shifts of the class labels;
shifts leaving the bounded label window hit a hard wall exactly as in
the truncated Fock space, and an interior mask marks the labels whose
short operator words never touch that wall.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import cached_property

import numpy as np

from .deform import DeformedQuartet, Sign, inverse_map_sl2, map_sl2_weyl
from .fock import (
    FockSpace,
    InteriorProjector,
    Op,
    Statistics,
    annihilator,
    creator,
    identity,
    interior,
    make_space,
    zero,
)
from .verify import SuiteReport, relation

__all__ = [
    "PWClass",
    "LabelSpace",
    "PWRepresentation",
    "SingularityScan",
    "Block",
    "BlockDecomposition",
    "pw_build",
    "pw_quartet",
    "singularity_scan",
    "intertwine_class1",
    "root_unity_blocks",
]


class PWClass(Enum):
    """The five label classes; (r, s) count eta-type and bounded-type axes."""

    C1 = (0, 2)
    C2 = (1, 1)
    C3 = (0, 1)
    C4 = (2, 0)
    C5 = (1, 0)

    @property
    def r(self) -> int:
        return self.value[0]

    @property
    def s(self) -> int:
        return self.value[1]

    @property
    def needs_e(self) -> bool:
        return self.r > 0


@dataclass(frozen=True)
class LabelSpace:
    """Finite window of integer labels standing in for a FockSpace."""

    kind: str
    labels: tuple

    @property
    def dimension(self) -> int:
        return len(self.labels)

    @cached_property
    def _lookup(self) -> dict:
        return {lab: k for k, lab in enumerate(self.labels)}

    def index(self, label) -> int:
        return self._lookup[tuple(label)]

    def __contains__(self, label) -> bool:
        return tuple(label) in self._lookup


_AMP_TOL = 1e-14

# Label deltas per operator: the eta coordinate shifts under up-type
# ladder moves, the eta_dn move shifts both coordinates.
_DELTAS = {"a_up": (-1, 0), "a_dn": (-1, -1), "ap_up": (1, 0), "ap_dn": (1, 1)}


def _class_tables(pw_class: PWClass, q: float, E, bound: int):
    """Label window and (eta, eta_dn) maps for one class."""
    q2 = q * q
    c = 1.0 / (q2 - 1.0)
    if pw_class is PWClass.C1:
        labels = [(m1, m2) for m1 in range(bound + 1) for m2 in range(m1 + 1)]
        eta = lambda lab: q2 ** lab[0] * c
        eta_dn = lambda lab: q2 ** lab[1] * c
        deltas = _DELTAS
    elif pw_class is PWClass.C2:
        labels = [(n1, m1) for n1 in range(-bound, bound + 1) for m1 in range(bound + 1)]
        eta = lambda lab: q2 ** lab[0] * E
        eta_dn = lambda lab: q2 ** lab[1] * c
        deltas = _DELTAS
    elif pw_class is PWClass.C3:
        labels = [(m1,) for m1 in range(bound + 1)]
        eta = lambda lab: 0.0
        eta_dn = lambda lab: q2 ** lab[0] * c
        deltas = {"a_up": (0,), "a_dn": (-1,), "ap_up": (0,), "ap_dn": (1,)}
    elif pw_class is PWClass.C4:
        labels = [(n1, n2) for n1 in range(-bound, bound + 1)
                  for n2 in range(n1 + 1, bound + 1)]
        eta = lambda lab: q2 ** lab[0] * E
        eta_dn = lambda lab: q2 ** lab[1] * E
        deltas = _DELTAS
    else:  # C5
        labels = [(n1,) for n1 in range(-bound, bound + 1)]
        eta = lambda lab: q2 ** lab[0] * E
        eta_dn = lambda lab: 0.0
        deltas = {"a_up": (-1,), "a_dn": (-1,), "ap_up": (1,), "ap_dn": (1,)}
    labels.sort(key=lambda t: (sum(t), tuple(-x for x in t)))
    return tuple(labels), eta, eta_dn, deltas


def _radicand(opname: str, eta: float, eta_dn: float, q2: float) -> float:
    c = 1.0 / (q2 - 1.0)
    if opname == "a_up":
        return eta - eta_dn
    if opname == "a_dn":
        return eta_dn - c
    if opname == "ap_up":
        return q2 * eta - eta_dn
    return q2 * eta_dn - c


@dataclass(frozen=True)
class PWRepresentation:
    """Finite window of one Pusz-Woronowicz representation."""

    q: float
    pw_class: PWClass
    E: float | None
    space: LabelSpace
    eta: np.ndarray
    eta_dn: np.ndarray
    annihilators: tuple
    creators: tuple
    interior_mask: np.ndarray
    sign: Sign = Sign.WEYL

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

    def interior(self) -> InteriorProjector:
        return InteriorProjector(self.space, 2, self.interior_mask)


def pw_build(q: float, pw_class: PWClass, E: float | None = None, bound: int = 8,
             margin: int = 2) -> PWRepresentation:
    """Build one representation window.

    Requires 0 < q < 1; classes with an eta-type axis need q^2 < E < 1,
    the others must not be given an E (the parameter is irrelevant
    there and a supplied value would suggest a sweep that cannot
    matter).  The class constraints make every radicand nonnegative; a
    negative one beyond roundoff means the parametrization is broken
    and is raised.
    """
    q = float(q)
    if not 0.0 < q < 1.0:
        raise ValueError("the representation family is parametrized for 0 < q < 1")
    pw_class = PWClass(pw_class)
    if pw_class.needs_e:
        if E is None:
            raise ValueError(f"{pw_class.name} needs the parameter E with q^2 < E < 1")
        E = float(E)
        if not q * q < E < 1.0:
            raise ValueError(f"E = {E} violates q^2 < E < 1")
    elif E is not None:
        raise ValueError(f"{pw_class.name} takes no E parameter")
    if bound < 1:
        raise ValueError("bound must be at least 1")
    labels, eta_fn, eta_dn_fn, deltas = _class_tables(pw_class, q, E, bound)
    space = LabelSpace(f"pw-{pw_class.name.lower()}", labels)
    d = space.dimension
    q2 = q * q
    eta = np.array([eta_fn(lab) for lab in labels])
    eta_dn = np.array([eta_dn_fn(lab) for lab in labels])
    mats = {}
    for opname, delta in deltas.items():
        m = np.zeros((d, d), dtype=complex)
        for col, lab in enumerate(labels):
            rad = _radicand(opname, eta[col], eta_dn[col], q2)
            if rad < -1e-12:
                raise ValueError(
                    f"negative radicand {rad:.3e} for {opname} at label {lab}; "
                    "the class parametrization is inconsistent")
            amp = np.sqrt(max(rad, 0.0))
            if amp <= _AMP_TOL:
                continue
            target = tuple(x + dx for x, dx in zip(lab, delta))
            if target in space:
                m[space.index(target), col] = amp
        mats[opname] = Op(space, m)
    mask = _interior_mask(space, labels, eta, eta_dn, deltas, q2, margin)
    return PWRepresentation(
        q=q,
        pw_class=pw_class,
        E=E,
        space=space,
        eta=eta,
        eta_dn=eta_dn,
        annihilators=(mats["a_up"], mats["a_dn"]),
        creators=(mats["ap_up"], mats["ap_dn"]),
        interior_mask=mask,
    )


def _interior_mask(space, labels, eta, eta_dn, deltas, q2, margin):
    """Labels whose operator words of length <= margin never leave the window.

    A move with exactly zero amplitude dies inside the algebra, so it
    does not disqualify its source.
    """
    mask = np.ones(space.dimension, dtype=bool)
    for start in range(space.dimension):
        frontier = {labels[start]}
        ok = True
        for _ in range(margin):
            nxt = set()
            for lab in frontier:
                k = space.index(lab)
                for opname, delta in deltas.items():
                    rad = _radicand(opname, eta[k], eta_dn[k], q2)
                    if np.sqrt(max(rad, 0.0)) <= _AMP_TOL:
                        continue
                    target = tuple(x + dx for x, dx in zip(lab, delta))
                    if target in space:
                        nxt.add(target)
                    else:
                        ok = False
            if not ok:
                break
            frontier = nxt
        mask[start] = ok
    return mask


def pw_quartet(rep: PWRepresentation) -> tuple:
    """(A_up, A_dn, A+_up, A+_dn) in the order the checkers expect."""
    return (rep.A_up, rep.A_dn, rep.Ap_up, rep.Ap_dn)


@dataclass(frozen=True)
class SingularityScan:
    """Signs of the inverse-map logarithm arguments over one window.

    ``arg_dn`` holds (q^2-1) eta_dn and ``arg_eta`` holds (q^2-1) eta,
    the spectra of the two logarithm arguments.  The classification is
    computed, never presumed: all-positive means the inverse map is
    well-defined, zero-argument or negative-argument means it is not.
    """

    pw_class: PWClass
    arg_dn: np.ndarray
    arg_eta: np.ndarray
    classification: str
    negative_labels: tuple
    zero_labels: tuple

    @property
    def invertible(self) -> bool:
        return self.classification == "all-positive"


def singularity_scan(rep: PWRepresentation, tol: float = 1e-12) -> SingularityScan:
    q2 = rep.q * rep.q
    arg_dn = (q2 - 1.0) * rep.eta_dn
    arg_eta = (q2 - 1.0) * rep.eta
    neg, zero = [], []
    for k, lab in enumerate(rep.space.labels):
        vals = (arg_dn[k], arg_eta[k])
        if any(v < -tol for v in vals):
            neg.append(lab)
        elif any(abs(v) <= tol for v in vals):
            zero.append(lab)
    if neg:
        classification = "negative-argument"
    elif zero:
        classification = "zero-argument"
    else:
        classification = "all-positive"
    return SingularityScan(rep.pw_class, arg_dn, arg_eta, classification,
                           tuple(neg), tuple(zero))


def intertwine_class1(rep: PWRepresentation, ccr_tol: float = 1e-9,
                      match_tol: float = 1e-9) -> SuiteReport:
    """Transport a class-1 window onto a Fock space and undo the map.

    The label bijection is (m1, m2) -> occupations (m1 - m2, m2); both
    windows share the same hard wall, so the transported matrices agree
    with the closed-form map entry by entry.  The inverse map applied to
    them must recover canonical mode operators: commutation relations,
    entrywise match, and integer number spectra are all reported.
    """
    if rep.pw_class is not PWClass.C1:
        raise ValueError("only class 1 intertwines with the Fock representation")
    scan = singularity_scan(rep)
    if not scan.invertible:
        raise ValueError("class-1 scan unexpectedly found singular logarithm arguments")
    bound = max(lab[0] for lab in rep.space.labels)
    fspace = make_space(2, Statistics.BOSE, bound)
    d = fspace.dimension
    perm = np.zeros((d, d), dtype=complex)
    for k, (m1, m2) in enumerate(rep.space.labels):
        perm[fspace.index((m1 - m2, m2)), k] = 1.0
    embed = lambda op: Op(fspace, perm @ op.matrix @ perm.T)
    a_up, a_dn = embed(rep.A_up), embed(rep.A_dn)
    ap_up, ap_dn = embed(rep.Ap_up), embed(rep.Ap_dn)
    ctx = {"q": rep.q, "bound": bound}
    checks = []

    forward = map_sl2_weyl(fspace, rep.q)
    for label, ours, theirs in (
        ("a-up", forward.A_up, a_up),
        ("a-dn", forward.A_dn, a_dn),
        ("ap-up", forward.Ap_up, ap_up),
        ("ap-dn", forward.Ap_dn, ap_dn),
    ):
        checks.append(relation(f"roundtrip.{label}", (ours - theirs).norm(), match_tol, ctx))

    proj = interior(fspace, 2)
    result = inverse_map_sl2((a_up, a_dn, ap_up, ap_dn), rep.q, proj)
    if not result.succeeded:
        checks.append(relation("inverse.well-defined", 1.0, 0.5, ctx))
        return SuiteReport("intertwine-class1", checks, ctx)
    checks.append(relation("inverse.well-defined", 0.0, 0.5, ctx))
    rec_a = result.annihilators
    rec_ap = result.creators
    for i in range(2):
        for j in range(2):
            delta = identity(fspace) if i == j else zero(fspace)
            res = proj.norm(rec_a[i] @ rec_ap[j] - rec_ap[j] @ rec_a[i] - delta)
            checks.append(relation(f"inverse.ccr.a{i}-ap{j}", res, ccr_tol, ctx))
            res = proj.norm(rec_a[i] @ rec_a[j] - rec_a[j] @ rec_a[i])
            checks.append(relation(f"inverse.ccr.a{i}-a{j}", res, ccr_tol, ctx))
            res = proj.norm(rec_ap[i] @ rec_ap[j] - rec_ap[j] @ rec_ap[i])
            checks.append(relation(f"inverse.ccr.ap{i}-ap{j}", res, ccr_tol, ctx))
    for label, ours, theirs in (
        ("a-up", rec_a[0], annihilator(fspace, 0)),
        ("a-dn", rec_a[1], annihilator(fspace, 1)),
        ("ap-up", rec_ap[0], creator(fspace, 0)),
        ("ap-dn", rec_ap[1], creator(fspace, 1)),
    ):
        checks.append(relation(f"inverse.match.{label}", proj.norm(ours - theirs), match_tol, ctx))

    n_up_rec = rec_ap[0] @ rec_a[0]
    expected = np.array([lab[0] - lab[1] for lab in rep.space.labels], dtype=float)
    reordered = Op(fspace, perm @ np.diag(expected.astype(complex)) @ perm.T)
    checks.append(relation("inverse.nup-spectrum", proj.norm(n_up_rec - reordered),
                           match_tol, ctx))
    return SuiteReport("intertwine-class1", checks, ctx)


@dataclass(frozen=True)
class Block:
    """One cyclic component of the root-of-unity decomposition."""

    cyclic: tuple
    members: tuple
    dimension: int
    complete: bool
    annihilation_residual: float


@dataclass(frozen=True)
class BlockDecomposition:
    p: int
    blocks: tuple
    unreached: tuple

    @property
    def complete_blocks(self) -> tuple:
        return tuple(b for b in self.blocks if b.complete)

    def block_for(self, cyclic) -> Block:
        cyclic = tuple(cyclic)
        for b in self.blocks:
            if b.cyclic == cyclic:
                return b
        raise KeyError(cyclic)


def root_unity_blocks(space: FockSpace, p: int, quartet: DeformedQuartet,
                      amp_tol: float = 1e-12) -> BlockDecomposition:
    """Cyclic vectors |mp, np> and the blocks grown from them.

    Each cyclic vector is annihilated by both deformed annihilators (the
    residual is recorded); its block is spanned by applying the deformed
    creators up to p-1 times each.  A block is complete when all p^2
    members fit inside the truncation.
    """
    p = int(p)
    blocks = []
    reached = set()
    for occ in space.basis:
        if occ[0] % p or occ[1] % p:
            continue
        vec = np.zeros(space.dimension, dtype=complex)
        vec[space.index(occ)] = 1.0
        ann_res = max(
            float(np.max(np.abs(quartet.A_up.apply(vec)))),
            float(np.max(np.abs(quartet.A_dn.apply(vec)))),
        )
        members = set()
        for k in range(p):
            for l in range(p):
                w = vec
                for _ in range(l):
                    w = quartet.Ap_dn.apply(w)
                for _ in range(k):
                    w = quartet.Ap_up.apply(w)
                support = np.nonzero(np.abs(w) > amp_tol)[0]
                members.update(int(s) for s in support)
        member_labels = tuple(sorted(space.basis[k] for k in members))
        reached.update(members)
        blocks.append(
            Block(
                cyclic=occ,
                members=member_labels,
                dimension=len(member_labels),
                complete=len(member_labels) == p * p,
                annihilation_residual=ann_res,
            )
        )
    unreached = tuple(occ for k, occ in enumerate(space.basis) if k not in reached)
    return BlockDecomposition(p, tuple(blocks), unreached)
