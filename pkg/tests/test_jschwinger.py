import numpy as np
import pytest

import qdeform.jschwinger as jsch
from qdeform import (
    ConstructionError,
    Statistics,
    Word,
    annihilator,
    antipode_data,
    classical_action,
    creator,
    commutator,
    identity,
    interior,
    make_space,
    map_sl2_weyl,
    number_ops,
    phi_h_generators,
    quantum_action,
    sigma_sl2,
)
from qdeform.jschwinger import fundamental, realize


@pytest.fixture(scope="module")
def triple(bose12):
    return sigma_sl2(bose12)


@pytest.fixture(scope="module")
def qtriple(bose12):
    return phi_h_generators(bose12, 1.4)


@pytest.fixture(scope="module")
def hopf():
    return antipode_data(1.4)


def test_needs_two_modes():
    with pytest.raises(ValueError):
        sigma_sl2(make_space(1, Statistics.BOSE, 4))


def test_classical_sl2_relations(bose12, bose12_interior, triple):
    P = bose12_interior
    assert P.norm(commutator(triple.j0, triple.j_plus) - triple.j_plus) < 1e-12
    assert P.norm(commutator(triple.j0, triple.j_minus) + triple.j_minus) < 1e-12
    # exact on the full space: sigma preserves total quanta
    assert (commutator(triple.j_plus, triple.j_minus) - 2 * triple.j0).norm() < 1e-12


def test_j0_eigenvalue(bose12, triple):
    vec = np.zeros(bose12.dimension, dtype=complex)
    vec[bose12.index((1, 0))] = 1.0
    out = triple.j0.apply(vec)
    assert out[bose12.index((1, 0))] == pytest.approx(0.5)


def test_casimir_diagonal_matches_half_n(bose12, triple):
    # sigma(C) entry on (m1, m2) is k/2 (k/2 + 1) with k = m1 + m2
    for k, occ in enumerate(bose12.basis):
        half = sum(occ) / 2
        assert triple.casimir.matrix[k, k] == pytest.approx(half * (half + 1))
    assert np.allclose(triple.j_values, np.real(triple.j_half_n.diag()), atol=1e-12)


def test_fermionic_casimir_j_is_not_half_n():
    # the doubly occupied state is an sl(2) singlet: j = 0 while n/2 = 1
    space = make_space(2, Statistics.FERMI, 2)
    tr = sigma_sl2(space)
    k = space.index((1, 1))
    assert tr.j_values[k] == pytest.approx(0.0)
    assert np.real(tr.j_half_n.diag())[k] == pytest.approx(1.0)


def test_phi_h_j0_is_classical(bose12, triple, qtriple):
    assert np.array_equal(qtriple.J0.matrix, triple.j0.matrix)


def test_deformed_sl2_relations(bose12, bose12_interior, qtriple):
    q = 1.4
    P = bose12_interior
    assert P.norm(commutator(qtriple.J0, qtriple.J_plus) - qtriple.J_plus) < 1e-10
    assert P.norm(commutator(qtriple.J0, qtriple.J_minus) + qtriple.J_minus) < 1e-10
    rhs = (1.0 / (q - 1.0 / q)) * (
        qtriple.q_j0 @ qtriple.q_j0 - qtriple.q_j0_inv @ qtriple.q_j0_inv)
    assert P.norm(commutator(qtriple.J_plus, qtriple.J_minus) - rhs) < 1e-10


def test_phi_h_classical_limit(bose12, triple):
    qt = phi_h_generators(bose12, 1.0 + 1e-6)
    assert (qt.J_plus - triple.j_plus).norm() < 1e-4
    assert (qt.J_minus - triple.j_minus).norm() < 1e-4


def test_phi_h_root_of_unity_gating():
    from qdeform import root_of_unity

    space = make_space(2, Statistics.BOSE, 9)
    with pytest.raises(ConstructionError) as err:
        phi_h_generators(space, root_of_unity(3))
    assert err.value.offending


def test_phi_h_zero_ratio_convention_is_invisible(bose12, monkeypatch):
    reference = phi_h_generators(bose12, 1.4)
    original = jsch.qratio_safe

    def shifted(x, q, kind="std"):
        val = original(x, q, kind)
        arr = np.asarray(x, dtype=float)
        bump = np.where(arr <= 1e-12, 7.0, 0.0)
        return val + (bump if isinstance(x, np.ndarray) else float(bump))

    monkeypatch.setattr(jsch, "qratio_safe", shifted)
    perturbed = phi_h_generators(bose12, 1.4)
    assert (perturbed.J_plus - reference.J_plus).norm() == 0.0
    assert (perturbed.J_minus - reference.J_minus).norm() == 0.0


def test_classical_action_on_creators(bose12, triple):
    a_up_dag = creator(bose12, 0)
    a_dn_dag = creator(bose12, 1)
    out = classical_action("j0", a_up_dag, triple)
    assert (out - 0.5 * a_up_dag).norm() < 1e-12
    out = classical_action("j+", a_dn_dag, triple)
    assert (out - a_up_dag).norm() < 1e-12


def test_classical_action_on_annihilators(bose12, triple):
    # contragredient transformation: j+ kills a_dn and sends a_up to -a_dn
    a_up = annihilator(bose12, 0)
    a_dn = annihilator(bose12, 1)
    assert classical_action("j+", a_dn, triple).norm() < 1e-12
    assert (classical_action("j+", a_up, triple) + a_dn).norm() < 1e-12


def test_classical_action_rejects_unknown_generator(bose12, triple):
    with pytest.raises(KeyError):
        classical_action("x", identity(bose12), triple)


def test_quantum_action_weight_and_raising(bose12, bose12_interior, qtriple, hopf):
    quartet = map_sl2_weyl(bose12, 1.4)
    P = bose12_interior
    out = quantum_action("J0", quartet.Ap_up, qtriple, hopf)
    assert P.norm(out - 0.5 * quartet.Ap_up) < 1e-10
    out = quantum_action("J+", quartet.Ap_dn, qtriple, hopf)
    assert P.norm(out - quartet.Ap_up) < 1e-10


def test_quantum_action_on_annihilator(bose12, bose12_interior, qtriple, hopf):
    # J+ acts on A^up through the antipoded fundamental matrix: -q^{-1} A^dn
    quartet = map_sl2_weyl(bose12, 1.4)
    out = quantum_action("J+", quartet.A_up, qtriple, hopf)
    assert bose12_interior.norm(out + (1 / 1.4) * quartet.A_dn) < 1e-10


def test_quantum_action_on_unit(bose12, qtriple, hopf):
    one = identity(bose12)
    for gen in ("J0", "J+", "J-"):
        out = quantum_action(gen, one, qtriple, hopf)
        assert out.norm() < 1e-12


def test_quantum_action_needs_hopf_data(bose12, qtriple, hopf):
    with pytest.raises(KeyError):
        quantum_action("J?", identity(bose12), qtriple, hopf)


def test_antipode_axiom(bose12, bose12_interior, qtriple, hopf):
    one = identity(bose12)
    for gen in ("J0", "J+", "J-"):
        total = None
        for left, right in hopf.coproduct[gen]:
            term = realize(qtriple, hopf.antipode_word(left)) @ realize(qtriple, right)
            total = term if total is None else total + term
        assert bose12_interior.norm(total - hopf.counit[gen] * one) < 1e-10


def test_antipode_values():
    hopf = antipode_data(1.4)
    assert hopf.antipode["J0"] == Word(-1.0, ("J0",))
    assert hopf.antipode["J+"].coeff == pytest.approx(-1 / 1.4)
    assert hopf.antipode["J-"].coeff == pytest.approx(-1.4)
    near_classical = antipode_data(1.0 + 1e-9)
    assert near_classical.antipode["J+"].coeff == pytest.approx(-1.0)


def test_module_algebra_property(bose12, bose12_interior, qtriple, hopf):
    quartet = map_sl2_weyl(bose12, 1.4)
    ops = (quartet.Ap_up, quartet.Ap_dn, quartet.A_up, quartet.A_dn)
    P = bose12_interior
    for gen in ("J0", "J+", "J-"):
        for a in ops:
            for b in ops:
                lhs = quantum_action(gen, a @ b, qtriple, hopf)
                rhs = None
                for left, right in hopf.coproduct[gen]:
                    term = quantum_action(left, a, qtriple, hopf) @ quantum_action(
                        right, b, qtriple, hopf)
                    rhs = term if rhs is None else rhs + term
                assert P.norm(lhs - rhs) < 1e-9


def test_action_composition(bose12, bose12_interior, qtriple, hopf):
    quartet = map_sl2_weyl(bose12, 1.4)
    P = bose12_interior
    for pair in (("J+", "J-"), ("J0", "J+"), ("J-", "J0")):
        for target in (quartet.Ap_up, quartet.A_dn):
            lhs = quantum_action(pair, target, qtriple, hopf)
            rhs = quantum_action(pair[0], quantum_action(pair[1], target, qtriple, hopf),
                                 qtriple, hopf)
            assert P.norm(lhs - rhs) < 1e-9


def test_quantum_action_classical_limit(bose12, bose12_interior, triple):
    q = 1.0 + 1e-6
    qt = phi_h_generators(bose12, q)
    hopf = antipode_data(q)
    target = creator(bose12, 1)
    for gen, cls in (("J0", "j0"), ("J+", "j+"), ("J-", "j-")):
        lhs = quantum_action(gen, target, qt, hopf)
        rhs = classical_action(cls, target, triple)
        assert bose12_interior.norm(lhs - rhs) < 1e-4


def test_fundamental_matrices():
    rho = fundamental(1.4, Word(1.0, ("J+",)))
    assert np.array_equal(rho, np.array([[0, 1], [0, 0]], dtype=complex))
    rho0 = fundamental(1.4, Word(1.0, ("J0",)))
    assert np.array_equal(rho0, np.diag([0.5, -0.5]).astype(complex))
    grouplike = fundamental(4.0, Word(1.0, ("q^J0",)))
    assert grouplike[0, 0] == pytest.approx(2.0)
