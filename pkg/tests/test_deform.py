import cmath
import math

import numpy as np
import pytest

from qdeform import (
    AlphaElement,
    ConstructionError,
    Provenance,
    Sign,
    Statistics,
    abelian_forms,
    alpha_element,
    annihilator,
    conjugate_quartet,
    creator,
    diagonal_op,
    identity,
    interior,
    inverse_map_sl2,
    make_space,
    map_1d,
    map_abelian,
    map_chaichian,
    map_sl2_clifford,
    map_sl2_weyl,
    map_universal_sl2,
    number_ops,
    q_gamma,
    root_unity_quartet,
    standard_abelian_twist,
    weyl_qcr_residual,
)


def explicit_weyl_residuals(quartet, proj):
    """Independent oracle: the six closed-form quadratic relations, written out."""
    q = quartet.q.q
    one = identity(quartet.space)
    au, ad_, cu, cd = quartet.A_up, quartet.A_dn, quartet.Ap_up, quartet.Ap_dn
    rels = {
        "uu": au @ cu - one - q**2 * (cu @ au) - (q**2 - 1) * (cd @ ad_),
        "dd": ad_ @ cd - one - q**2 * (cd @ ad_),
        "ud": au @ cd - q * (cd @ au),
        "du": ad_ @ cu - q * (cu @ ad_),
        "aa": ad_ @ au - q * (au @ ad_),
        "cc": cu @ cd - q * (cd @ cu),
    }
    return {k: proj.norm(v) for k, v in rels.items()}


def explicit_clifford_residuals(quartet):
    q = quartet.q.q
    one = identity(quartet.space)
    au, ad_, cu, cd = quartet.A_up, quartet.A_dn, quartet.Ap_up, quartet.Ap_dn
    rels = {
        "uu": au @ cu - one + cu @ au - (q**-2 - 1) * (cd @ ad_),
        "dd": ad_ @ cd - one + cd @ ad_,
        "ud": au @ cd + (1 / q) * (cd @ au),
        "du": ad_ @ cu + (1 / q) * (cu @ ad_),
        "aa": ad_ @ au + (1 / q) * (au @ ad_),
        "cc": cu @ cd + (1 / q) * (cd @ cu),
        "nilpotent-a": au @ au,
        "nilpotent-c": cd @ cd,
    }
    return {k: v.norm() for k, v in rels.items()}


class TestMap1d:
    def test_qcr(self):
        space = make_space(1, Statistics.BOSE, 20)
        proj = interior(space, 2)
        one = identity(space)
        a, ap = map_1d(space, 1.3)
        assert proj.norm(a @ ap - one - 1.3**2 * (ap @ a)) < 1e-11

    def test_classical_q_is_identity_map(self):
        space = make_space(1, Statistics.BOSE, 6)
        a, ap = map_1d(space, 1.0)
        assert (a - annihilator(space, 0)).norm() == 0.0
        assert (ap - creator(space, 0)).norm() == 0.0

    def test_one_particle_state_coincides(self):
        space = make_space(1, Statistics.BOSE, 6)
        _, ap = map_1d(space, 1.7)
        vac = np.zeros(space.dimension, dtype=complex)
        vac[space.vacuum_index] = 1.0
        assert np.max(np.abs(ap.apply(vac) - creator(space, 0).apply(vac))) == 0.0

    def test_needs_single_bose_mode(self):
        with pytest.raises(ValueError):
            map_1d(make_space(2, Statistics.BOSE, 4), 1.2)


class TestWeylClosedForm:
    @pytest.mark.parametrize("q", [0.7, 1.4])
    def test_explicit_relations(self, bose12, bose12_interior, q):
        quartet = map_sl2_weyl(bose12, q)
        res = explicit_weyl_residuals(quartet, bose12_interior)
        assert max(res.values()) < 1e-10

    def test_star_structure_is_bitwise(self, bose12):
        quartet = map_sl2_weyl(bose12, 0.7)
        for a, c in zip(quartet.annihilators, quartet.creators):
            assert (a.dag() - c).norm() == 0.0

    def test_classical_q(self, bose12):
        quartet = map_sl2_weyl(bose12, 1.0)
        for i in range(2):
            assert (quartet.creators[i] - creator(bose12, i)).norm() == 0.0
            assert (quartet.annihilators[i] - annihilator(bose12, i)).norm() == 0.0

    def test_vacuum_sector(self, bose12):
        quartet = map_sl2_weyl(bose12, 1.4)
        vac = np.zeros(bose12.dimension, dtype=complex)
        vac[bose12.vacuum_index] = 1.0
        for i in range(2):
            assert np.max(np.abs(quartet.creators[i].apply(vac)
                                 - creator(bose12, i).apply(vac))) == 0.0
            assert np.max(np.abs(quartet.annihilators[i].apply(vac))) == 0.0

    def test_amplitude_against_direct_formula(self, bose12):
        # <m1+1, m2| A+_up |m1, m2> = sqrt((m1+1)_{q^2}) q^{m2}
        q = 1.4
        quartet = map_sl2_weyl(bose12, q)
        m1, m2 = 3, 2
        col = bose12.index((m1, m2))
        row = bose12.index((m1 + 1, m2))
        expected = math.sqrt((q ** (2 * (m1 + 1)) - 1) / (q**2 - 1)) * q**m2
        assert quartet.Ap_up.matrix[row, col] == pytest.approx(expected, rel=1e-12)

    def test_number_ladder_relations(self, bose12, bose12_interior):
        from qdeform.verify import check_number_ladder

        quartet = map_sl2_weyl(bose12, 1.4)
        rep = check_number_ladder(quartet, bose12_interior, tolerance=1e-10)
        assert rep.overall_pass

    def test_deformed_number_is_qnumber_not_n(self, bose12):
        # N = A+_i A^i has spectrum (n)_{q^2}: the quasitriangular maps do
        # not preserve the classical number operator
        q = 1.4
        quartet = map_sl2_weyl(bose12, q)
        n_def = quartet.number_op()
        _, n_tot = number_ops(bose12)
        expected = diagonal_op(
            bose12, [(q ** (2 * k) - 1) / (q**2 - 1) for k in np.real(n_tot.diag())])
        assert (n_def - expected).norm() < 1e-10
        assert (n_def - n_tot).norm() > 1.0


class TestCliffordClosedForm:
    @pytest.mark.parametrize("q", [0.7, 1.4])
    def test_explicit_relations_exact_space(self, fermi2, q):
        quartet = map_sl2_clifford(fermi2, q)
        res = explicit_clifford_residuals(quartet)
        assert max(res.values()) < 1e-13

    def test_creator_square_vanishes(self, fermi2):
        quartet = map_sl2_clifford(fermi2, 1.3)
        assert (quartet.Ap_up @ quartet.Ap_up).norm() == 0.0

    def test_classical_q(self, fermi2):
        quartet = map_sl2_clifford(fermi2, 1.0)
        for i in range(2):
            assert (quartet.creators[i] - creator(fermi2, i)).norm() == 0.0

    def test_star_structure(self, fermi2):
        quartet = map_sl2_clifford(fermi2, 0.6)
        for a, c in zip(quartet.annihilators, quartet.creators):
            assert (a.dag() - c).norm() < 1e-14


class TestTwistBuilt:
    @pytest.mark.parametrize("q", [0.7, 1.4])
    def test_matches_weyl_closed_form(self, bose12, q):
        built = map_universal_sl2(bose12, q)
        closed = map_sl2_weyl(bose12, q)
        worst = max(
            (built.annihilators[i] - closed.annihilators[i]).norm() for i in range(2))
        worst = max(worst, max(
            (built.creators[i] - closed.creators[i]).norm() for i in range(2)))
        assert worst < 1e-10
        assert built.provenance is Provenance.TWIST_BUILT

    @pytest.mark.parametrize("q", [0.7, 1.4])
    def test_matches_clifford_closed_form(self, fermi2, q):
        built = map_universal_sl2(fermi2, q)
        closed = map_sl2_clifford(fermi2, q)
        worst = max(
            max((built.annihilators[i] - closed.annihilators[i]).norm() for i in range(2)),
            max((built.creators[i] - closed.creators[i]).norm() for i in range(2)))
        assert worst < 1e-12

    def test_classical_q(self, bose12):
        built = map_universal_sl2(bose12, 1.0)
        for i in range(2):
            assert (built.creators[i] - creator(bose12, i)).norm() < 1e-12

    def test_sign_statistics_mismatch(self, bose12):
        with pytest.raises(ValueError):
            map_universal_sl2(bose12, 1.4, sign=Sign.CLIFFORD)

    def test_zero_ratio_convention_is_invisible(self, bose12, monkeypatch):
        import qdeform.twist as twmod

        reference = map_universal_sl2(bose12, 1.4)
        original = twmod.qratio_safe

        def shifted(x, q, kind="std"):
            val = original(x, q, kind)
            arr = np.asarray(x, dtype=float)
            bump = np.where(arr <= 1e-12, 3.0, 0.0)
            return val + (bump if isinstance(x, np.ndarray) else float(bump))

        monkeypatch.setattr(twmod, "qratio_safe", shifted)
        perturbed = map_universal_sl2(bose12, 1.4)
        worst = max(
            max((perturbed.annihilators[i] - reference.annihilators[i]).norm()
                for i in range(2)),
            max((perturbed.creators[i] - reference.creators[i]).norm() for i in range(2)))
        assert worst == 0.0


class TestAbelian:
    def test_four_forms_agree(self, bose12):
        tw = standard_abelian_twist(bose12, 0.3)
        f1, f2, f3, f4 = abelian_forms(bose12, tw)
        for i in range(2):
            assert (f1[i] - f2[i]).norm() < 1e-12
            assert (f3[i] - f4[i]).norm() < 1e-12

    def test_qcr_with_squared_inverse_twist(self, bose12, bose12_interior):
        from qdeform.verify import check_qcr_rmatrix

        tw = standard_abelian_twist(bose12, 0.3)
        quartet = map_abelian(bose12, tw)
        rep = check_qcr_rmatrix(quartet, tw.r_matrix, bose12_interior,
                                normalization="triangular", tolerance=1e-11)
        assert rep.overall_pass

    def test_number_operator_preserved(self, bose12):
        tw = standard_abelian_twist(bose12, 0.3)
        quartet = map_abelian(bose12, tw)
        _, n_tot = number_ops(bose12)
        assert (quartet.number_op() - n_tot).norm() < 1e-13

    def test_invariants_through_order_two(self, bose12):
        from qdeform.verify import check_invariants

        tw = standard_abelian_twist(bose12, 0.3)
        quartet = map_abelian(bose12, tw)
        rep = check_invariants(quartet, orders=(1, 2), tolerance=1e-10)
        assert rep.overall_pass

    def test_level_operators(self, bose12, bose12_interior):
        # the per-mode levels N_i commute and ladder the deformed creators
        tw = standard_abelian_twist(bose12, 0.3)
        quartet = map_abelian(bose12, tw)
        ns = [quartet.creators[i] @ quartet.annihilators[i] for i in range(2)]
        assert bose12_interior.norm(ns[0] @ ns[1] - ns[1] @ ns[0]) < 1e-12
        for i in range(2):
            for j in range(2):
                delta = 1.0 if i == j else 0.0
                lhs = ns[i] @ quartet.creators[j] - quartet.creators[j] @ ns[i] \
                    - delta * quartet.creators[j]
                assert bose12_interior.norm(lhs) < 1e-11

    def test_fermionic_abelian_quartet(self, fermi2):
        from qdeform.verify import check_qcr_rmatrix

        tw = standard_abelian_twist(fermi2, 0.3)
        quartet = map_abelian(fermi2, tw)
        assert quartet.sign is Sign.CLIFFORD
        rep = check_qcr_rmatrix(quartet, tw.r_matrix, interior(fermi2, 0),
                                normalization="triangular", tolerance=1e-12)
        assert rep.overall_pass


class TestAlphaAndChaichian:
    def test_alpha_entries(self, bose12):
        q = 1.5
        al = alpha_element(bose12, q)
        v = bose12.vacuum_index
        assert al.alpha.matrix[v, v] == pytest.approx(1.0)
        k = bose12.index((2, 0))
        # 2! / Gamma_{q^2}(3) = 2/(1 + q^2), computed independently
        assert al.alpha.matrix[k, k] == pytest.approx(math.sqrt(2 / (1 + q**2)))
        assert (al.alpha @ al.alpha_inv - identity(bose12)).norm() < 1e-13

    def test_alpha_classical_is_identity(self, bose12):
        al = alpha_element(bose12, 1.0)
        assert (al.alpha - identity(bose12)).norm() == 0.0

    def test_alpha_needs_real_positive_q(self, bose12):
        with pytest.raises(ConstructionError):
            alpha_element(bose12, cmath.exp(0.3j))

    def test_alpha_conjugation_reaches_chaichian(self, bose12):
        q = 1.5
        al = alpha_element(bose12, q)
        conj = conjugate_quartet(map_sl2_weyl(bose12, q), al)
        cha = map_chaichian(bose12, q)
        worst = max(
            max((conj.annihilators[i] - cha.annihilators[i]).norm() for i in range(2)),
            max((conj.creators[i] - cha.creators[i]).norm() for i in range(2)))
        assert worst < 1e-10
        assert conj.provenance is Provenance.ALPHA_CONJUGATED

    def test_chaichian_satisfies_qcr_but_not_star(self, bose12, bose12_interior):
        q = 1.5
        cha = map_chaichian(bose12, q)
        res = explicit_weyl_residuals(cha, bose12_interior)
        assert max(res.values()) < 1e-10
        gap = max((cha.annihilators[i].dag() - cha.creators[i]).norm() for i in range(2))
        assert gap > 1e-3

    def test_unitary_conjugation_preserves_qcr(self, bose12, bose12_interior):
        q = 1.4
        rng = np.random.default_rng(11)
        phases = np.exp(1j * 0.2 * rng.standard_normal(bose12.dimension))
        unitary = AlphaElement(diagonal_op(bose12, phases),
                               diagonal_op(bose12, 1.0 / phases))
        rotated = conjugate_quartet(map_sl2_weyl(bose12, q), unitary)
        res = explicit_weyl_residuals(rotated, bose12_interior)
        assert max(res.values()) < 1e-10
        gap = max((rotated.annihilators[i].dag() - rotated.creators[i]).norm()
                  for i in range(2))
        assert gap < 1e-10


class TestInverseMap:
    @pytest.mark.parametrize("q", [0.6, 1.4])
    def test_fock_roundtrip(self, bose12, bose12_interior, q):
        quartet = map_sl2_weyl(bose12, q)
        result = inverse_map_sl2(quartet, proj=bose12_interior)
        assert result.succeeded
        worst = max(
            (result.annihilators[0] - annihilator(bose12, 0)).norm(),
            (result.annihilators[1] - annihilator(bose12, 1)).norm(),
            (result.creators[0] - creator(bose12, 0)).norm(),
            (result.creators[1] - creator(bose12, 1)).norm(),
        )
        assert worst < 1e-10

    def test_recovered_ccr(self, bose12, bose12_interior):
        quartet = map_sl2_weyl(bose12, 0.6)
        result = inverse_map_sl2(quartet, proj=bose12_interior)
        a, c = result.annihilators, result.creators
        one = identity(bose12)
        for i in range(2):
            for j in range(2):
                target = one if i == j else 0.0 * one
                assert bose12_interior.norm(a[i] @ c[j] - c[j] @ a[i] - target) < 1e-10

    def test_zero_level_limit_used(self, bose12):
        # states with N_dn-eigenvalue 0 exercise the analytic-limit branch
        quartet = map_sl2_weyl(bose12, 1.3)
        result = inverse_map_sl2(quartet, proj=interior(bose12, 2))
        assert result.succeeded
        assert np.min(np.abs(result.nu_dn)) < 1e-14

    def test_precondition_rejects_classical_quartet(self, bose12, bose12_interior):
        classical = map_sl2_weyl(bose12, 1.0)
        with pytest.raises(ValueError):
            inverse_map_sl2((classical.A_up, classical.A_dn,
                             classical.Ap_up, classical.Ap_dn), 1.4, bose12_interior)

    def test_rejects_classical_deformation(self, bose12, bose12_interior):
        classical = map_sl2_weyl(bose12, 1.0)
        with pytest.raises(ConstructionError):
            inverse_map_sl2(classical, proj=bose12_interior)


class TestRootOfUnity:
    def test_annihilates_lattice_states(self):
        space = make_space(2, Statistics.BOSE, 9)
        quartet = root_unity_quartet(space, 3)
        for occ in space.basis:
            if occ[0] % 3 or occ[1] % 3:
                continue
            vec = np.zeros(space.dimension, dtype=complex)
            vec[space.index(occ)] = 1.0
            assert np.max(np.abs(quartet.A_up.apply(vec))) < 1e-10
            assert np.max(np.abs(quartet.A_dn.apply(vec))) < 1e-10

    def test_creator_power_vanishes_on_vacuum(self):
        space = make_space(2, Statistics.BOSE, 9)
        quartet = root_unity_quartet(space, 3)
        vac = np.zeros(space.dimension, dtype=complex)
        vac[space.vacuum_index] = 1.0
        assert np.max(np.abs((quartet.Ap_up**3).apply(vac))) < 1e-12

    def test_requires_enough_cutoff(self):
        with pytest.raises(ValueError):
            root_unity_quartet(make_space(2, Statistics.BOSE, 5), 3)

    def test_qcr_still_hold(self):
        space = make_space(2, Statistics.BOSE, 9)
        quartet = root_unity_quartet(space, 3)
        res = explicit_weyl_residuals(quartet, interior(space, 2))
        assert max(res.values()) < 1e-12


def test_weyl_qcr_residual_helper(bose12, bose12_interior):
    good = map_sl2_weyl(bose12, 1.4)
    assert weyl_qcr_residual(good.annihilators, good.creators, 1.4, bose12_interior) < 1e-10
    # the same operators against the wrong q fail loudly
    assert weyl_qcr_residual(good.annihilators, good.creators, 1.5, bose12_interior) > 1e-3


def test_alpha_q_gamma_consistency(bose12):
    # alpha diagonal rebuilt from the q-Gamma recurrence directly
    q = 1.3
    al = alpha_element(bose12, q)
    for k, (m1, m2) in enumerate(bose12.basis):
        expected = math.sqrt(
            (math.factorial(m1) * math.factorial(m2))
            / (q_gamma(m1 + 1, q * q) * q_gamma(m2 + 1, q * q)).real)
        assert al.alpha.matrix[k, k].real == pytest.approx(expected, rel=1e-12)
