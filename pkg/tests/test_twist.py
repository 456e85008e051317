import cmath

import numpy as np
import pytest

import qdeform.twist as tw
from qdeform import (
    ConstructionError,
    Statistics,
    f_matrix_sl2,
    flip_matrix,
    hecke_residual,
    identity,
    interior,
    make_space,
    map_abelian,
    r_matrix_sl2,
    reshetikhin_twist,
    root_of_unity,
    standard_abelian_twist,
    yang_baxter_residual,
)
from qdeform.fock import annihilator, creator

QS = (0.5, 1.4, cmath.exp(1j * cmath.pi / 3))


def _block_inverse_residual(mt, proj):
    worst = 0.0
    one = identity(mt.space)
    for i in range(2):
        for j in range(2):
            total = mt.f[i][0] @ mt.f_inv[0][j] + mt.f[i][1] @ mt.f_inv[1][j]
            target = one if i == j else 0.0 * one
            worst = max(worst, proj.norm(total - target))
    return worst


def test_f_matrix_block_inverse(bose12, bose12_interior):
    mt = f_matrix_sl2(bose12, 1.4)
    assert _block_inverse_residual(mt, bose12_interior) < 1e-11


def test_f_matrix_block_inverse_on_fermi_space():
    # regression for the j label: on fermions the doubly occupied state has
    # Casimir zero, and using n/2 there would break F F^-1 = 1
    space = make_space(2, Statistics.FERMI, 2)
    mt = f_matrix_sl2(space, 2.0)
    assert _block_inverse_residual(mt, interior(space, 0)) < 1e-12


def test_f_matrix_classical_limit(bose12):
    mt = f_matrix_sl2(bose12, 1.0 + 1e-6)
    one = identity(bose12)
    assert (mt.f[0][0] - one).norm() < 1e-4
    assert (mt.f[1][1] - one).norm() < 1e-4
    assert mt.f[0][1].norm() < 1e-4
    assert mt.f[1][0].norm() < 1e-4


def test_f_matrix_counit_block(bose12):
    mt = f_matrix_sl2(bose12, 1.4)
    for which in ("f", "f_inv"):
        assert np.max(np.abs(mt.counit_block(which) - np.eye(2))) < 1e-11


def test_f_matrix_unitarity(bose12):
    mt = f_matrix_sl2(bose12, 1.4)
    worst = max(
        (mt.f[i][j].dag() - mt.f_inv[j][i]).norm() for i in range(2) for j in range(2))
    assert worst < 1e-11


def test_f_matrix_root_of_unity_fails_constructively():
    space = make_space(2, Statistics.BOSE, 9)
    with pytest.raises(ConstructionError) as err:
        f_matrix_sl2(space, root_of_unity(3))
    assert err.value.offending


def test_f_matrix_zero_ratio_convention_is_invisible(bose12, monkeypatch):
    reference = f_matrix_sl2(bose12, 1.4)
    original = tw.qratio_safe

    def shifted(x, q, kind="std"):
        val = original(x, q, kind)
        arr = np.asarray(x, dtype=float)
        bump = np.where(arr <= 1e-12, 5.0, 0.0)
        return val + (bump if isinstance(x, np.ndarray) else float(bump))

    monkeypatch.setattr(tw, "qratio_safe", shifted)
    perturbed = f_matrix_sl2(bose12, 1.4)
    # the b-function limit value multiplies annihilated vectors only
    for i in range(2):
        for j in range(2):
            if i == j:
                continue
            assert (perturbed.f[i][j] - reference.f[i][j]).norm() == 0.0


def test_r_matrix_entries():
    q = 1.7
    r = r_matrix_sl2(q)
    assert r[0, 0] == q and r[3, 3] == q
    assert r[1, 1] == 1.0 and r[2, 2] == 1.0
    assert r[2, 1] == pytest.approx(q - 1 / q)
    assert np.count_nonzero(r) == 5
    assert np.max(np.abs(r_matrix_sl2(1.0) - np.eye(4))) == 0.0


@pytest.mark.parametrize("q", QS)
def test_yang_baxter_and_hecke(q):
    r = r_matrix_sl2(q)
    assert yang_baxter_residual(r) < 1e-13
    assert hecke_residual(r, q) < 1e-13


def test_yang_baxter_independent_oracle():
    # rebuild the three-site operators with explicit loops and compare
    q = 1.4
    r = r_matrix_sl2(q)
    d = 2
    big = d**3

    def embed(pair_sites):
        out = np.zeros((big, big), dtype=complex)
        for row in range(big):
            r0, r1, r2 = row // 4, (row // 2) % 2, row % 2
            for col in range(big):
                c0, c1, c2 = col // 4, (col // 2) % 2, col % 2
                idx = {0: (r0, c0), 1: (r1, c1), 2: (r2, c2)}
                (ra, ca), (rb, cb) = idx[pair_sites[0]], idx[pair_sites[1]]
                other = ({0, 1, 2} - set(pair_sites)).pop()
                ro, co = idx[other]
                if ro == co:
                    out[row, col] = r[ra * 2 + rb, ca * 2 + cb]
        return out

    lhs = embed((0, 1)) @ embed((0, 2)) @ embed((1, 2))
    rhs = embed((1, 2)) @ embed((0, 2)) @ embed((0, 1))
    assert np.max(np.abs(lhs - rhs)) < 1e-13
    assert yang_baxter_residual(r) == pytest.approx(np.max(np.abs(lhs - rhs)), abs=1e-15)


def test_yang_baxter_identity_and_negative_control():
    assert yang_baxter_residual(np.eye(4, dtype=complex)) == 0.0
    rng = np.random.default_rng(7)
    perturbed = r_matrix_sl2(1.4) + 0.05 * rng.standard_normal((4, 4))
    assert yang_baxter_residual(perturbed) > 1e-3


def test_hecke_braid_eigenvalues():
    q = 1.3
    braid = flip_matrix(2) @ r_matrix_sl2(q)
    eig = sorted(np.linalg.eigvals(braid).real)
    assert eig[0] == pytest.approx(-1 / q)
    assert eig[-1] == pytest.approx(q)


def test_reshetikhin_gamma_is_identity(bose12):
    twst = standard_abelian_twist(bose12, 0.3)
    one = identity(bose12)
    assert (twst.gamma - one).norm() == 0.0
    assert (twst.gamma_prime - one).norm() == 0.0


def test_reshetikhin_r_matrix_entries(bose12):
    h, w0 = 0.3, 1.0
    twst = standard_abelian_twist(bose12, h, w0)
    r = twst.r_matrix
    # diagonal weight pairing is killed by antisymmetry
    assert r[0, 0] == pytest.approx(1.0)
    assert r[3, 3] == pytest.approx(1.0)
    assert r[1, 1] == pytest.approx(np.exp(-2 * h * w0))
    assert r[2, 2] == pytest.approx(np.exp(2 * h * w0))
    assert np.count_nonzero(r - np.diag(np.diag(r))) == 0


def test_reshetikhin_f21_equals_inverse(bose12):
    twst = standard_abelian_twist(bose12, 0.3)
    flip = flip_matrix(2)
    assert np.max(np.abs(flip @ twst.rho_rho(1) @ flip - twst.rho_rho(-1))) == 0.0


def test_reshetikhin_zero_omega_is_classical(bose12):
    twst = reshetikhin_twist(bose12, ((1.0, 0.0), (0.0, 1.0)), np.zeros((2, 2)), 0.3)
    quartet = map_abelian(bose12, twst)
    for i in range(2):
        assert (quartet.creators[i] - creator(bose12, i)).norm() == 0.0
        assert (quartet.annihilators[i] - annihilator(bose12, i)).norm() == 0.0


def test_reshetikhin_rejects_non_antisymmetric(bose12):
    with pytest.raises(ValueError):
        reshetikhin_twist(bose12, ((1.0, 0.0), (0.0, 1.0)), np.eye(2), 0.3)


def test_reshetikhin_weights_shape_check(bose12):
    with pytest.raises(ValueError):
        reshetikhin_twist(bose12, ((1.0,),), np.array([[0.0, 1.0], [-1.0, 0.0]]), 0.3)
