import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kacfusion.cartan import affine_data
from kacfusion.errors import KacFusionError
from kacfusion.fusion import (check_grading, fusion_kw, fusion_verlinde, s_matrix,
                              verlinde_algebra)


def su2_rule(k, a, b):
    return {c: 1 for c in range(abs(a - b), min(a + b, 2 * k - a - b) + 1, 2)}


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 10), st.data())
def test_su2_fusion_closed_form(k, draw):
    alg = verlinde_algebra(affine_data("A1~1"), k)
    a = draw.draw(st.integers(0, k))
    b = draw.draw(st.integers(0, k))
    got = {int(alg.basis[l].finite[0]): v for l, v in
           alg.product(alg.basis.index((a,)), alg.basis.index((b,))).items()}
    assert got == su2_rule(k, a, b)


@pytest.mark.parametrize("k", [1, 2, 5])
def test_su2_s_matrix_closed_form(k):
    sm = s_matrix(affine_data("A1~1"), k)
    n = k + 2
    for i, wi in enumerate(sm.basis):
        for j, wj in enumerate(sm.basis):
            a, b = int(wi.finite[0]), int(wj.finite[0])
            want = np.sqrt(2 / n) * np.sin(np.pi * (a + 1) * (b + 1) / n)
            assert abs(sm.S[i, j] - want) < 1e-12


@pytest.mark.parametrize("t,k", [("A2~1", 3), ("B3~1", 2), ("G2~1", 3), ("C3~1", 2), ("D4~1", 2)])
def test_s_unitary_symmetric(t, k):
    S = s_matrix(affine_data(t), k).S
    assert np.allclose(S, S.T, atol=1e-12)
    assert np.allclose(S @ S.conj().T, np.eye(len(S)), atol=1e-12)
    # S^2 is the charge conjugation permutation
    S2 = np.rint((S @ S).real)
    assert np.allclose(S @ S, S2, atol=1e-10)
    assert np.array_equal(np.sort(S2.sum(axis=0)), np.ones(len(S)))


@pytest.mark.parametrize("t,k", [("A2~1", 3), ("B3~1", 2), ("G2~1", 2), ("C2~1", 3), ("E6~1", 1)])
def test_associative_and_graded(t, k):
    alg = verlinde_algebra(affine_data(t), k)
    assert alg.associativity_defect() == 0
    assert check_grading(alg).holds
    e = alg.identity_index
    for i in range(len(alg)):
        assert alg.product(e, i) == {i: 1}


@pytest.mark.parametrize("t,k", [("A3~1", 2), ("G2~1", 3), ("C2~1", 2)])
def test_kac_walton_matches_verlinde(t, k):
    d = affine_data(t)
    kw = verlinde_algebra(d, k, crosscheck=False)
    num = fusion_verlinde(s_matrix(d, k))
    assert kw.same_tensor(num)
    assert num.max_residue < 1e-8


def test_e8_level_two_is_ising():
    alg = verlinde_algebra(affine_data("E8~1"), 2)
    e = alg.identity_index
    assert len(alg) == 3
    sigma = next(i for i in range(3) if len(alg.product(i, i)) == 2)
    psi = 3 - e - sigma
    assert alg.product(sigma, sigma) == {e: 1, psi: 1}
    assert alg.product(psi, psi) == {e: 1}
    assert alg.product(sigma, psi) == {sigma: 1}


def test_fusion_kw_single_product():
    d = affine_data("A2~1")
    out = fusion_kw(d, 1, (1, 0), (1, 0))
    assert {w.finite.to_ints(): v for w, v in out.items()} == {(0, 1): 1}


@pytest.mark.parametrize("t,k", [("A2~2", 1), ("A1~1", 0), ("A1~1", -1)])
def test_rejects_bad_input(t, k):
    with pytest.raises(KacFusionError):
        verlinde_algebra(affine_data(t), k)
