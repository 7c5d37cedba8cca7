import itertools

import pytest
from hypothesis import given, settings, strategies as st

from kacfusion.cartan import LevelWeight, affine_data, transpose
from kacfusion.errors import NotDominant, OutOfRange, UntwistedType
from kacfusion.twisted import (a2_even_product, bullet_tau, odd_level_s_match, odd_level_tensor_match,
                               sign_twist_check, tau_map, twisted_verlinde)
from kacfusion.weights import enum_weights


def a2_table(n):
    alg = twisted_verlinde(affine_data("A2~2"), 2 * n)
    idx = {int(w.finite[0]): i for i, w in enumerate(alg.basis)}
    return alg, idx


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 5), st.data())
def test_a2_even_closed_form(n, draw):
    alg, idx = a2_table(n)
    a = draw.draw(st.integers(0, n))
    b = draw.draw(st.integers(0, n))
    got = {int(alg.basis[l].finite[0]): v for l, v in alg.product(idx[a], idx[b]).items()}
    assert got == a2_even_product(n, a, b)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_a2_even_sign_follows_label_parity(n):
    for a, b in itertools.product(range(n + 1), repeat=2):
        for c, v in a2_even_product(n, a, b).items():
            assert v == (-1) ** (a + b + c)
    assert a2_even_product(n, n, n) == {c: (-1) ** c for c in range(n + 1)}


def test_closed_form_range_checked():
    with pytest.raises(OutOfRange):
        a2_even_product(2, 3, 0)


@pytest.mark.parametrize("l,k", [(1, 1), (1, 3), (2, 1), (2, 2)])
def test_odd_level_matches_type_c(l, k):
    dev, perm = odd_level_s_match(l, k)
    assert perm is not None and dev < 1e-9
    assert odd_level_tensor_match(l, 2 * k + 1)


@pytest.mark.parametrize("t,k", [("A2~2", 4), ("A2~2", 6), ("A4~2", 2), ("A4~2", 4)])
def test_sign_twist_even_levels(t, k):
    rep = sign_twist_check(twisted_verlinde(affine_data(t), k))
    assert rep.conjecture_holds and rep.checked > 0


@pytest.mark.parametrize("t", ["A3~2", "A5~2", "D4~2", "D4~3", "E6~2"])
def test_tau_image_and_level_shift(t):
    d = affine_data(t)
    tm = tau_map(d)
    assert tm.target.atype == transpose(d).atype
    for w in enum_weights(d, 1, "Pupper"):
        img = bullet_tau(tm, w)
        assert img.level == 1 + d.h_dual - d.h
        assert img.finite.is_integral()


@pytest.mark.parametrize("t,k", [("A3~2", 2), ("D4~3", 1), ("A5~2", 1)])
def test_embedded_sub_basis(t, k):
    d = affine_data(t)
    alg = twisted_verlinde(d, k)
    assert len(alg.embedded) == len(enum_weights(d, k, "Pupper"))
    assert alg.provenance == "TransposeShift"
    assert alg.associativity_defect() == 0


def test_errors():
    with pytest.raises(UntwistedType):
        twisted_verlinde(affine_data("A2~1"), 1)
    tm = tau_map(affine_data("A3~2"))
    with pytest.raises(NotDominant):
        bullet_tau(tm, LevelWeight((-1, 0), 1))
