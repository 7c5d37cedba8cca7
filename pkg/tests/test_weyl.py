import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kacfusion.cartan import FiniteWeight, affine_data
from kacfusion.errors import InvalidLattice
from kacfusion.weyl import (AlcoveWord, Lattice, fold_affine, reflect, to_dominant,
                            weyl_group, weyl_order)

ORDERS = {"A1~1": 2, "A2~1": 6, "A3~1": 24, "B3~1": 48, "C3~1": 48, "D4~1": 192,
          "G2~1": 12, "F4~1": 1152, "E6~1": 51840}


@pytest.mark.parametrize("t", ORDERS)
def test_weyl_order_formula(t):
    assert weyl_order(affine_data(t)) == ORDERS[t]


@pytest.mark.parametrize("t", ["A1~1", "A2~1", "B3~1", "C3~1", "D4~1", "G2~1", "F4~1"])
def test_enumerated_group(t):
    mats, signs = weyl_group(t)
    assert len(mats) == ORDERS[t]
    assert signs.sum() == 0
    dets = np.rint(np.linalg.det(mats.astype(float))).astype(int)
    assert np.array_equal(dets, signs)


def test_reflect_is_involution():
    d = affine_data("G2~1")
    w = FiniteWeight((3, -5))
    for i in (1, 2):
        assert reflect(d, i, reflect(d, i, w)) == w


@given(st.integers(-20, 20), st.integers(-20, 20), st.integers(-20, 20))
def test_to_dominant_lands_in_chamber(a, b, c):
    d = affine_data("B3~1")
    sw = to_dominant(d, FiniteWeight((a, b, c)), regular=False)
    assert sw.weight.is_dominant()
    assert d.norm2(sw.weight) == d.norm2(FiniteWeight((a, b, c)))


@settings(max_examples=200)
@given(st.integers(1, 8), st.integers(1, 60))
def test_a1_fold_closed_form(k, v):
    # alcove (0, m) for m = k + 2; the orbit of v is +-v + 2mZ
    d = affine_data("A1~1")
    m = k + 2
    sw = fold_affine(d, m, Lattice("CoRootImage"), FiniteWeight((v,)))
    r = v % (2 * m)
    if r % m == 0:
        assert sw.null
    elif r < m:
        assert (sw.weight.labels, sw.sign) == ((r,), 1)
    else:
        assert (sw.weight.labels, sw.sign) == ((2 * m - r,), -1)


def test_alcove_word_sign():
    assert AlcoveWord((1, 2)).sign == -1
    assert AlcoveWord((2, 2)).sign == 1
    assert len(AlcoveWord((1, 1, 3))) == 3


def test_lattice_validation():
    with pytest.raises(InvalidLattice):
        Lattice("Weights")
    with pytest.raises(InvalidLattice):
        Lattice("RootLattice", 0)
