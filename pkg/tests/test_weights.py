from math import comb

import pytest

from kacfusion.cartan import FiniteWeight, affine_data
from kacfusion.errors import LevelNonPositive, NonIntegralWeight, WeightNotInBasis
from kacfusion.weights import enum_weights, grading_group, lemma43_check

DETS = {"A1~1": 2, "A3~1": 4, "B3~1": 2, "C3~1": 2, "D4~1": 4, "D5~1": 4, "E6~1": 3,
        "E7~1": 2, "E8~1": 1, "F4~1": 1, "G2~1": 1}


@pytest.mark.parametrize("n", [1, 2, 3, 4])
@pytest.mark.parametrize("k", [1, 2, 5])
def test_level_k_count_type_a(n, k):
    assert len(enum_weights(affine_data(f"A{n}~1"), k)) == comb(n + k, n)


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("k", [1, 3])
def test_level_k_count_type_c(n, k):
    # all dual labels of C_n^(1) are 1
    assert len(enum_weights(affine_data(f"C{n}~1"), k)) == comb(n + k, n)


def test_level_zero_rejected():
    with pytest.raises(LevelNonPositive):
        enum_weights(affine_data("A1~1"), 0)


def test_level_zeroth_label_nonnegative():
    d = affine_data("E6~1")
    for w in enum_weights(d, 2):
        assert w.finite.is_dominant() and w.zeroth_label(d) >= 0


@pytest.mark.parametrize("t", DETS)
def test_grading_group_order(t):
    assert grading_group(affine_data(t)).order == DETS[t]


def test_d_even_grading_is_klein():
    assert grading_group(affine_data("D4~1")).factors == (2, 2)
    assert grading_group(affine_data("D5~1")).factors == (4,)


def test_grading_class_additive_and_roots_trivial():
    d = affine_data("A3~1")
    g = grading_group(d)
    for i in range(1, 4):
        assert g.class_map(d.simple_root(i)) == g.zero()
    a, b = FiniteWeight((1, 0, 2)), FiniteWeight((0, 3, 1))
    assert g.class_map(a + b) == g.add(g.class_map(a), g.class_map(b))


def test_non_integral_class_rejected():
    with pytest.raises(NonIntegralWeight):
        grading_group(affine_data("A1~1")).class_map((0.5,))


def test_index_lookup():
    b = enum_weights(affine_data("A2~1"), 2)
    assert b.identity_index == b.index((0, 0))
    assert (1, 1) in b and (3, 0) not in b
    with pytest.raises(WeightNotInBasis):
        b.index((3, 0))


@pytest.mark.parametrize("l", [1, 2, 3])
def test_even_odd_level_sets(l):
    assert all(lemma43_check(l, n) for n in range(1, 4))
    # the next even level gains weights
    d = affine_data(f"A{2 * l}~2")
    assert len(enum_weights(d, 4, "Pupper")) > len(enum_weights(d, 3, "Pupper"))
