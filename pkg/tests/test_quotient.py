import pytest

from kacfusion.cartan import FiniteWeight, affine_data
from kacfusion.errors import SingleRootLength
from kacfusion.fusion import verlinde_algebra
from kacfusion.quotient import (quotient_verlinde_check, direct_constants, f_k_prime, hong_quotient,
                                truncate_and_fold, two_thirds_check)


def primed_fold_oracle(d, m, v):
    """Greedy reflection over all positive roots into 0 < <u, alpha^vee> < m.

    The walls of W x mQ are <u, alpha^vee> in mZ for every root alpha.
    """
    roots = [FiniteWeight(d.root_to_labels(r)) for r in d.positive_roots]
    sign = 1
    for _ in range(10000):
        pairs = [d.coroot_pairing(v, r) for r in d.positive_roots]
        if any(p % m == 0 for p in pairs):
            return None
        j = next((i for i, p in enumerate(pairs) if p < 0 or p > m), None)
        if j is None:
            return v, sign
        p = pairs[j]
        shift = 0 if p < 0 else m
        v = v - roots[j] * (p - shift)
        sign = -sign
    raise AssertionError("no convergence")


@pytest.mark.parametrize("t,k", [("B3~1", 2), ("C2~1", 1), ("C2~1", 3), ("G2~1", 2), ("C3~1", 1)])
def test_primed_fold_against_reflection_oracle(t, k):
    d = affine_data(t)
    src = verlinde_algebra(d, k + d.h - d.h_dual, crosscheck=False)
    for w in src.basis:
        got = f_k_prime(d, k, w.finite)
        want = primed_fold_oracle(d, k + d.h, w.finite + d.rho)
        if want is None:
            assert got.null
        else:
            assert not got.null
            assert (got.weight, got.sign) == (want[0] - d.rho, want[1])


def test_a5_twisted_level_one():
    q = hong_quotient(affine_data("A5~2"), 1)
    assert [w.finite.to_ints() for w in q.basis] == [(0, 0, 0), (0, 0, 1)]
    assert q.L(1).tolist() == [[0, 1], [1, 0]]
    assert q.info["untwisted_type"] == "B3~1" and q.info["source_level"] == 2


@pytest.mark.parametrize("t,k", [("A3~2", 2), ("A5~2", 2), ("D4~2", 1), ("D4~3", 2), ("B3~1", 2)])
def test_quotient_is_homomorphic_image(t, k):
    q = hong_quotient(affine_data(t), k)
    assert q.homomorphism_defect() == []
    assert direct_constants(q) == q.table
    assert quotient_verlinde_check(q) < 1e-10
    for a, m in enumerate(truncate_and_fold(q)):
        assert (m == q.L(a)).all()


def test_a_even_quotient_is_identity():
    q = hong_quotient(affine_data("A2~2"), 3)
    assert q.info["identity"] and len(q) == len(q.source)


def test_two_thirds_zero_for_d4_twisted_source_at_level_two():
    rep = two_thirds_check(hong_quotient(affine_data("D4~2"), 2))
    assert rep.applicable and rep.violations == [] and rep.negatives


def test_two_thirds_counterexample_a3_twisted():
    rep = two_thirds_check(hong_quotient(affine_data("A3~2"), 2))
    assert len(rep.violations) == 1 and len(rep.negatives) == 1
    assert rep.as_dict()["conjecture_holds"] is False


def test_two_thirds_odd_level_not_applicable():
    rep = two_thirds_check(hong_quotient(affine_data("A3~2"), 1))
    assert not rep.applicable and rep.checked == 0


def test_single_root_length_rejected():
    with pytest.raises(SingleRootLength):
        f_k_prime(affine_data("A2~1"), 1, (0, 0))
