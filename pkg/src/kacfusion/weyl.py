"""Finite Weyl group action, dominance reduction and affine alcove folding.

All reductions work on integer label vectors: a rational weight is scaled by
the common denominator of its labels (and of the wall positions) first, which
is harmless because every map involved is linear or affine with rational data.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm

import numpy as np

from .cartan import AffineAlgebraData, FiniteWeight, affine_data
from .errors import InvalidLattice, NotRegular, OutOfRange

__all__ = [
    "SignedWeight",
    "AlcoveWord",
    "Lattice",
    "reflect",
    "to_dominant",
    "fold_affine",
    "alcove_reduce_wI",
    "weyl_group",
    "weyl_order",
]


@dataclass(frozen=True)
class SignedWeight:
    """Result of a signed reduction; ``null`` means the input sat on a wall."""

    weight: FiniteWeight | None
    sign: int = 1
    null: bool = False
    length: int = 0

    @classmethod
    def wall(cls) -> "SignedWeight":
        return cls(None, 0, True)

    def __bool__(self):
        return not self.null


@dataclass(frozen=True)
class AlcoveWord:
    """I = (i_1, ..., i_m); the element is w_{i_m} ... w_{i_1}."""

    indices: tuple = ()

    def __len__(self):
        return len(self.indices)

    @property
    def sign(self) -> int:
        return -1 if sum(self.indices) % 2 else 1


@dataclass(frozen=True)
class Lattice:
    """Translation lattice ``multiple * L`` with L = nu(Q^vee) or Q."""

    kind: str
    multiple: int = 1

    def __post_init__(self):
        if self.kind not in ("CoRootImage", "RootLattice"):
            raise InvalidLattice(f"unknown lattice kind {self.kind!r}")
        if not isinstance(self.multiple, int) or self.multiple < 1:
            raise InvalidLattice("lattice multiple must be a positive integer")


def _as_lattice(lattice, data) -> Lattice:
    if lattice is None:
        return Lattice(data.m_lattice)
    if isinstance(lattice, Lattice):
        return lattice
    if isinstance(lattice, str):
        return Lattice(lattice)
    if isinstance(lattice, tuple) and len(lattice) == 2:
        return Lattice(*lattice)
    raise InvalidLattice(f"cannot interpret lattice descriptor {lattice!r}")


def _scaled(v) -> tuple[np.ndarray, int]:
    labels = v.labels if isinstance(v, FiniteWeight) else tuple(Fraction(x) for x in v)
    s = lcm(*(x.denominator for x in labels))
    return np.array([int(x * s) for x in labels], dtype=np.int64), s


def _unscale(arr, s) -> FiniteWeight:
    return FiniteWeight(tuple(Fraction(int(x), s) for x in arr))


def reflect(data: AffineAlgebraData, i: int, w) -> FiniteWeight:
    """s_i(w) = w - <w, alpha_i^vee> alpha_i for 1 <= i <= rank."""
    if not 1 <= i <= data.rank:
        raise ValueError(f"simple reflection index {i} outside 1..{data.rank}")
    w = w if isinstance(w, FiniteWeight) else FiniteWeight(w)
    c = w.labels[i - 1]
    col = [data.finite_cartan[j][i - 1] for j in range(data.rank)]
    return FiniteWeight(tuple(x - c * a for x, a in zip(w.labels, col)))


def _cartan_cols(data) -> np.ndarray:
    # row i = alpha_i in Dynkin labels
    return np.array(data.finite_cartan, dtype=np.int64).T.copy()


def _dominant_int(alphas, v, regular):
    """Reduce an integer label vector to the dominant chamber.

    Returns (v, sign, steps) or None when ``regular`` and a zero label shows up.
    """
    sign, steps = 1, 0
    while True:
        i = int(np.argmin(v))
        if v[i] > 0:
            return v, sign, steps
        if v[i] == 0:
            if regular:
                return None
            # a zero label is fixed by s_i; look at the strictly negative ones only
            neg = np.flatnonzero(v < 0)
            if neg.size == 0:
                return v, sign, steps
            i = int(neg[np.argmin(v[neg])])
        v = v - v[i] * alphas[i]
        sign = -sign
        steps += 1


def to_dominant(data: AffineAlgebraData, w, regular: bool = True) -> SignedWeight:
    """Dominant representative of the W-orbit of ``w`` with the sign of the reducing element.

    With ``regular=True`` (the dot-action use) any zero label met on the way
    makes the result null. ``length`` counts the reflections applied.
    """
    v, s = _scaled(w)
    out = _dominant_int(_cartan_cols(data), v, regular)
    if out is None:
        return SignedWeight.wall()
    v, sign, steps = out
    return SignedWeight(_unscale(v, s), sign, False, steps)


@lru_cache(maxsize=None)
def _wall_data(atype, kind):
    data = affine_data(atype)
    coeffs = data.coroot_coeffs
    # smallest translation parallel to alpha: nu(alpha^vee) = (2/|alpha|^2) alpha, or alpha itself
    if kind == "CoRootImage":
        t = [Fraction(2) / nr for nr in data.root_norms]
    else:
        t = [Fraction(1)] * len(data.root_norms)
    return coeffs, data.positive_roots_labels, tuple(t)


def fold_affine(data: AffineAlgebraData, m: int, lattice, v) -> SignedWeight:
    """Fold v into the open alcove of W x (m L) and report the sign.

    The alcove is {u : all labels > 0 and <u, alpha^vee> < m t_alpha for every
    positive root alpha}, where t_alpha alpha generates the lattice line through
    alpha. Points on a wall give a null result.
    """
    if m < 1:
        raise ValueError("m must be positive")
    lat = _as_lattice(lattice, data)
    coeffs, roots, t = _wall_data(data.atype, lat.kind)
    walls_q = [m * lat.multiple * x for x in t]
    vv, s0 = _scaled(v)
    s = lcm(s0, *(x.denominator for x in walls_q))
    vv = vv * (s // s0)
    walls = np.array([int(x * s) for x in walls_q], dtype=np.int64)
    alphas = _cartan_cols(data)
    sign = 1
    steps = 0
    while True:
        out = _dominant_int(alphas, vv, True)
        if out is None:
            return SignedWeight.wall()
        vv, sg, st = out
        sign *= sg
        steps += st
        excess = coeffs @ vv - walls
        if np.any(excess == 0):
            return SignedWeight.wall()
        a = int(np.argmax(excess))
        if excess[a] < 0:
            return SignedWeight(_unscale(vv, s), sign, False, steps)
        vv = vv - excess[a] * roots[a]
        sign = -sign
        steps += 1


def alcove_reduce_wI(data: AffineAlgebraData, k: int, v) -> tuple[SignedWeight, AlcoveWord]:
    """Explicit alcove reduction for A_{2l}^(2) by the words w_i = s_{i-1} ... s_0.

    ``v`` stands for lambda + rho. Each round applies s_0 and then s_1, s_2, ...
    until the weight is dominant, recording how many generators were used.
    Rounds repeat while (v, theta) > k + h^vee.
    """
    if not data.atype.is_a_even_twisted:
        raise ValueError("alcove_reduce_wI needs A_{2l}^(2) data")
    n = k + data.h_dual
    l = data.rank
    v = v if isinstance(v, FiniteWeight) else FiniteWeight(v)
    if not v.is_regular_dominant():
        raise NotRegular(f"{v} is not regular dominant")
    if data.inner(v, data.theta) >= 2 * n:
        raise OutOfRange(f"(v, theta) must stay below {2 * n}")
    word = []
    while True:
        pair = data.inner(v, data.theta)
        if pair == n:
            raise NotRegular(f"{v} lies on the affine wall")
        if pair < n:
            break
        b1 = data.theta_vee(v)
        cur = FiniteWeight((v[0] + n - 2 * b1,) + v.labels[1:])
        i = 1
        while True:
            if any(x == 0 for x in cur):
                raise NotRegular(f"{v} has a nontrivial stabilizer")
            if cur.is_regular_dominant():
                break
            if i == l:
                raise AssertionError("w_l(v) must be dominant")
            cur = reflect(data, i, cur)
            i += 1
        word.append(i)
        v = cur
        if len(word) > n:
            raise AssertionError("alcove word exceeded k + h^vee steps")
    w = AlcoveWord(tuple(word))
    return SignedWeight(v, w.sign, False, sum(word)), w


@lru_cache(maxsize=None)
def weyl_group(atype) -> tuple[np.ndarray, np.ndarray]:
    """All elements of the finite Weyl group as integer matrices acting on labels.

    Returns (mats, signs) with mats of shape (|W|, l, l). Elements are found by
    breadth-first search on the (free) orbit of rho.
    """
    data = affine_data(atype)
    l = data.rank
    alphas = _cartan_cols(data)
    gens = []
    for i in range(l):
        g = np.eye(l, dtype=np.int64)
        g[:, i] -= alphas[i]
        gens.append(g)
    rho = np.ones(l, dtype=np.int64)
    seen = {tuple(rho): (np.eye(l, dtype=np.int64), 1)}
    layer = [tuple(rho)]
    while layer:
        nxt = []
        for key in layer:
            mat, sg = seen[key]
            for g in gens:
                new = g @ mat
                img = tuple(new @ rho)
                if img not in seen:
                    seen[img] = (new, -sg)
                    nxt.append(img)
        layer = nxt
    mats = np.array([m for m, _ in seen.values()])
    signs = np.array([s for _, s in seen.values()], dtype=np.int64)
    return mats, signs


def weyl_order(data: AffineAlgebraData) -> int:
    """|W| = l! * |P/Q| * prod of the highest-root coefficients, without enumeration."""
    from math import factorial
    from ._linalg import determinant
    out = factorial(data.rank) * abs(int(determinant([list(r) for r in data.finite_cartan])))
    for a in data.positive_roots[-1]:
        out *= a
    return out
