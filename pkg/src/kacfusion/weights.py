"""Level-k dominant weight sets and the grading group P/Q."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd

from . import _linalg as la
from .cartan import AffineAlgebraData, FiniteWeight, LevelWeight, affine_data
from .errors import LevelNonPositive, NonIntegralWeight, WeightNotInBasis

__all__ = [
    "VARIANTS",
    "WeightBasis",
    "GradingGroup",
    "enum_weights",
    "grading_group",
    "lemma43_check",
    "weight_to_json",
    "weight_from_json",
]

VARIANTS = ("Pk", "Pupper", "PrimedPk")


def canonical_key(labels):
    """Graded lexicographic: total label sum first, then labels ascending."""
    return (sum(labels), tuple(labels))


@dataclass(frozen=True, eq=False)
class WeightBasis:
    data: AffineAlgebraData
    level: int
    variant: str
    weights: tuple
    _index: dict = field(repr=False, compare=False, default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "_index", {w.finite: i for i, w in enumerate(self.weights)})

    def __len__(self):
        return len(self.weights)

    def __iter__(self):
        return iter(self.weights)

    def __getitem__(self, i) -> LevelWeight:
        return self.weights[i]

    def index(self, w) -> int:
        """Position of a weight given as LevelWeight, FiniteWeight or label tuple."""
        fin = w.finite if isinstance(w, LevelWeight) else w
        if not isinstance(fin, FiniteWeight):
            fin = FiniteWeight(fin)
        try:
            return self._index[fin]
        except KeyError:
            raise WeightNotInBasis(f"{fin} is not in the level-{self.level} basis") from None

    def __contains__(self, w) -> bool:
        try:
            self.index(w)
            return True
        except WeightNotInBasis:
            return False

    @property
    def finite(self) -> list:
        return [w.finite for w in self.weights]

    @property
    def identity_index(self) -> int:
        return self.index(FiniteWeight.zero(self.data.rank))

    def to_json(self) -> list:
        return [weight_to_json(w) for w in self.weights]


def _bounded_vectors(weights, bound):
    """Nonnegative integer vectors x with sum weights_i x_i <= bound."""
    def rec(i, left):
        if i == len(weights):
            yield ()
            return
        for x in range(left // weights[i] + 1):
            for rest in rec(i + 1, left - x * weights[i]):
                yield (x,) + rest
    return list(rec(0, bound))


def enum_weights(data: AffineAlgebraData, k: int, variant: str = "Pk") -> WeightBasis:
    """Enumerate a level-k weight basis in canonical order.

    Pupper: integral dominant with sum a_i^vee lambda_i <= k.
    Pk: as Pupper when M = nu(Q^vee); when M = Q the labels become
        (a_i/a_i^vee) m_i with sum a_i m_i <= k.
    PrimedPk: integral dominant with <lambda, theta_s^vee> <= k (theta when
        there is one root length).
    """
    if not isinstance(k, int) or k < 1:
        raise LevelNonPositive(f"level must be a positive integer, got {k!r}")
    if variant not in VARIANTS:
        raise ValueError(f"unknown weight-set variant {variant!r}")
    l = data.rank
    dual = data.dual_labels[1:]
    if variant == "Pupper" or (variant == "Pk" and data.m_lattice == "CoRootImage"):
        vecs = [tuple(Fraction(x) for x in v) for v in _bounded_vectors(dual, k)]
    elif variant == "Pk":
        lab = data.labels[1:]
        vecs = [tuple(Fraction(lab[i], dual[i]) * m[i] for i in range(l))
                for m in _bounded_vectors(lab, k)]
    else:
        wall = data.theta_short if data.theta_short is not None else data.theta
        sn = data.simple_root_norms
        nr = data.norm2(wall)
        # <lambda, wall^vee> = sum_i c_i lambda_i with integer c_i
        coords = _root_coords(data, wall)
        c = [int(coords[i] * sn[i] / nr) for i in range(l)]
        vecs = [tuple(Fraction(x) for x in v) for v in _bounded_vectors(c, k)]
    vecs.sort(key=canonical_key)
    return WeightBasis(data, k, variant, tuple(LevelWeight(FiniteWeight(v), k) for v in vecs))


def _root_coords(data, w):
    inv = la.inverse([list(r) for r in data.finite_cartan])
    return la.matvec(inv, list(w.labels))


@dataclass(frozen=True)
class GradingGroup:
    """P/Q as a product of cyclic groups Z/d_1 x Z/d_2 x ..."""

    factors: tuple
    rows: tuple  # one integer row per factor: class_i(x) = rows[i] . x mod factors[i]

    @property
    def order(self) -> int:
        out = 1
        for d in self.factors:
            out *= d
        return out

    def class_map(self, w) -> tuple:
        labels = w.labels if isinstance(w, FiniteWeight) else tuple(Fraction(x) for x in w)
        if any(Fraction(x).denominator != 1 for x in labels):
            raise NonIntegralWeight(f"{labels} has non-integral labels")
        return tuple(sum(int(r) * int(x) for r, x in zip(row, labels)) % d
                     for row, d in zip(self.rows, self.factors))

    def add(self, a, b) -> tuple:
        return tuple((x + y) % d for x, y, d in zip(a, b, self.factors))

    def zero(self) -> tuple:
        return (0,) * len(self.factors)

    def elements(self) -> list:
        return list(itertools.product(*(range(d) for d in self.factors)))


@lru_cache(maxsize=None)
def _grading_group(atype) -> GradingGroup:
    data = affine_data(atype)
    a = [list(r) for r in data.finite_cartan]
    u, d, _ = la.smith_normal_form(a)
    factors, rows = [], []
    for i in range(len(a)):
        di = d[i][i]
        if di > 1:
            row = [x % di for x in u[i]]
            # rescale so the first fundamental weight with a unit residue has class 1
            for x in row:
                if x and gcd(x, di) == 1:
                    inv = pow(x, -1, di)
                    row = [(y * inv) % di for y in row]
                    break
            factors.append(di)
            rows.append(tuple(row))
    return GradingGroup(tuple(factors), tuple(rows))


def grading_group(data: AffineAlgebraData) -> GradingGroup:
    """Invariant factors of the finite Cartan matrix and the induced class map."""
    return _grading_group(data.atype)


def lemma43_check(l: int, n: int) -> bool:
    """Whether the level 2n and 2n+1 dominant sets of A_{2l}^(2) coincide."""
    data = affine_data(f"A{2 * l}~2")
    even = enum_weights(data, 2 * n, "Pupper").finite
    odd = enum_weights(data, 2 * n + 1, "Pupper").finite
    return set(even) == set(odd)


def weight_to_json(w: LevelWeight) -> dict:
    return {"labels": [str(x) for x in w.finite.labels], "level": w.level}


def weight_from_json(obj: dict) -> LevelWeight:
    return LevelWeight(FiniteWeight(tuple(Fraction(x) for x in obj["labels"])), int(obj["level"]))
