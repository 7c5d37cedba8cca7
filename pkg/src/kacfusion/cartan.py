"""Static data of affine Kac-Moody algebras X_N^(r).

Conventions follow Kac's tables: the Cartan matrix entry ``a_ij`` is
<alpha_i^vee, alpha_j>, so the Dynkin labels of the simple root alpha_j are
column j of the finite Cartan matrix, and ``A @ labels == 0``.

Weights are always stored as Dynkin labels (pairings with simple coroots)
modulo C*delta; the level is carried separately.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache

import numpy as np

from . import _linalg as la
from .errors import UnknownType

__all__ = [
    "AffineType",
    "AffineAlgebraData",
    "FiniteWeight",
    "LevelWeight",
    "affine_data",
    "weight_gram",
    "transpose",
    "parse_type",
]


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, (float, np.floating)):
        raise TypeError("FiniteWeight labels must be exact (int, Fraction or 'p/q' string)")
    return Fraction(int(x))


@dataclass(frozen=True)
class FiniteWeight:
    """Weight of the underlying simple algebra, as exact rational Dynkin labels."""

    labels: tuple

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(_frac(x) for x in self.labels))

    @classmethod
    def of(cls, *labels) -> "FiniteWeight":
        return cls(labels)

    @classmethod
    def zero(cls, rank: int) -> "FiniteWeight":
        return cls((0,) * rank)

    @classmethod
    def fundamental(cls, rank: int, i: int) -> "FiniteWeight":
        """Lambda_i for 1 <= i <= rank."""
        return cls(tuple(int(j == i - 1) for j in range(rank)))

    @classmethod
    def rho(cls, rank: int) -> "FiniteWeight":
        return cls((1,) * rank)

    def __len__(self):
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)

    def __getitem__(self, i):
        return self.labels[i]

    def __add__(self, other):
        return FiniteWeight(tuple(a + b for a, b in zip(self.labels, _labels(other))))

    def __sub__(self, other):
        return FiniteWeight(tuple(a - b for a, b in zip(self.labels, _labels(other))))

    def __neg__(self):
        return FiniteWeight(tuple(-a for a in self.labels))

    def __mul__(self, c):
        c = _frac(c)
        return FiniteWeight(tuple(c * a for a in self.labels))

    __rmul__ = __mul__

    def is_integral(self) -> bool:
        return all(a.denominator == 1 for a in self.labels)

    def is_dominant(self) -> bool:
        return all(a >= 0 for a in self.labels)

    def is_regular_dominant(self) -> bool:
        return all(a > 0 for a in self.labels)

    def to_ints(self) -> tuple:
        if not self.is_integral():
            raise ValueError(f"{self} has non-integral labels")
        return tuple(int(a) for a in self.labels)

    def __str__(self):
        return "(" + ", ".join(str(a) for a in self.labels) + ")"


def _labels(w):
    return w.labels if isinstance(w, FiniteWeight) else tuple(_frac(x) for x in w)


@dataclass(frozen=True)
class LevelWeight:
    """k*Lambda_0 + finite part, modulo C*delta."""

    finite: FiniteWeight
    level: int

    def __post_init__(self):
        if not isinstance(self.finite, FiniteWeight):
            object.__setattr__(self, "finite", FiniteWeight(self.finite))

    def zeroth_label(self, data: "AffineAlgebraData") -> Fraction:
        """<lambda, alpha_0^vee> = k - sum_{i>=1} a_i^vee lambda_i."""
        return Fraction(self.level) - sum(
            Fraction(a) * x for a, x in zip(data.dual_labels[1:], self.finite.labels))

    def __str__(self):
        return f"{self.finite}@{self.level}"


_TYPE_RE = re.compile(r"^\s*([A-Ga-g])\s*_?\s*(\d+)\s*(?:[~^]\s*\(?\s*(\d)\s*\)?)?\s*$")


@dataclass(frozen=True)
class AffineType:
    family: str
    n: int
    r: int = 1

    def __post_init__(self):
        object.__setattr__(self, "family", self.family.upper())
        if not _valid_type(self.family, self.n, self.r):
            raise UnknownType(f"{self.family}_{self.n}^({self.r}) is not an affine diagram")

    @classmethod
    def parse(cls, text: str) -> "AffineType":
        """Parse ``"A2~1"``-style strings (``~r`` optional, default 1)."""
        m = _TYPE_RE.match(text)
        if not m:
            raise UnknownType(f"cannot parse type string {text!r}")
        fam, n, r = m.group(1), int(m.group(2)), int(m.group(3) or 1)
        return cls(fam, n, r)

    @property
    def twisted(self) -> bool:
        return self.r > 1

    @property
    def is_a_even_twisted(self) -> bool:
        """True for A_{2l}^(2)."""
        return self.family == "A" and self.r == 2 and self.n % 2 == 0

    def __str__(self):
        return f"{self.family}{self.n}~{self.r}"


def _valid_type(fam, n, r):
    if n < 1:
        return False
    if r == 1:
        return ((fam == "A" and n >= 1) or (fam == "B" and n >= 3) or (fam == "C" and n >= 1)
                or (fam == "D" and n >= 4) or (fam == "E" and n in (6, 7, 8))
                or (fam == "F" and n == 4) or (fam == "G" and n == 2))
    if r == 2:
        return (fam == "A" and n >= 2) or (fam == "D" and n >= 3) or (fam == "E" and n == 6)
    if r == 3:
        return fam == "D" and n == 4
    return False


def parse_type(text) -> AffineType:
    return text if isinstance(text, AffineType) else AffineType.parse(text)


# ---------------------------------------------------------------------------
# finite Cartan matrices (Kac convention, Bourbaki numbering; G2 has alpha_1 long)

def _finite_cartan(fam: str, n: int):
    c = [[2 if i == j else 0 for j in range(n)] for i in range(n)]

    def bond(i, j, aij=-1, aji=-1):
        c[i - 1][j - 1] = aij
        c[j - 1][i - 1] = aji

    if fam == "A":
        for i in range(1, n):
            bond(i, i + 1)
    elif fam == "B":
        for i in range(1, n - 1):
            bond(i, i + 1)
        bond(n - 1, n, -1, -2)
    elif fam == "C":
        for i in range(1, n - 1):
            bond(i, i + 1)
        if n >= 2:
            bond(n - 1, n, -2, -1)
    elif fam == "D":
        for i in range(1, n - 1):
            bond(i, i + 1)
        bond(n - 2, n)
    elif fam == "E":
        bond(1, 3)
        bond(2, 4)
        for i in range(3, n):
            bond(i, i + 1)
    elif fam == "F":
        bond(1, 2)
        bond(2, 3, -1, -2)
        bond(3, 4)
    elif fam == "G":
        bond(1, 2, -1, -3)
    else:
        raise UnknownType(fam)
    return c


def _symmetrizer(c):
    """d_i = (alpha_i, alpha_i)/2 up to a common scale, with d_i a_ij = d_j a_ji."""
    n = len(c)
    d = [None] * n
    d[0] = Fraction(1)
    stack = [0]
    while stack:
        i = stack.pop()
        for j in range(n):
            if j != i and c[i][j] and d[j] is None:
                d[j] = d[i] * c[i][j] / c[j][i]
                stack.append(j)
    return d


def _positive_roots(c):
    """Positive roots in simple-root coordinates, sorted by height then lex."""
    n = len(c)
    simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    roots = set(simple)
    layer = list(simple)
    while layer:
        nxt = []
        for beta in layer:
            for i in range(n):
                # alpha_i string through beta: beta - p alpha_i, ..., beta + q alpha_i
                p = 0
                b = list(beta)
                while True:
                    b[i] -= 1
                    if tuple(b) in roots:
                        p += 1
                    else:
                        break
                pairing = sum(c[i][j] * beta[j] for j in range(n))
                q = p - pairing
                if q > 0:
                    new = list(beta)
                    new[i] += 1
                    new = tuple(new)
                    if new not in roots:
                        roots.add(new)
                        nxt.append(new)
        layer = nxt
    return sorted(roots, key=lambda r: (sum(r), r))


def _untwisted_cartan(fam, n):
    c = _finite_cartan(fam, n)
    d = _symmetrizer(c)
    roots = _positive_roots(c)
    theta = roots[-1]
    # (theta, alpha_j) with (alpha_i, alpha_j) = d_i a_ij
    th_a = [sum(theta[i] * d[i] * c[i][j] for i in range(n)) for j in range(n)]
    th_th = sum(theta[j] * th_a[j] for j in range(n))
    a = [[2] + [int(-2 * th_a[j] / th_th) for j in range(n)]]
    for i in range(n):
        a.append([-sum(c[i][j] * theta[j] for j in range(n))] + c[i])
    return a


def _a_even_twisted_cartan(l):
    if l == 1:
        return [[2, -4], [-1, 2]]
    a = [[2 if i == j else 0 for j in range(l + 1)] for i in range(l + 1)]
    a[0][1], a[1][0] = -2, -1
    for i in range(1, l):
        a[i][i + 1] = a[i + 1][i] = -1
    a[l - 1][l], a[l][l - 1] = -2, -1
    return a


# twisted (not A_{2l}^(2)) -> untwisted transpose, keyed on (family, n, r)
def _transpose_key(fam, n, r):
    if r == 1:
        if fam == "B":
            return ("A", 2 * n - 1, 2)
        if fam == "C":
            if n == 1:
                return ("C", 1, 1)
            return ("D", n + 1, 2)
        if fam == "F":
            return ("E", 6, 2)
        if fam == "G":
            return ("D", 4, 3)
        return (fam, n, 1)
    if fam == "A" and n % 2 == 0:
        return (fam, n, r)
    if fam == "A":
        l = (n + 1) // 2
        return ("B", l, 1) if l >= 3 else ("C", 2, 1)
    if fam == "D" and r == 2:
        return ("C", n - 1, 1)
    if fam == "E":
        return ("F", 4, 1)
    return ("G", 2, 1)


def _cartan_for(fam, n, r):
    if r == 1:
        return _untwisted_cartan(fam, n)
    if fam == "A" and n % 2 == 0:
        return _a_even_twisted_cartan(n // 2)
    tf, tn, _ = _transpose_key(fam, n, r)
    return la.transpose(_untwisted_cartan(tf, tn))


@dataclass(frozen=True, eq=False)
class AffineAlgebraData:
    """Complete static data of one affine type. Build through :func:`affine_data`."""

    atype: AffineType
    rank: int
    cartan: tuple
    finite_cartan: tuple
    labels: tuple
    dual_labels: tuple
    h: int
    h_dual: int
    theta: FiniteWeight
    theta_roots: tuple
    theta_short: FiniteWeight | None
    gram: tuple
    m_lattice: str
    m_basis: tuple = field(repr=False)

    # ---- exact helpers -------------------------------------------------
    def inner(self, u, v) -> Fraction:
        """(u, v) for two weights given by Dynkin labels."""
        u, v = _labels(u), _labels(v)
        return sum(u[i] * self.gram[i][j] * v[j]
                   for i in range(self.rank) for j in range(self.rank))

    def norm2(self, u) -> Fraction:
        return self.inner(u, u)

    def coroot_pairing(self, v, root_coords) -> Fraction:
        """<v, alpha^vee> for the root alpha given in simple-root coordinates."""
        v = _labels(v)
        lab = self.root_to_labels(root_coords)
        return 2 * self.inner(v, lab) / self.norm2(lab)

    def theta_vee(self, v) -> Fraction:
        """<v, theta^vee> = 2 (v, theta) / (theta, theta)."""
        return 2 * self.inner(v, self.theta) / self.norm2(self.theta)

    def root_to_labels(self, root_coords) -> tuple:
        fc = self.finite_cartan
        return tuple(sum(fc[i][j] * root_coords[j] for j in range(self.rank))
                     for i in range(self.rank))

    def simple_root(self, i: int) -> FiniteWeight:
        """alpha_i (1 <= i <= rank) in Dynkin labels."""
        return FiniteWeight(tuple(self.finite_cartan[j][i - 1] for j in range(self.rank)))

    @property
    def rho(self) -> FiniteWeight:
        return FiniteWeight.rho(self.rank)

    @property
    def is_untwisted(self) -> bool:
        return self.atype.r == 1

    # ---- root system ---------------------------------------------------
    @cached_property
    def positive_roots(self) -> tuple:
        """Positive roots of the finite root system, simple-root coordinates."""
        return tuple(_positive_roots([list(r) for r in self.finite_cartan]))

    @cached_property
    def positive_roots_labels(self) -> np.ndarray:
        return np.array([self.root_to_labels(r) for r in self.positive_roots], dtype=np.int64)

    @cached_property
    def simple_root_norms(self) -> tuple:
        """(alpha_i, alpha_i) = 2 a_i^vee / a_i."""
        return tuple(Fraction(2 * self.dual_labels[i], self.labels[i])
                     for i in range(1, self.rank + 1))

    @cached_property
    def root_norms(self) -> tuple:
        sn = self.simple_root_norms
        out = []
        for r in self.positive_roots:
            lab = self.root_to_labels(r)
            # (alpha, alpha) = sum_i c_i (alpha_i, alpha_i)/2 * <alpha, alpha_i^vee>
            out.append(sum(Fraction(r[i]) * sn[i] / 2 * lab[i] for i in range(self.rank)))
        return tuple(out)

    @cached_property
    def coroot_coeffs(self) -> np.ndarray:
        """Row a gives the integer coefficients with <v, alpha_a^vee> = row . v."""
        sn = self.simple_root_norms
        rows = []
        for r, nr in zip(self.positive_roots, self.root_norms):
            row = [Fraction(r[i]) * sn[i] / nr for i in range(self.rank)]
            assert all(x.denominator == 1 for x in row)
            rows.append([int(x) for x in row])
        return np.array(rows, dtype=np.int64)

    @cached_property
    def gram_array(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.gram])

    @cached_property
    def gram_scaled(self) -> tuple:
        """(D, G) with integer matrix G = D * gram."""
        from math import lcm
        den = lcm(*(x.denominator for row in self.gram for x in row))
        g = np.array([[int(x * den) for x in row] for row in self.gram], dtype=np.int64)
        return den, g

    @property
    def multiple_root_lengths(self) -> bool:
        return len(set(self.root_norms)) > 1

    def __repr__(self):
        return f"AffineAlgebraData({self.atype})"

    def __eq__(self, other):
        return isinstance(other, AffineAlgebraData) and self.atype == other.atype

    def __hash__(self):
        return hash(self.atype)


def _check(cond, msg):
    if not cond:
        raise AssertionError(f"inconsistent affine data: {msg}")


@lru_cache(maxsize=None)
def affine_data(atype) -> AffineAlgebraData:
    """Cartan, labels, forms and lattice data for ``atype`` (AffineType or string)."""
    atype = parse_type(atype)
    fam, n, r = atype.family, atype.n, atype.r
    a = _cartan_for(fam, n, r)
    l = len(a) - 1
    labels = la.primitive_null_vector(a)
    dual = la.primitive_null_vector(la.transpose(a))
    _check(all(x > 0 for x in labels) and all(x > 0 for x in dual), "labels must be positive")
    _check(dual[0] == 1, "a_0^vee must be 1")
    if r == 1:
        _check(labels[0] == 1, "untwisted a_0 must be 1")
    fin = [row[1:] for row in a[1:]]

    # (alpha_i, alpha_j) = a_i^vee / a_i * a_ij on the finite part
    g_alpha = [[Fraction(dual[i + 1], labels[i + 1]) * fin[i][j] for j in range(l)]
               for i in range(l)]
    _check(g_alpha == la.transpose(g_alpha), "root form must be symmetric")
    inv = la.inverse(fin)
    gram = la.matmul(la.matmul(la.transpose(inv), g_alpha), inv)
    _check(gram == la.transpose(gram), "gram symmetric")
    _check(all(la.determinant([row[:m] for row in gram[:m]]) > 0 for m in range(1, l + 1)),
           "gram positive definite")

    theta = FiniteWeight(tuple(-labels[0] * a[i][0] for i in range(1, l + 1)))
    theta_roots = tuple(labels[1:])
    # theta = sum_{i>=1} a_i alpha_i must agree with -a_0 * alpha_0-bar
    lab_from_roots = tuple(sum(fin[i][j] * theta_roots[j] for j in range(l)) for i in range(l))
    _check(lab_from_roots == theta.labels, "theta in labels vs root coordinates")

    m_kind = "CoRootImage" if r == labels[0] else "RootLattice"
    if m_kind == "CoRootImage":
        cols = [[Fraction(labels[i + 1], dual[i + 1]) * fin[j][i] for j in range(l)]
                for i in range(l)]
    else:
        cols = [[Fraction(fin[j][i]) for j in range(l)] for i in range(l)]

    data = AffineAlgebraData(
        atype=atype,
        rank=l,
        cartan=tuple(tuple(row) for row in a),
        finite_cartan=tuple(tuple(row) for row in fin),
        labels=tuple(labels),
        dual_labels=tuple(dual),
        h=sum(labels),
        h_dual=sum(dual),
        theta=theta,
        theta_roots=theta_roots,
        theta_short=None,
        gram=tuple(tuple(row) for row in gram),
        m_lattice=m_kind,
        m_basis=tuple(tuple(c) for c in cols),
    )
    if data.multiple_root_lengths:
        short = min(data.root_norms)
        cands = [r_ for r_, nr in zip(data.positive_roots, data.root_norms) if nr == short]
        object.__setattr__(data, "theta_short", FiniteWeight(data.root_to_labels(cands[-1])))
    # theta is the highest long root unless r = a_0 > 1, where it is the highest short one
    want = min(data.root_norms) if (r > 1 and labels[0] == 1) else max(data.root_norms)
    _check(data.norm2(data.theta) == want, "theta has the wrong length")
    return data


def weight_gram(data: AffineAlgebraData) -> list:
    """Matrix of inner products (Lambda_i-bar, Lambda_j-bar) as Fractions."""
    return [list(row) for row in data.gram]


def transpose(data: AffineAlgebraData) -> AffineAlgebraData:
    """Data of the transpose algebra g(A^t).

    A_{2l}^(2) is its own transpose only after reversing the node order, so
    for that family the data itself is returned.
    """
    t = affine_data(AffineType(*_transpose_key(data.atype.family, data.atype.n, data.atype.r)))
    at = tuple(zip(*data.cartan))
    if data.atype.is_a_even_twisted:
        at = tuple(tuple(row[::-1]) for row in at[::-1])
    _check(t.cartan == at, "transpose lookup must transpose A")
    return t
