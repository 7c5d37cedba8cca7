"""Exact linear algebra on list-of-rows matrices, backed by sympy.

Callers work with Fractions and ints; sympy Rationals are converted at the
boundary so nothing else in the package depends on sympy types.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache, reduce
from math import gcd, lcm

import sympy
from sympy.matrices.normalforms import smith_normal_decomp
from sympy.polys.domains import ZZ


def _frac(x) -> Fraction:
    x = sympy.Rational(x) if not isinstance(x, sympy.Basic) else x
    return Fraction(int(x.p), int(x.q))


def _to_sympy(a) -> sympy.Matrix:
    return sympy.Matrix([[sympy.Rational(Fraction(x).numerator, Fraction(x).denominator)
                          for x in row] for row in a])


def _freeze(a) -> tuple:
    return tuple(tuple(Fraction(x) for x in row) for row in a)


def transpose(a):
    return [list(col) for col in zip(*a)]


def matmul(a, b):
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(a, v):
    return [sum(x * y for x, y in zip(row, v)) for row in a]


@lru_cache(maxsize=4096)
def _inverse(key):
    m = _to_sympy(key)
    if m.det() == 0:
        raise ValueError("singular matrix")
    inv = m.inv()
    return tuple(tuple(_frac(x) for x in inv.row(i)) for i in range(inv.rows))


def inverse(a):
    """Exact inverse. Raises ValueError if singular."""
    return [list(r) for r in _inverse(_freeze(a))]


@lru_cache(maxsize=4096)
def _determinant(key):
    return _frac(_to_sympy(key).det())


def determinant(a):
    return _determinant(_freeze(a))


def primitive_null_vector(a):
    """Primitive integer vector spanning the kernel of a corank-1 integer matrix.

    The sign is chosen so the first nonzero entry is positive.
    """
    ker = _to_sympy(a).nullspace()
    if len(ker) != 1:
        raise ValueError(f"expected corank 1, got corank {len(ker)}")
    vec = [_frac(x) for x in ker[0]]
    den = lcm(*(x.denominator for x in vec))
    ints = [int(x * den) for x in vec]
    g = reduce(gcd, (abs(x) for x in ints))
    ints = [x // g for x in ints]
    first = next(x for x in ints if x)
    return [x if first > 0 else -x for x in ints]


def smith_normal_form(a):
    """Return (U, D, V) with U*a*V = D diagonal, U and V unimodular.

    Diagonal entries are nonnegative and each divides the next.
    """
    m = sympy.Matrix([[int(x) for x in row] for row in a])
    d, u, v = smith_normal_decomp(m, domain=ZZ)
    d, u, v = (M.tolist() for M in (d, u, v))
    d = [[int(x) for x in row] for row in d]
    u = [[int(x) for x in row] for row in u]
    v = [[int(x) for x in row] for row in v]
    for s in range(min(len(d), len(d[0]))):
        if d[s][s] < 0:
            d[s] = [-x for x in d[s]]
            u[s] = [-x for x in u[s]]
    return u, d, v


def integer_kernel(a):
    """Basis (list of integer vectors) of {x in Z^n : a x = 0}."""
    u, d, v = smith_normal_form(a)
    rank = sum(1 for i in range(min(len(d), len(d[0]))) if d[i][i])
    n = len(a[0])
    return [[v[r][c] for r in range(n)] for c in range(rank, n)]


def lattice_intersection(b1, b2):
    """Generators of the intersection of two full-rank rational lattices.

    b1, b2 are lists of basis vectors (rows) with Fraction entries.
    """
    den = lcm(*(Fraction(x).denominator for vec in b1 + b2 for x in vec))
    i1 = [[int(Fraction(x) * den) for x in vec] for vec in b1]
    i2 = [[int(Fraction(x) * den) for x in vec] for vec in b2]
    n = len(i1[0])
    # columns: b1 vectors then -b2 vectors
    mat = [[i1[c][r] for c in range(len(i1))] + [-i2[c][r] for c in range(len(i2))]
           for r in range(n)]
    gens = []
    for kv in integer_kernel(mat):
        coeffs = kv[:len(i1)]
        vec = [Fraction(sum(c * i1[j][r] for j, c in enumerate(coeffs)), den) for r in range(n)]
        if any(vec):
            gens.append(vec)
    return gens
