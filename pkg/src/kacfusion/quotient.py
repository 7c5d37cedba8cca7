"""Quotients of Verlinde algebras by the primed affine Weyl group.

For an untwisted g with two root lengths, W' = W x (k+h) Q uses the short
highest root for its affine wall. Folding with W' instead of the usual
W x (k+h) nu(Q^vee) defines F_k', which factors through V_{k+h-h^vee}(g) as a
surjective homomorphism G_k. Its image carries the fusion algebra R_k of the
adjacent twisted algebra.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cartan import AffineAlgebraData, FiniteWeight, transpose
from .chars import tensor_decompose_int
from .errors import SingleRootLength
from .fusion import FusionAlgebra, s_matrix, verlinde_algebra
from .twisted import twisted_verlinde
from .weights import WeightBasis, enum_weights, grading_group
from .weyl import Lattice, SignedWeight, fold_affine

__all__ = [
    "QuotientAlgebra",
    "f_k_prime",
    "hong_quotient",
    "two_thirds_check",
    "truncate_and_fold",
    "quotient_verlinde_check",
    "direct_constants",
]


@dataclass(frozen=True, eq=False)
class QuotientAlgebra:
    """R_k realized as G_k(source).

    ``projection[s]`` is (sign, target index) for source index s, or None when
    the source weight lies on a primed wall.
    """

    source: FusionAlgebra
    data: AffineAlgebraData
    basis: WeightBasis
    table: dict
    projection: tuple
    info: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.basis)

    def N(self, i, j, l) -> int:
        return self.table.get((min(i, j), max(i, j)), {}).get(l, 0)

    def product(self, i, j) -> dict:
        return dict(self.table.get((min(i, j), max(i, j)), {}))

    def tensor(self) -> np.ndarray:
        n = len(self)
        t = np.zeros((n, n, n), dtype=np.int64)
        for (i, j), row in self.table.items():
            for l, v in row.items():
                t[i, j, l] = t[j, i, l] = v
        return t

    def L(self, i) -> np.ndarray:
        return self.tensor()[i].T.copy()

    def entries(self) -> list:
        out = []
        for (i, j), row in self.table.items():
            for l, v in row.items():
                out.append((i, j, l, v))
                if i != j:
                    out.append((j, i, l, v))
        return sorted(out)

    def project(self, vec: dict) -> dict:
        """Apply G_k to a source element {source index: coefficient}."""
        out = {}
        for s, a in vec.items():
            p = self.projection[s]
            if p is None:
                continue
            sign, t = p
            out[t] = out.get(t, 0) + sign * a
        return {t: v for t, v in out.items() if v}

    def multiply(self, x: dict, y: dict) -> dict:
        out = {}
        for i, a in x.items():
            for j, b in y.items():
                for l, n in self.product(i, j).items():
                    out[l] = out.get(l, 0) + a * b * n
        return {l: v for l, v in out.items() if v}

    def homomorphism_defect(self) -> list:
        """Source pairs where G_k(x y) differs from G_k(x) G_k(y)."""
        bad = []
        n = len(self.source)
        for i in range(n):
            for j in range(i, n):
                lhs = self.project(self.source.product(i, j))
                rhs = self.multiply(self.project({i: 1}), self.project({j: 1}))
                if lhs != rhs:
                    bad.append((i, j))
        return bad


def _require_two_lengths(data):
    if data.atype.r != 1:
        raise ValueError(f"{data.atype}: primed folding is defined for untwisted types")
    if data.theta_short is None:
        raise SingleRootLength(f"{data.atype} has one root length, so W' = W")


def f_k_prime(data: AffineAlgebraData, k: int, lam) -> SignedWeight:
    """F_k' on a finite irreducible character: fold lam + rho under W x (k+h) Q."""
    _require_two_lengths(data)
    lam = lam if isinstance(lam, FiniteWeight) else FiniteWeight(lam)
    sw = fold_affine(data, k + data.h, Lattice("RootLattice"), lam + data.rho)
    if sw.null:
        return sw
    return SignedWeight(sw.weight - data.rho, sw.sign, False, sw.length)


def _untwisted_for(data):
    """The untwisted algebra whose primed quotient realizes R_k for ``data``."""
    if data.atype.r == 1:
        return data
    return transpose(data)


def hong_quotient(data: AffineAlgebraData, k: int, jobs: int = 1) -> QuotientAlgebra:
    """G_k(V_{k+h-h^vee}(g)) for untwisted g, or R_k(g') = G_k(V_k(g)) for twisted g.

    For A_{2l}^(2) the quotient is V_k itself, returned with the identity projection.
    """
    if data.atype.is_a_even_twisted:
        alg = twisted_verlinde(data, k, jobs)
        proj = tuple((1, i) for i in range(len(alg)))
        return QuotientAlgebra(alg, data, alg.basis, dict(alg.table), proj,
                               {"type": str(data.atype), "level": k, "identity": True})
    g = _untwisted_for(data)
    _require_two_lengths(g)
    src = verlinde_algebra(g, k + g.h - g.h_dual, jobs=jobs)
    basis = enum_weights(g, k, "PrimedPk")
    proj = []
    for w in src.basis:
        sw = f_k_prime(g, k, w.finite)
        proj.append(None if sw.null else (sw.sign, basis.index(sw.weight)))
    proj = tuple(proj)
    src_index = [src.basis.index(w.finite) for w in basis]
    table = {}
    for a in range(len(basis)):
        for b in range(a, len(basis)):
            row = {}
            for s, n in src.product(src_index[a], src_index[b]).items():
                p = proj[s]
                if p is not None:
                    row[p[1]] = row.get(p[1], 0) + p[0] * n
            row = {l: v for l, v in sorted(row.items()) if v}
            if row:
                table[(a, b)] = row
    info = {"type": str(data.atype), "level": k, "untwisted_type": str(g.atype),
            "source_level": k + g.h - g.h_dual}
    return QuotientAlgebra(src, g, basis, table, proj, info)


def direct_constants(q: QuotientAlgebra) -> dict:
    """c_{lm}^n by applying F_k' to finite tensor products, bypassing the source algebra."""
    g = q.data
    k = q.basis.level
    table = {}
    for a, wa in enumerate(q.basis):
        for b in range(a, len(q.basis)):
            wb = q.basis[b]
            row = {}
            for nu, n in tensor_decompose_int(g.atype, wa.finite.to_ints(), wb.finite.to_ints()):
                sw = f_k_prime(g, k, FiniteWeight(nu))
                if not sw.null:
                    t = q.basis.index(sw.weight)
                    row[t] = row.get(t, 0) + sw.sign * n
            row = {l: v for l, v in sorted(row.items()) if v}
            if row:
                table[(a, b)] = row
    return table


def truncate_and_fold(q: QuotientAlgebra) -> list:
    """Left multiplication matrices of the quotient from the source ones.

    Columns are restricted to quotient weights, and each source row is added
    with its sign into the row of its folded weight (rows on walls vanish).
    """
    src = q.source
    n, m = len(src), len(q)
    fold = np.zeros((m, n), dtype=np.int64)
    for s, p in enumerate(q.projection):
        if p is not None:
            fold[p[1], s] = p[0]
    keep = [src.basis.index(w.finite) for w in q.basis]
    return [fold @ src.L(keep[a])[:, keep] for a in range(m)]


def quotient_verlinde_check(q: QuotientAlgebra) -> float:
    """Recompute c from the numeric Verlinde constants of the source; return max deviation."""
    src = q.source
    g = src.basis.data
    s = s_matrix(g, src.basis.level).S
    s0 = s[src.basis.identity_index]
    keep = [src.basis.index(w.finite) for w in q.basis]
    worst = 0.0
    for a in range(len(q)):
        for b in range(a, len(q)):
            raw = np.einsum("p,p,lp->l", s[keep[a]], s[keep[b]], np.conj(s) / s0[None, :])
            want = np.zeros(len(q), dtype=complex)
            for t, p in enumerate(q.projection):
                if p is not None:
                    want[p[1]] += p[0] * raw[t]
            exact = np.zeros(len(q))
            for l, v in q.product(a, b).items():
                exact[l] = v
            worst = max(worst, float(np.abs(want - exact).max()))
    return worst


@dataclass(frozen=True)
class TwoThirdsReport:
    applicable: bool
    violations: list
    negatives: list
    checked: int

    def as_dict(self) -> dict:
        return {
            "applicable": self.applicable,
            "violations": [list(v) for v in self.violations],
            "negatives": [list(v) for v in self.negatives],
            "checked": self.checked,
            "conjecture_holds": not self.violations,
        }


def two_thirds_check(q: QuotientAlgebra, k: int | None = None) -> TwoThirdsReport:
    """Negative constants with at least two of the three weights in the root lattice."""
    k = q.basis.level if k is None else k
    if k % 2:
        return TwoThirdsReport(False, [], [], 0)
    g = grading_group(q.data)
    zero = g.zero()
    in_q = [g.class_map(w.finite) == zero for w in q.basis]
    violations, negatives, checked = [], [], 0
    n = len(q)
    for a in range(n):
        for b in range(n):
            row = q.product(a, b)
            for c in range(n):
                checked += 1
                v = row.get(c, 0)
                if v < 0:
                    negatives.append((a, b, c, v))
                    if in_q[a] + in_q[b] + in_q[c] >= 2:
                        violations.append((a, b, c, v))
    return TwoThirdsReport(True, violations, negatives, checked)
