"""Twisted Verlinde algebras.

Twisted types other than A_{2l}^(2) are handled through the transpose
algebra: V_k(g) is identified with the untwisted algebra V_{k+h^vee-h}(g^t),
and the twisted characters sit inside it through the shifted map
lambda -> tau(lambda + rho) - rho^t.

For A_{2l}^(2) the algebra is built directly as the quotient of the
representation ring of the finite part (type C_l) by the dot action of
W x (k + 2l + 1) nu(Q^vee), with its own S-matrix as a cross-check.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .cartan import AffineAlgebraData, FiniteWeight, LevelWeight, affine_data, transpose
from .errors import NotDominant, OutOfRange, UntwistedType
from .fusion import (FusionAlgebra, _crosscheck, _kw_table, fusion_verlinde,
                     s_matrix, verlinde_algebra)
from .weights import enum_weights, grading_group

__all__ = [
    "TauMap",
    "tau_map",
    "bullet_tau",
    "twisted_verlinde",
    "a2_even_product",
    "sign_twist_check",
    "odd_level_s_match",
    "odd_level_tensor_match",
    "match_columns",
]


@dataclass(frozen=True)
class TauMap:
    source: AffineAlgebraData
    target: AffineAlgebraData
    scales: tuple  # a_i^vee / a_i for i = 1..l
    shift: int  # h^vee - h of the source

    def tau(self, w) -> FiniteWeight:
        w = w if isinstance(w, FiniteWeight) else FiniteWeight(w)
        return FiniteWeight(tuple(s * x for s, x in zip(self.scales, w.labels)))


def tau_map(data: AffineAlgebraData) -> TauMap:
    if data.atype.r == 1:
        raise UntwistedType(f"{data.atype} is untwisted")
    if data.atype.is_a_even_twisted:
        raise ValueError("A_{2l}^(2) has no transpose shift; it is handled directly")
    scales = tuple(Fraction(data.dual_labels[i], data.labels[i]) for i in range(1, data.rank + 1))
    return TauMap(data, transpose(data), scales, data.h_dual - data.h)


def bullet_tau(tm: TauMap, lam: LevelWeight) -> LevelWeight:
    """lambda -> tau(lambda + rho) - rho^t, raising the level by h^vee - h."""
    if not lam.finite.is_dominant() or lam.zeroth_label(tm.source) < 0:
        raise NotDominant(f"{lam} is not dominant for {tm.source.atype}")
    img = tm.tau(lam.finite + tm.source.rho) - tm.target.rho
    out = LevelWeight(img, lam.level + tm.shift)
    if not img.is_dominant() or out.zeroth_label(tm.target) < 0:
        raise AssertionError(f"shifted image of {lam} left the dominant chamber")
    return out


def twisted_verlinde(data: AffineAlgebraData, k: int, jobs: int = 1) -> FusionAlgebra:
    """V_k of a twisted affine algebra."""
    if data.atype.r == 1:
        raise UntwistedType(f"{data.atype} is untwisted; use verlinde_algebra")
    if data.atype.is_a_even_twisted:
        basis = enum_weights(data, k, "Pk")
        table = _kw_table(data, k, basis, jobs)
        pairs = [(i, j) for i in range(len(basis)) for j in range(i, len(basis))]
        residue = _crosscheck(data, k, basis, table, pairs)
        info = {"type": str(data.atype), "level": k}
        return FusionAlgebra(basis, table, "A2evenQuotient", max_residue=residue, info=info)
    tm = tau_map(data)
    kt = k + tm.shift
    alg = verlinde_algebra(tm.target, kt, jobs=jobs)
    src = enum_weights(data, k, "Pupper")
    embedded = tuple(sorted(alg.basis.index(bullet_tau(tm, w)) for w in src))
    info = {"type": str(data.atype), "level": k,
            "transpose_type": str(tm.target.atype), "transpose_level": kt}
    return FusionAlgebra(alg.basis, alg.table, "TransposeShift", embedded,
                         alg.max_residue, info)


def a2_even_product(n: int, a: int, b: int) -> dict:
    """Closed-form product chi_{a Lambda} chi_{b Lambda} in V_{2n}(A_2^(2))."""
    if not (0 <= a <= n and 0 <= b <= n):
        raise OutOfRange(f"need 0 <= a, b <= {n}")
    if b > a:
        a, b = b, a
    out = {}
    for i in range(b + 1):
        if 2 * i <= n + b - a:
            c, s = a - b + 2 * i, 1
        else:
            c, s = 2 * n + 1 + b - 2 * i - a, -1
        out[c] = out.get(c, 0) + s
    return {c: v for c, v in sorted(out.items()) if v}


@dataclass(frozen=True)
class SignTwistReport:
    conjecture_holds: bool
    counterexamples: list
    checked: int
    level: int

    def as_dict(self) -> dict:
        return {
            "conjecture_holds": self.conjecture_holds,
            "counterexamples": [list(c) for c in self.counterexamples],
            "checked": self.checked,
            "level": self.level,
            "applicable": self.level % 2 == 0,
        }


def sign_twist_check(alg: FusionAlgebra) -> SignTwistReport:
    """Test sign(N_{lm}^n) = (-1)^([l]+[m]+[n]) on every nonzero constant."""
    data = alg.basis.data
    g = grading_group(data)
    cls = [sum(g.class_map(w.finite)) % 2 for w in alg.basis]
    bad = []
    checked = 0
    for (i, j), row in sorted(alg.table.items()):
        for l, v in sorted(row.items()):
            checked += 1
            want = -1 if (cls[i] + cls[j] + cls[l]) % 2 else 1
            if (v > 0) != (want > 0):
                bad.append((i, j, l, v))
    return SignTwistReport(not bad, bad, checked, alg.basis.level)


def match_columns(a: np.ndarray, b: np.ndarray, tol: float = 1e-8) -> list | None:
    """Greedy permutation p with a[:, j] ~ b[:, p[j]]; None when some column has no partner."""
    used = set()
    perm = []
    for j in range(a.shape[1]):
        best, best_dev = None, None
        for c in range(b.shape[1]):
            if c in used:
                continue
            dev = float(np.abs(a[:, j] - b[:, c]).max()) if a.shape[0] == b.shape[0] else np.inf
            if best_dev is None or dev < best_dev:
                best, best_dev = c, dev
        if best is None or best_dev > tol:
            return None
        used.add(best)
        perm.append(best)
    return perm


def odd_level_s_match(l: int, k: int) -> tuple[float, list | None]:
    """Compare S of A_{2l}^(2) at level 2k+1 with S of C_l^(1) at level k.

    The C_l^(1) rows are first put in the same label order, then columns are
    matched greedily. Returns (max deviation under the permutation, permutation).
    """
    sa = s_matrix(affine_data(f"A{2 * l}~2"), 2 * k + 1)
    sc = s_matrix(affine_data(f"C{l}~1"), k)
    if sa.basis.finite != sc.basis.finite:
        return float("inf"), None
    perm = match_columns(sa.S, sc.S, 1e-8)
    if perm is None:
        return float("inf"), None
    permuted = sc.S[np.ix_(perm, perm)]
    return float(np.abs(sa.S - permuted).max()), perm


def odd_level_tensor_match(l: int, k: int) -> bool:
    """Fusion tables of A_{2l}^(2) at level k (odd) and C_l^(1) at (k-1)/2 agree."""
    if k % 2 == 0:
        raise ValueError("level must be odd")
    tw = twisted_verlinde(affine_data(f"A{2 * l}~2"), k)
    un = verlinde_algebra(affine_data(f"C{l}~1"), (k - 1) // 2)
    return tw.basis.finite == un.basis.finite and tw.table == un.table


def embedded_classes(alg: FusionAlgebra) -> set:
    """Grading classes met by the embedded sub-basis of a transpose-shift algebra."""
    g = grading_group(alg.basis.data)
    return {g.class_map(alg.basis[i].finite) for i in (alg.embedded or ())}


def verlinde_numeric(data: AffineAlgebraData, k: int) -> FusionAlgebra:
    return fusion_verlinde(s_matrix(data, k))
