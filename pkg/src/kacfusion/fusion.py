"""Untwisted Verlinde algebras.

The exact fusion rules come from Kac-Walton: decompose the finite tensor
product, then fold every summand (shifted by rho) into the level-(k + h^vee)
alcove with signs. The Kac-Peterson S-matrix and the Verlinde formula are an
independent numeric path used as a cross-check.
"""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .cartan import AffineAlgebraData, FiniteWeight, LevelWeight, affine_data
from .chars import tensor_decompose_int, weyl_sum_matrix
from .errors import LevelNonPositive, NearHalfInteger, SingularPoint, TwistedType
from .weights import WeightBasis, enum_weights, grading_group
from .weyl import Lattice, fold_affine, weyl_order

__all__ = [
    "FusionAlgebra",
    "SMatrixResult",
    "GradingReport",
    "s_matrix",
    "t_phases",
    "fusion_kw",
    "fusion_verlinde",
    "verlinde_algebra",
    "check_grading",
    "PROVENANCES",
]

PROVENANCES = ("KacWalton", "VerlindeNumeric", "TransposeShift", "A2evenQuotient")

# numeric S-matrices need the whole Weyl group in memory
MAX_WEYL_ORDER = 60000


@dataclass(frozen=True, eq=False)
class FusionAlgebra:
    """Commutative algebra on a weight basis with integer structure constants.

    ``table`` maps (i, j) with i <= j to {l: N_ij^l}, zero entries omitted.
    ``embedded`` lists basis indices of a distinguished sub-basis (the image of
    the twisted characters), or is None.
    """

    basis: WeightBasis
    table: dict
    provenance: str
    embedded: tuple | None = None
    max_residue: float = 0.0
    info: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance!r}")

    def __len__(self):
        return len(self.basis)

    @property
    def identity_index(self) -> int:
        return self.basis.identity_index

    def product(self, i: int, j: int) -> dict:
        return dict(self.table.get((min(i, j), max(i, j)), {}))

    def N(self, i: int, j: int, l: int) -> int:
        return self.table.get((min(i, j), max(i, j)), {}).get(l, 0)

    def tensor(self) -> np.ndarray:
        n = len(self)
        t = np.zeros((n, n, n), dtype=np.int64)
        for (i, j), row in self.table.items():
            for l, v in row.items():
                t[i, j, l] = t[j, i, l] = v
        return t

    def L(self, i: int) -> np.ndarray:
        """Left multiplication by basis element i; entry [nu, mu] = N_{i mu}^nu."""
        return self.tensor()[i].T.copy()

    def L_matrices(self) -> list:
        t = self.tensor()
        return [t[i].T.copy() for i in range(len(self))]

    def entries(self) -> list:
        """All nonzero [i, j, l, N] over ordered pairs, sorted."""
        out = []
        for (i, j), row in self.table.items():
            for l, v in row.items():
                out.append((i, j, l, v))
                if i != j:
                    out.append((j, i, l, v))
        return sorted(out)

    def multiply(self, x: dict, y: dict) -> dict:
        """Product of two elements given as {index: coefficient}."""
        out = {}
        for i, a in x.items():
            for j, b in y.items():
                for l, n in self.product(i, j).items():
                    out[l] = out.get(l, 0) + a * b * n
        return {l: v for l, v in out.items() if v}

    def associativity_defect(self) -> int:
        """Largest |(L_a L_b - L_b L_a)| entry; zero for a commutative associative algebra."""
        ls = self.L_matrices()
        worst = 0
        for a in range(len(ls)):
            for b in range(a + 1, len(ls)):
                worst = max(worst, int(np.abs(ls[a] @ ls[b] - ls[b] @ ls[a]).max()))
        # (x_a x_b) x_c = L_c L_b e_a versus x_a (x_b x_c) = L_a L_c e_b
        t = self.tensor()
        lhs = np.einsum("abs,sct->abct", t, t)
        rhs = np.einsum("bcs,ast->abct", t, t)
        return max(worst, int(np.abs(lhs - rhs).max()) if len(ls) else 0)

    def same_tensor(self, other: "FusionAlgebra") -> bool:
        return self.basis.finite == other.basis.finite and self.table == other.table


@dataclass(frozen=True, eq=False)
class SMatrixResult:
    basis: WeightBasis
    S: np.ndarray
    T: np.ndarray
    anomalies: tuple = ()


@dataclass(frozen=True)
class GradingReport:
    holds: bool
    violations: list
    blocks: dict

    def as_dict(self) -> dict:
        return {
            "holds": self.holds,
            "violations": [list(v) for v in self.violations],
            "blocks": {",".join(map(str, k)): v for k, v in sorted(self.blocks.items())},
        }


def _check_level(k):
    if not isinstance(k, (int, np.integer)) or k < 1:
        raise LevelNonPositive(f"level must be a positive integer, got {k!r}")


def _require_s_type(data):
    if data.atype.r != 1 and not data.atype.is_a_even_twisted:
        raise TwistedType(f"{data.atype}: the Kac-Peterson S-matrix here covers X^(1) and A_2l^(2)")


def lattice_quotient_order(data: AffineAlgebraData, n: int) -> Fraction:
    """|M*/nM| = n^l det Gram(M)."""
    from ._linalg import determinant
    basis = [list(c) for c in data.m_basis]
    gram = [[data.inner(a, b) for b in basis] for a in basis]
    return Fraction(n) ** data.rank * determinant(gram)


def anomaly_value(data: AffineAlgebraData, k: int, lam) -> Fraction:
    lr = (lam.finite if isinstance(lam, LevelWeight) else FiniteWeight(lam)) + data.rho
    return data.norm2(lr) / (2 * (k + data.h_dual)) - data.norm2(data.rho) / (2 * data.h_dual)


def t_phases(data: AffineAlgebraData, k: int, basis: WeightBasis) -> np.ndarray:
    ms = [anomaly_value(data, k, w) for w in basis]
    return np.array([np.exp(2j * np.pi * float(m - (m.numerator // m.denominator))) for m in ms])


def s_matrix(data: AffineAlgebraData, k: int, basis: WeightBasis | None = None) -> SMatrixResult:
    """Kac-Peterson S and diagonal T on the level-k basis."""
    _check_level(k)
    _require_s_type(data)
    if weyl_order(data) > MAX_WEYL_ORDER:
        raise SingularPoint(f"Weyl group of {data.atype} is too large for a dense S-matrix")
    basis = basis or enum_weights(data, k, "Pk")
    n = k + data.h_dual
    shifted = [w.finite + data.rho for w in basis]
    raw = weyl_sum_matrix(data, shifted, shifted, n, -1)
    pre = (1j) ** len(data.positive_roots) / np.sqrt(float(lattice_quotient_order(data, n)))
    S = pre * raw
    T = np.diag(t_phases(data, k, basis))
    ms = tuple(anomaly_value(data, k, w) for w in basis)
    return SMatrixResult(basis, S, T, ms)


def _kw_row(atype, k, lam: tuple, mu: tuple, index: dict) -> dict:
    data = affine_data(atype)
    m = k + data.h_dual
    lat = Lattice(data.m_lattice)
    out = {}
    for nu, mult in tensor_decompose_int(atype, min(lam, mu), max(lam, mu)):
        sw = fold_affine(data, m, lat, FiniteWeight(tuple(x + 1 for x in nu)))
        if sw.null:
            continue
        tgt = tuple(int(x) - 1 for x in sw.weight.labels)
        idx = index[tgt]
        out[idx] = out.get(idx, 0) + sw.sign * mult
    return {i: v for i, v in sorted(out.items()) if v}


def fusion_kw(data: AffineAlgebraData, k: int, lam, mu) -> dict:
    """Kac-Walton product of two basis weights, as {LevelWeight: N}."""
    _check_level(k)
    basis = enum_weights(data, k, "Pk")
    i, j = basis.index(lam), basis.index(mu)
    index = {w.finite.to_ints(): t for t, w in enumerate(basis)}
    row = _kw_row(data.atype, k, basis[i].finite.to_ints(), basis[j].finite.to_ints(), index)
    return {basis[t]: v for t, v in row.items()}


def _kw_rows_for(args):
    atype, k, i, weights, index = args
    return i, [(j, _kw_row(atype, k, weights[i], weights[j], index)) for j in range(i, len(weights))]


def _kw_table(data, k, basis, jobs=1) -> dict:
    weights = [w.finite.to_ints() for w in basis]
    index = {w: t for t, w in enumerate(weights)}
    tasks = [(data.atype, k, i, weights, index) for i in range(len(weights))]
    table = {}
    if jobs and jobs > 1 and len(weights) > 8:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_kw_rows_for, tasks))
    else:
        results = [_kw_rows_for(t) for t in tasks]
    for i, rows in sorted(results):
        for j, row in rows:
            if row:
                table[(i, j)] = row
    return table


def fusion_verlinde(S: SMatrixResult, provenance: str = "VerlindeNumeric") -> FusionAlgebra:
    """Structure constants from the Verlinde formula, rounded to integers."""
    s = S.S
    basis = S.basis
    e = basis.identity_index
    s0 = s[e]
    if np.any(np.abs(s0) < 1e-12):
        raise SingularPoint("identity row of S has a zero entry")
    # N_ij^l = sum_p S_ip S_jp conj(S_lp) / S_0p
    n = np.einsum("ip,jp,lp->ijl", s, s, np.conj(s) / s0[None, :])
    rounded = np.rint(n.real)
    residue = float(max(np.abs(n.real - rounded).max(), np.abs(n.imag).max()))
    if residue > 1e-6:
        raise NearHalfInteger(f"Verlinde output is {residue:.3g} away from an integer tensor")
    table = {}
    size = len(basis)
    for i in range(size):
        for j in range(i, size):
            row = {l: int(rounded[i, j, l]) for l in range(size) if rounded[i, j, l]}
            if row:
                table[(i, j)] = row
    return FusionAlgebra(basis, table, provenance, max_residue=residue)


def _sample_pairs(size):
    pairs = [(i, j) for i in range(size) for j in range(i, size)]
    return [p for t, p in enumerate(pairs) if t % 10 == 0]


def verlinde_algebra(data: AffineAlgebraData, k: int, jobs: int = 1,
                     crosscheck: bool = True) -> FusionAlgebra:
    """V_k of an untwisted algebra via Kac-Walton, spot-checked against Verlinde."""
    _check_level(k)
    if data.atype.r != 1:
        raise TwistedType(f"{data.atype} is twisted; use twisted_verlinde")
    basis = enum_weights(data, k, "Pk")
    table = _kw_table(data, k, basis, jobs)
    info = {"type": str(data.atype), "level": k}
    residue = 0.0
    if crosscheck and weyl_order(data) <= MAX_WEYL_ORDER:
        residue = _crosscheck(data, k, basis, table, _sample_pairs(len(basis)))
        info["crosscheck_pairs"] = len(_sample_pairs(len(basis)))
    return FusionAlgebra(basis, table, "KacWalton", max_residue=residue, info=info)


def _crosscheck(data, k, basis, table, pairs) -> float:
    s = s_matrix(data, k, basis).S
    s0 = s[basis.identity_index]
    worst = 0.0
    for i, j in pairs:
        vec = np.einsum("p,p,lp->l", s[i], s[j], np.conj(s) / s0[None, :])
        exact = np.zeros(len(basis))
        for l, v in table.get((i, j), {}).items():
            exact[l] = v
        dev = float(np.abs(vec - exact).max())
        worst = max(worst, dev)
        if dev > 1e-6:
            raise AssertionError(
                f"Kac-Walton and Verlinde disagree for {data.atype} level {k} at pair {(i, j)}")
    return worst


def check_grading(alg: FusionAlgebra) -> GradingReport:
    """Check N_{ij}^l = 0 unless class(i) + class(j) = class(l) in P/Q."""
    g = grading_group(alg.basis.data)
    classes = [g.class_map(w.finite) for w in alg.basis]
    blocks = {}
    for c in classes:
        blocks[c] = blocks.get(c, 0) + 1
    violations = []
    for (i, j), row in sorted(alg.table.items()):
        for l, v in sorted(row.items()):
            if v and g.add(classes[i], classes[j]) != classes[l]:
                violations.append((i, j, l, v))
    return GradingReport(not violations, violations, blocks)


def default_jobs() -> int:
    return max(1, min(4, os.cpu_count() or 1))
