"""Modular and congruence-subgroup actions on level-k character spaces.

Characters are normalized by the modular anomaly, so T acts diagonally by
exp(2 pi i m_lambda). Untwisted types and A_{2l}^(2) carry the full SL(2,Z)
action through S and T. Other twisted types of order r only carry Gamma_1(r),
generated by u_12 = T^{-1} and u_21^r = S u_12^r S^{-1}, where S is taken on
the transpose algebra at the shifted level and restricted to the image of the
shifted transpose map.

An independent model of the same action is provided by the Weil
representation on the theta functions of characteristic M*/nM, restricted to
Weyl alternants. All relations between matrices hold projectively: scalars
left unspecified are fitted by least squares and reported.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import _linalg as la
from .cartan import AffineAlgebraData, FiniteWeight, LevelWeight
from .chars import char_eval_matrix, weyl_sum_matrix
from .errors import InvalidLattice, NotDominant
from .fusion import lattice_quotient_order, s_matrix
from .twisted import bullet_tau, tau_map
from .weights import WeightBasis, enum_weights, grading_group
from .weyl import weyl_group

__all__ = [
    "AnomalyValue",
    "ModularAction",
    "U21Result",
    "anomaly",
    "modular_action",
    "u21_action",
    "theta_u21r",
    "projective_residual",
    "cor58_check",
    "unitarity_check",
    "pairing_r",
    "pairing_matrix",
    "validate_beta",
    "pairing_formula_check",
]

RELATION_ORDER = {1: 3, 2: 4, 3: 6}


@dataclass(frozen=True)
class AnomalyValue:
    weight: LevelWeight
    m: Fraction

    def phase(self) -> complex:
        frac = self.m - (self.m.numerator // self.m.denominator)
        return complex(np.exp(2j * np.pi * float(frac)))


def anomaly(data: AffineAlgebraData, lam) -> AnomalyValue:
    """m_lambda = |lambda + rho|^2 / 2(k + h^vee) - |rho|^2 / 2h^vee, exactly."""
    if not isinstance(lam, LevelWeight):
        raise TypeError("anomaly needs a LevelWeight (finite part plus level)")
    if not lam.finite.is_dominant() or lam.zeroth_label(data) < 0:
        raise NotDominant(f"{lam} is not dominant for {data.atype}")
    lr = lam.finite + data.rho
    m = data.norm2(lr) / (2 * (lam.level + data.h_dual)) - data.norm2(data.rho) / (2 * data.h_dual)
    return AnomalyValue(lam, m)


def _phases(ms) -> np.ndarray:
    return np.array([np.exp(2j * np.pi * float(m - (m.numerator // m.denominator))) for m in ms])


def projective_residual(a: np.ndarray, b: np.ndarray) -> tuple[complex, float]:
    """Best scalar c with a ~ c b, and max |a - c b|."""
    bb = np.vdot(b.ravel(), b.ravel())
    if abs(bb) < 1e-300:
        return 0j, float(np.abs(a).max())
    c = np.vdot(b.ravel(), a.ravel()) / bb
    return complex(c), float(np.abs(a - c * b).max())


@dataclass(frozen=True, eq=False)
class ModularAction:
    """u_12, u_21^r (and S when the full group acts) on the level-k characters."""

    basis: WeightBasis
    r: int
    S: np.ndarray | None
    T: np.ndarray
    U21r: np.ndarray
    relations_residuals: dict = field(default_factory=dict)
    scalars: dict = field(default_factory=dict)

    @property
    def u12(self) -> np.ndarray:
        return np.linalg.inv(self.T)


def _charge_conjugation(basis: WeightBasis) -> np.ndarray:
    """Permutation matrix of lambda -> -w_0 lambda on the basis."""
    data = basis.data
    mats, _ = weyl_group(data.atype)
    # w_0 is the element sending rho to -rho
    rho = np.array(data.rho.to_ints())
    w0 = next(m for m in mats if np.array_equal(m @ rho, -rho))
    n = len(basis)
    c = np.zeros((n, n))
    for i, w in enumerate(basis):
        dual = FiniteWeight(tuple(int(x) for x in -(w0 @ np.array(w.finite.to_ints()))))
        c[i, basis.index(dual)] = 1
    return c


def _relations(r, T, U21r, S=None, C=None) -> tuple[dict, dict]:
    u12 = np.linalg.inv(T)
    s = RELATION_ORDER[r]
    word = np.linalg.matrix_power(u12 @ U21r, s)
    target = np.eye(len(T)) if r > 1 or C is None else C
    c, res = projective_residual(word, target)
    residuals = {f"(u12 u21^{r})^{s}": res}
    scalars = {f"(u12 u21^{r})^{s}": c}
    if r == 1:
        residuals[f"(u12 u21^{r})^{s} vs identity"] = projective_residual(word, np.eye(len(T)))[1]
    if S is not None:
        residuals["S unitary"] = float(np.abs(S @ S.conj().T - np.eye(len(S))).max())
        residuals["S symmetric"] = float(np.abs(S - S.T).max())
        if r == 1:
            cs, res = projective_residual(u12 @ U21r @ u12, S)
            residuals["S = u12 u21 u12"] = res
            scalars["S = u12 u21 u12"] = cs
    return residuals, scalars


def modular_action(data: AffineAlgebraData, k: int) -> ModularAction:
    """Gamma_1(r) generators on Ch_k with all relation residuals.

    For r = 1 the relation (u12 u21)^3 is compared with the charge
    conjugation matrix, since (u12 u21)^3 = -I in SL(2,Z) acts by
    lambda -> lambda^*. The comparison against the identity is also reported
    and agrees whenever the conjugation is trivial.
    """
    r = data.atype.r
    if r == 1 or data.atype.is_a_even_twisted:
        sm = s_matrix(data, k)
        S, T = sm.S, sm.T
        u12 = np.linalg.inv(T)
        if r == 1:
            u21 = np.linalg.inv(u12) @ S @ np.linalg.inv(u12)
        else:
            u21 = S @ np.linalg.matrix_power(u12, r) @ S.conj().T
        C = _charge_conjugation(sm.basis) if r == 1 else None
        res, sc = _relations(r, T, u21, S, C)
        if r > 1:
            # at even level T only closes up after the P/Q sign (-1)^[lambda]
            g = grading_group(data)
            sign = np.array([(-1) ** (sum(g.class_map(w.finite)) % 2) for w in sm.basis])
            graded, _ = _relations(r, T @ np.diag(sign), u21)
            res[f"(u12 u21^{r})^4 with graded T"] = graded[f"(u12 u21^{r})^4"]
        return ModularAction(sm.basis, r, S, T, u21, res, sc)
    u = u21_action(data, k)
    T = np.diag(_phases([anomaly(data, w).m for w in u.basis]))
    res, sc = _relations(r, T, u.matrix)
    res["leakage"] = u.leakage
    return ModularAction(u.basis, r, None, T, u.matrix, res, sc)


@dataclass(frozen=True, eq=False)
class U21Result:
    """matrix[l, n] is the coefficient of chi_n in chi_l restricted to u_21^r (v_k = 1)."""

    basis: WeightBasis
    r: int
    matrix: np.ndarray
    leakage: float = 0.0

    def vacuum_normalized(self) -> np.ndarray:
        """Rescale v_k so the vacuum row has unit leading entry."""
        i = self.basis.identity_index
        lead = self.matrix[i, i]
        if abs(lead) < 1e-12:
            raise ZeroDivisionError("vacuum diagonal entry vanishes; v_k cannot be fixed this way")
        return self.matrix / lead


def _s0_product(data: AffineAlgebraData, n: int, shifted) -> np.ndarray:
    """|M*/nM|^{-1/2} prod_{alpha > 0} 2 sin(pi (phi, alpha) / n) for each phi = nu + rho."""
    pre = 1 / np.sqrt(float(lattice_quotient_order(data, n)))
    out = []
    for phi in shifted:
        p = pre
        for root in data.positive_roots_labels:
            p *= 2 * np.sin(np.pi * float(data.inner(phi, FiniteWeight(tuple(int(x) for x in root)))) / n)
        out.append(p)
    return np.array(out)


def _alcove(data, k):
    """Level-k weights, their anomalies, and S_{0,nu} from the sine product."""
    basis = enum_weights(data, k, "Pk")
    n = k + data.h_dual
    shifted = [w.finite + data.rho for w in basis]
    ms = [anomaly(data, LevelWeight(w.finite, k)).m for w in basis]
    return basis, n, shifted, ms, _s0_product(data, n, shifted)


def u21_action(data: AffineAlgebraData, k: int) -> U21Result:
    """Action of u_21^r on Ch_k as the double sum over the transpose alcove.

    For r = 1 this is the single sum e^{2 pi i (m_l + m_mu)} S_{0 mu} chi_l(mu)
    on the level-k alcove. For A_{2l}^(2) the algebra's own S is used. For the
    remaining twisted types the sum runs over the transpose algebra at level
    k + h^vee - h, and rows and columns are the shifted images of the level-k
    dominant weights. ``leakage`` is the largest norm of a row's component
    outside the image, which vanishes when the image is Gamma_1(r)-stable.
    """
    r = data.atype.r
    if r == 1:
        basis, n, shifted, ms, s0 = _alcove(data, k)
        lams = [w.finite for w in basis]
        chi = char_eval_matrix(data, lams, shifted, n, -1)  # chi[x, y] = chi_y(point x)
        ph = _phases(ms)
        mat = (ph[:, None] * ph[None, :]) * s0[None, :] * chi.T
        return U21Result(basis, 1, mat)
    if data.atype.is_a_even_twisted:
        basis, n, shifted, ms, s0 = _alcove(data, k)
        lams = [w.finite for w in basis]
        chi = char_eval_matrix(data, lams, shifted, n, -1)
        full = _double_sum(chi, s0, ms, r)
        return U21Result(basis, r, full)
    tm = tau_map(data)
    tdata = tm.target
    kt = k + tm.shift
    tbasis, n, shifted, ms, s0 = _alcove(tdata, kt)
    chi = char_eval_matrix(tdata, [w.finite for w in tbasis], shifted, n, -1)
    full = _double_sum(chi, s0, ms, r)
    own = enum_weights(data, k, "Pupper")
    idx = [tbasis.index(bullet_tau(tm, w)) for w in own]
    block = full[np.ix_(idx, idx)]
    rest = np.delete(full[idx, :], idx, axis=1)
    leak = float(np.abs(rest).max()) if rest.size else 0.0
    return U21Result(own, r, block, leak)


def _double_sum(chi, s0, ms, r) -> np.ndarray:
    """M[l, n] = sum_mu e^{-2 r pi i m_mu} S_{0mu}^2 chi_l(e^{-..mu}) chi_n(e^{+..mu})."""
    w = _phases(ms) ** (-r) * s0 ** 2
    return np.einsum("m,ml,mn->ln", w, chi, chi.conj())


def _dual_lattice(data: AffineAlgebraData):
    """(B, D, Gram_M) with rows of B spanning M and rows of D the dual basis of M*."""
    b = [list(row) for row in data.m_basis]
    g = [list(row) for row in data.gram]
    gb = la.matmul(g, la.transpose(b))  # label-coordinate pairing with M
    d = la.inverse(gb)  # rows: dual basis, d * G * B^T = I
    gram_m = la.matmul(b, gb)
    return b, d, gram_m


def _theta_classes(data: AffineAlgebraData, n: int):
    """Coset representatives of M*/nM in label coordinates, with a class lookup."""
    _, d, gram_m = _dual_lattice(data)
    if any(Fraction(x).denominator != 1 for row in gram_m for x in row):
        raise InvalidLattice(f"{data.atype}: Gram matrix of M is not integral")
    a = [[int(n * x) for x in row] for row in gram_m]
    _, diag, v = la.smith_normal_form(a)
    dvals = [diag[i][i] for i in range(len(a))]
    vinv = la.inverse(v)
    reps = []
    for y in np.ndindex(*dvals):
        c = la.matvec(la.transpose(vinv), list(y))
        reps.append(FiniteWeight(tuple(la.matvec(la.transpose(d), c))))
    coords = np.array([[int(x) for x in row] for row in la.matmul(la.matmul(
        [list(r) for r in data.gram], la.transpose([list(r) for r in data.m_basis])), v)], dtype=object)

    def lookup(w: FiniteWeight) -> tuple:
        y = [sum(Fraction(w.labels[i]) * coords[i][j] for i in range(len(w.labels)))
             for j in range(len(dvals))]
        if any(x.denominator != 1 for x in y):
            raise InvalidLattice(f"{w} is not in M*")
        return tuple(int(x) % dv for x, dv in zip(y, dvals))

    index = {lookup(w): i for i, w in enumerate(reps)}
    return reps, index, lookup


def theta_u21r(data: AffineAlgebraData, k: int, r: int | None = None) -> U21Result:
    """u_21^r on Ch_k from the Weil representation on theta functions of level k + h^vee.

    Uses only the lattice M of ``data`` itself: T e_g = exp(pi i |g|^2 / n) e_g
    and S e_g = N^{-1/2} sum_g' exp(-2 pi i (g, g') / n) e_g' on g in M*/nM,
    restricted to the alternants of the level-k dominant weights. This is
    independent of any transpose identification.
    """
    r = data.atype.r if r is None else r
    basis = enum_weights(data, k, "Pupper")
    n = k + data.h_dual
    reps, _, _ = _theta_classes(data, n)
    shifted = [w.finite + data.rho for w in basis]
    N = len(reps)
    # V[g, l] = sum_w eps(w) exp(2 pi i (g, w(l + rho)) / n), i.e. sqrt(N) conj(S) a_l
    V = weyl_sum_matrix(data, reps, shifted, n, +1)
    norms = [data.norm2(g) for g in reps]
    D = np.array([np.exp(-1j * np.pi * r * float(x - 2 * n * (x // (2 * n))) / n) for x in norms])
    order = len(weyl_group(data.atype)[0])
    # c[l, m] = <a_m, S D conj(S) a_l> / |W|
    c = (V.conj().T * D[None, :]) @ V / (N * order)
    # squared norm lost outside the alternant span, worst column
    leak = float(np.max(np.abs(1 - np.sum(np.abs(c) ** 2, axis=0))))
    return U21Result(basis, r, c.T, leak)


def cor58_check(data: AffineAlgebraData, k: int, window: int | None = None) -> float:
    """Max |LHS - RHS| of the u_21 character identity over a weight window.

    LHS = sum_nu e^{-2 pi i m_nu} S_{0nu}^2 chi_l(e^{-2pi i(nu+rho)/n}) chi_mu(e^{2pi i(nu+rho)/n})
    RHS = e^{2 pi i (m_l + m_mu)} S_{0mu} chi_l(e^{-2 pi i (mu+rho)/n}),
    with nu over the level-k alcove, and l, mu over dominant weights whose
    labels sum to at most ``window`` (default k + 1, so some lie past the level).
    """
    if data.atype.r != 1:
        raise ValueError("the identity is stated for untwisted (finite simple) data")
    _, n, shifted, ms, s0 = _alcove(data, k)
    window = k + 1 if window is None else window
    pts = [FiniteWeight(v) for v in _label_window(data.rank, window)]
    chi = char_eval_matrix(data, pts, shifted, n, -1)  # [nu, l]
    w = _phases(ms) ** (-1) * s0 ** 2
    lhs = np.einsum("v,vl,vm->lm", w, chi, chi.conj())
    pts_rho = [p + data.rho for p in pts]
    m_pts = [data.norm2(p) / (2 * n) - data.norm2(data.rho) / (2 * data.h_dual) for p in pts_rho]
    ph = _phases(m_pts)
    # S_{0mu} chi_l(e^{-2 pi i (mu+rho)/n}) = |M*/nM|^{-1/2} i^{|Delta+|} times the
    # Weyl numerator, which stays finite when mu + rho lies on a wall
    pre = (1j) ** len(data.positive_roots) / np.sqrt(float(lattice_quotient_order(data, n)))
    num = weyl_sum_matrix(data, pts_rho, pts_rho, n, -1)  # [mu, l], symmetric in the pairing
    rhs = (ph[:, None] * ph[None, :]) * pre * num.T
    return float(np.abs(lhs - rhs).max())


def _label_window(l, bound):
    out = []
    for v in np.ndindex(*([bound + 1] * l)):
        if sum(v) <= bound:
            out.append(tuple(int(x) for x in v))
    return out


def unitarity_check(data: AffineAlgebraData, k: int) -> float:
    """Max |sum_nu S_{0nu}^2 chi_l(e^{-..}) chi_mu(e^{+..}) - delta_{l mu}| over the alcove."""
    if data.atype.r != 1:
        raise ValueError("untwisted data required")
    basis, n, shifted, ms, s0 = _alcove(data, k)
    chi = char_eval_matrix(data, [w.finite for w in basis], shifted, n, -1)
    g = np.einsum("v,vl,vm->lm", s0 ** 2, chi, chi.conj())
    return float(np.abs(g - np.eye(len(basis))).max())


def pairing_matrix(data: AffineAlgebraData, k: int, r: int | None = None) -> U21Result:
    """<chi_l, chi_mu>_r for all level-k dominant l, mu (the u_21^r matrix with v_k = 1)."""
    r = data.atype.r if r is None else r
    if r != data.atype.r:
        raise ValueError(f"{data.atype} has twist order {data.atype.r}, not {r}")
    if r == 1:
        basis, n, shifted, ms, s0 = _alcove(data, k)
        chi = char_eval_matrix(data, [w.finite for w in basis], shifted, n, -1)
        return U21Result(basis, 1, _double_sum(chi, s0, ms, 1))
    return u21_action(data, k)


def pairing_r(data: AffineAlgebraData, k: int, r: int, lam, mu) -> complex:
    """<chi_lam, chi_mu>_r as the defining sum over the level-k alcove."""
    pm = pairing_matrix(data, k, r)
    return complex(pm.matrix[pm.basis.index(lam), pm.basis.index(mu)])


def validate_beta(data: AffineAlgebraData, k: int, r: int, beta) -> bool:
    """Check n r |alpha|^2 = 2 (alpha, beta) mod 2 on generators of (1/r)M cap (1/n)M*."""
    n = k + data.h_dual
    beta = beta if isinstance(beta, FiniteWeight) else FiniteWeight(beta)
    b, d, _ = _dual_lattice(data)
    m_r = [[Fraction(x, r) for x in row] for row in b]
    ms_n = [[Fraction(x, n) for x in row] for row in d]
    for gen in la.lattice_intersection(m_r, ms_n):
        alpha = FiniteWeight(tuple(gen))
        lhs = n * r * data.norm2(alpha) - 2 * data.inner(alpha, beta)
        if lhs.denominator != 1 or lhs.numerator % 2:
            return False
    return True


@dataclass(frozen=True)
class PairingFormulaReport:
    r: int
    beta: tuple
    beta_valid: bool
    v: complex
    v_abs_expected: float
    residual: float
    zero_pattern_ok: bool

    def as_dict(self) -> dict:
        return {"r": self.r, "beta": [str(x) for x in self.beta], "beta_valid": self.beta_valid,
                "v": [self.v.real, self.v.imag], "v_abs_expected": self.v_abs_expected,
                "residual": self.residual, "zero_pattern_ok": self.zero_pattern_ok}


def _in_lattice(vec: FiniteWeight, rows) -> bool:
    """Whether a label vector is an integer combination of the given rows."""
    coeffs = la.matvec(la.transpose(la.inverse([list(r) for r in rows])), list(vec.labels))
    return all(Fraction(c).denominator == 1 for c in coeffs)


def pairing_formula_check(data: AffineAlgebraData, k: int, beta=None) -> PairingFormulaReport:
    """Compare the pairing matrix with the restricted Weyl-sum formula.

    The scalar v is fitted by least squares over all (l, mu); the residual is
    taken after normalizing. beta defaults to 0, which is only valid for r = 1.
    """
    r = data.atype.r
    l = data.rank
    beta = FiniteWeight.zero(l) if beta is None else (
        beta if isinstance(beta, FiniteWeight) else FiniteWeight(beta))
    valid = validate_beta(data, k, r, beta)
    pm = pairing_matrix(data, k, r)
    basis = pm.basis
    n = k + data.h_dual
    mats, signs = weyl_group(data.atype)
    _, d, _ = _dual_lattice(data)
    rms = [[r * x for x in row] for row in d]
    shifted = [w.finite + data.rho for w in basis]
    # formula values without v
    pred = np.zeros((len(basis), len(basis)), dtype=complex)
    zero_ok = True
    b2 = data.norm2(beta)
    for i, lr in enumerate(shifted):
        orbit = [(FiniteWeight(tuple(int(x) for x in m @ np.array(lr.to_ints()))), s)
                 for m, s in zip(mats, signs)] if lr.is_integral() else None
        if orbit is None:
            raise ValueError("non-integral shifted weight")
        for j, mr in enumerate(shifted):
            shifted_mu = mr - beta
            if not _regular_in_alcove(data, n, shifted_mu):
                continue
            acc = 0j
            for wl, s in orbit:
                if _in_lattice(mr - wl - beta, rms):
                    ph = Fraction(data.inner(mr, wl), r * n)
                    acc += s * np.exp(-2j * np.pi * float(ph - ph.numerator // ph.denominator))
            e = (data.norm2(mr) + data.norm2(lr) - b2) / (2 * r * n)
            pred[i, j] = np.exp(2j * np.pi * float(e - e.numerator // e.denominator)) * acc
    for i in range(len(basis)):
        for j in range(len(basis)):
            if abs(pred[i, j]) < 1e-12 and abs(pm.matrix[i, j]) > 1e-8:
                zero_ok = False
    v, res = projective_residual(pm.matrix, pred)
    b, _, _ = _dual_lattice(data)
    nm = [[n * x for x in row] for row in b]
    sub = la.lattice_intersection(nm, rms) if r > 1 else nm
    # |(nM + rM*)/nM| = |rM*/(nM cap rM*)| = det(nM cap rM*) / det(rM*)
    idx = abs(la.determinant([list(x) for x in _basis_of(sub, l)]) / la.determinant(rms))
    v_abs = float(idx) ** -0.5
    return PairingFormulaReport(r, tuple(beta.labels), valid, v, v_abs, res, zero_ok)


def _basis_of(gens, l):
    """A basis of the lattice generated by ``gens`` (Hermite reduction via SNF)."""
    den = 1
    for g in gens:
        for x in g:
            den = den * Fraction(x).denominator // np.gcd(den, Fraction(x).denominator)
    ints = [[int(Fraction(x) * den) for x in g] for g in gens]
    u, dmat, v = la.smith_normal_form(ints)
    vinv = la.inverse(v)
    rows = []
    for i in range(l):
        rows.append([Fraction(dmat[i][i]) * vinv[i][j] / den for j in range(l)])
    return rows


def _regular_in_alcove(data, n, v: FiniteWeight) -> bool:
    """v in P^{k++}: strictly dominant integral with (v, theta) < n in level units."""
    if not v.is_integral() or any(x <= 0 for x in v.labels):
        return False
    return LevelWeight(v - data.rho, n - data.h_dual).zeroth_label(data) >= 0
