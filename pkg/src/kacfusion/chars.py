"""Finite-dimensional representation combinatorics.

Weight multiplicities come from Freudenthal's recursion run on dominant
weights only, with the remaining weights filled in by Weyl orbits. Tensor
products use Racah-Speiser. Character values at torus points of finite order
are evaluated through the Weyl character formula, with phases reduced
exactly before any floating point happens.
"""
from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm

import numpy as np

from . import _linalg as la
from .cartan import AffineAlgebraData, FiniteWeight, affine_data
from .errors import NotDominant, NotIntegral, SingularPoint
from .weyl import weyl_group

__all__ = [
    "WeightSystem",
    "Decomposition",
    "weight_system",
    "weyl_dimension",
    "tensor_decompose",
    "char_eval",
    "weyl_sum_matrix",
]

CACHE_ENV = "KACFUSION_CACHE_DIR"


@dataclass(frozen=True)
class WeightSystem:
    highest: FiniteWeight
    mults: dict

    def __len__(self):
        return len(self.mults)

    @property
    def dimension(self) -> int:
        return sum(self.mults.values())


class Decomposition(dict):
    """Dominant weight -> multiplicity."""

    def dimension(self, data) -> int:
        return sum(n * weyl_dimension(data, w) for w, n in self.items())


def _check_dominant_integral(w) -> tuple:
    w = w if isinstance(w, FiniteWeight) else FiniteWeight(w)
    if not w.is_integral():
        raise NotIntegral(f"{w} is not integral")
    if not w.is_dominant():
        raise NotDominant(f"{w} is not dominant")
    return w.to_ints()


class _Ctx:
    """Per-type integer tables shared by the routines below."""

    def __init__(self, data: AffineAlgebraData):
        self.data = data
        self.l = data.rank
        self.alphas = [tuple(data.finite_cartan[j][i] for j in range(self.l))
                       for i in range(self.l)]
        self.pos = [tuple(int(x) for x in r) for r in data.positive_roots_labels]
        self.coroots = [tuple(int(x) for x in r) for r in data.coroot_coeffs]
        self.den, g = data.gram_scaled
        self.g = [tuple(int(x) for x in row) for row in g]
        inv = la.inverse([list(r) for r in data.finite_cartan])
        self.inv_den = lcm(*(x.denominator for row in inv for x in row))
        self.inv = [tuple(int(x * self.inv_den) for x in row) for row in inv]

    def ip(self, x, y):
        g = self.g
        return sum(x[i] * g[i][j] * y[j] for i in range(self.l) for j in range(self.l) if x[i] and y[j])

    def height_scaled(self, x):
        """Height of a root-lattice element given in labels, times inv_den."""
        return sum(sum(row[j] * x[j] for j in range(self.l)) for row in self.inv)

    def dominant(self, v, regular):
        """Pure-python dominance reduction on an integer tuple."""
        v = list(v)
        sign = 1
        alphas = self.alphas
        while True:
            i = min(range(self.l), key=v.__getitem__)
            if v[i] > 0:
                return tuple(v), sign
            if v[i] == 0:
                if regular:
                    return None, 0
                neg = [j for j in range(self.l) if v[j] < 0]
                if not neg:
                    return tuple(v), sign
                i = min(neg, key=v.__getitem__)
            c = v[i]
            a = alphas[i]
            for j in range(self.l):
                v[j] -= c * a[j]
            sign = -sign

    def orbit(self, v):
        seen = {v}
        stack = [v]
        while stack:
            x = stack.pop()
            for i in range(self.l):
                if x[i]:
                    a = self.alphas[i]
                    y = tuple(x[j] - x[i] * a[j] for j in range(self.l))
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
        return seen


@lru_cache(maxsize=None)
def _ctx(atype) -> _Ctx:
    return _Ctx(affine_data(atype))


_lock = threading.Lock()


def _disk_cache_path(atype, lam):
    root = os.environ.get(CACHE_ENV)
    if not root:
        return None
    name = f"ws_{atype}_{'_'.join(map(str, lam))}.json".replace("~", "t")
    return os.path.join(root, name)


@lru_cache(maxsize=4096)
def _dominant_mults(atype, lam: tuple) -> dict:
    path = _disk_cache_path(atype, lam)
    if path and os.path.exists(path):
        with open(path) as fh:
            return {tuple(k): v for k, v in json.load(fh)}
    out = _freudenthal(_ctx(atype), lam)
    if path:
        with _lock:
            os.makedirs(os.path.dirname(path), exist_ok=True)
            tmp = path + f".{os.getpid()}.tmp"
            with open(tmp, "w") as fh:
                json.dump(sorted([list(k), v] for k, v in out.items()), fh)
            os.replace(tmp, path)
    return out


def _freudenthal(ctx: _Ctx, lam: tuple) -> dict:
    l = ctx.l
    # dominant weights below lam, by depth
    doms = {lam}
    stack = [lam]
    while stack:
        x = stack.pop()
        for a in ctx.pos:
            y = tuple(x[j] - a[j] for j in range(l))
            if min(y) >= 0 and y not in doms:
                doms.add(y)
                stack.append(y)
    order = sorted(doms, key=lambda mu: ctx.height_scaled(tuple(lam[j] - mu[j] for j in range(l))))
    lr = tuple(x + 1 for x in lam)
    top = ctx.ip(lr, lr)
    mult = {lam: 1}
    for mu in order[1:]:
        mr = tuple(x + 1 for x in mu)
        denom = top - ctx.ip(mr, mr)
        total = 0
        for a in ctx.pos:
            j = 1
            while True:
                nu = tuple(mu[t] + j * a[t] for t in range(l))
                rep, _ = ctx.dominant(nu, False)
                m = mult.get(rep)
                if m is None:
                    break
                total += 2 * m * ctx.ip(nu, a)
                j += 1
        q, r = divmod(total, denom)
        if r:
            raise AssertionError(f"Freudenthal recursion produced a fraction at {mu}")
        mult[mu] = q
    return {mu: m for mu, m in mult.items() if m}


@lru_cache(maxsize=4096)
def _full_mults(atype, lam: tuple) -> dict:
    ctx = _ctx(atype)
    out = {}
    for mu, m in _dominant_mults(atype, lam).items():
        for w in ctx.orbit(mu):
            out[w] = m
    return out


def weight_system(data: AffineAlgebraData, lam) -> WeightSystem:
    """All weights of the irreducible module L(lam) with multiplicities."""
    lt = _check_dominant_integral(lam)
    mults = {FiniteWeight(k): v for k, v in _full_mults(data.atype, lt).items()}
    return WeightSystem(FiniteWeight(lt), mults)


def weyl_dimension(data: AffineAlgebraData, lam) -> int:
    lt = lam.to_ints() if isinstance(lam, FiniteWeight) else tuple(int(x) for x in lam)
    ctx = _ctx(data.atype)
    num = den = 1
    for c in ctx.coroots:
        num *= sum(ci * (x + 1) for ci, x in zip(c, lt))
        den *= sum(c)
    q, r = divmod(num, den)
    assert r == 0
    return q


def _tensor_int(atype, lam, mu) -> dict:
    data = affine_data(atype)
    ctx = _ctx(atype)
    if weyl_dimension(data, lam) < weyl_dimension(data, mu):
        lam, mu = mu, lam
    l = ctx.l
    base = tuple(x + 1 for x in lam)
    out = {}
    for phi, m in _full_mults(atype, mu).items():
        v = tuple(base[j] + phi[j] for j in range(l))
        rep, sign = ctx.dominant(v, True)
        if rep is None:
            continue
        nu = tuple(x - 1 for x in rep)
        out[nu] = out.get(nu, 0) + sign * m
    return {k: v for k, v in out.items() if v}


@lru_cache(maxsize=65536)
def tensor_decompose_int(atype, lam: tuple, mu: tuple) -> tuple:
    """Cached integer form: sorted tuple of (nu, multiplicity)."""
    if lam > mu:
        lam, mu = mu, lam
    out = _tensor_int(atype, lam, mu)
    if any(v < 0 for v in out.values()):
        raise AssertionError("negative tensor multiplicity")
    return tuple(sorted(out.items()))


def tensor_decompose(data: AffineAlgebraData, lam, mu) -> Decomposition:
    """Racah-Speiser decomposition of L(lam) (x) L(mu)."""
    lt = _check_dominant_integral(lam)
    mt = _check_dominant_integral(mu)
    return Decomposition({FiniteWeight(k): v for k, v in tensor_decompose_int(data.atype, lt, mt)})


def _scaled_rows(rows):
    """Common integer scaling for a list of rational label vectors."""
    fr = [[Fraction(x) for x in (r.labels if isinstance(r, FiniteWeight) else r)] for r in rows]
    s = lcm(*(x.denominator for r in fr for x in r)) if fr else 1
    return np.array([[int(x * s) for x in r] for r in fr], dtype=object).astype(np.int64), s


def weyl_sum_matrix(data: AffineAlgebraData, a_rows, b_rows, m, sign: int = -1) -> np.ndarray:
    """M[x, y] = sum_w eps(w) exp(sign * 2 pi i (a_x, w b_y) / m).

    Pairings are computed in integers and reduced modulo the period before
    conversion to floating point.
    """
    mats, signs = weyl_group(data.atype)
    a, sa = _scaled_rows(a_rows)
    b, sb = _scaled_rows(b_rows)
    den, g = data.gram_scaled
    m = Fraction(m)
    # (a, w b) / m = a G (w b) / (den sa sb m)
    period = den * sa * sb * m.numerator
    mult = m.denominator
    ag = a @ g  # (X, l)
    out = np.zeros((a.shape[0], b.shape[0]), dtype=complex)
    for w, eps in zip(mats, signs):
        wb = b @ w.T  # (Y, l)
        pair = (ag @ wb.T) * mult
        red = np.mod(pair, period).astype(np.float64) / float(period)
        out += eps * np.exp(sign * 2j * np.pi * red)
    return out


def char_eval(data: AffineAlgebraData, lam, xi, m, sign: int = -1) -> complex:
    """Finite character of L(lam) at the torus point exp(sign 2 pi i xi / m)."""
    lt = _check_dominant_integral(lam)
    lr = FiniteWeight(tuple(x + 1 for x in lt))
    num = weyl_sum_matrix(data, [xi], [lr], m, sign)[0, 0]
    den = weyl_sum_matrix(data, [xi], [data.rho], m, sign)[0, 0]
    if abs(den) < 1e-12:
        raise SingularPoint(f"Weyl denominator vanishes at {xi}/{m}")
    return complex(num / den)


def char_eval_matrix(data: AffineAlgebraData, lams, xis, m, sign: int = -1) -> np.ndarray:
    """C[x, y] = character of L(lams[y]) at exp(sign 2 pi i xis[x] / m)."""
    lrs = [FiniteWeight(tuple(x + 1 for x in _check_dominant_integral(w))) for w in lams]
    num = weyl_sum_matrix(data, xis, lrs, m, sign)
    den = weyl_sum_matrix(data, xis, [data.rho], m, sign)[:, 0]
    if np.any(np.abs(den) < 1e-12):
        raise SingularPoint("Weyl denominator vanishes at one of the evaluation points")
    return num / den[:, None]
