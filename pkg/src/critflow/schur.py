"""h-polynomials, Schur polynomials and Wronskian identities between them.

exp(-Σ t_j z^j) = Σ h_i z^i.  F_λ = det(h_{λ_i - i + j}) and for a Maya set
F_S = det(h_{j - s_i}).  All polynomials live in the variables t1, t2, ...
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .combin import (CombinError, KdVSet, Maya, MKdVSetTuple, Partition, TailSet,
                     leading_term, maya_to_partition, mutate_kdv, partition_to_maya)
from .exactalg import MultiPoly, Poly, RatFun, det, log_derivative, wronskian
from .psdo import PsDO, compose_all, first_order


class SchurError(ValueError):
    pass


def tvars(d):
    return tuple(f"t{i}" for i in range(1, max(d, 1) + 1))


@lru_cache(maxsize=None)
def _h_table(d):
    vs = tvars(d)
    hs = [MultiPoly.const(1, vs)]
    ts = [None] + [MultiPoly.var(v, vs) for v in vs]
    for i in range(1, d + 1):
        acc = MultiPoly.const(0, vs)
        for j in range(1, i + 1):
            acc = acc + ts[j] * hs[i - j] * j
        hs.append(acc * Fraction(-1, i))
    return tuple(hs)


def h_polys(max_index, nvars=None):
    """h_0..h_max over t1..t_nvars (nvars defaults to max_index)."""
    d = max(max_index, nvars or 0, 1)
    return list(_h_table(d)[:max_index + 1])


def h(i, nvars):
    if i < 0:
        return MultiPoly.const(0, tvars(nvars))
    return _h_table(max(nvars, i, 1))[i].with_vars(tvars(max(nvars, i, 1)))


def _hmatrix(rows_index, nvars):
    table = _h_table(max(nvars, 1))
    zero = MultiPoly.const(0, tvars(nvars))
    return [[table[k] if k >= 0 else zero for k in row] for row in rows_index]


@lru_cache(maxsize=None)
def _schur_cached(parts):
    lam = Partition(parts)
    n1 = len(lam.parts)
    w = lam.weight
    d = max(w, 1)
    if n1 == 0:
        return MultiPoly.const(1, tvars(d))
    idx = [[lam.parts[i] - i + j for j in range(n1)] for i in range(n1)]
    F = det(_hmatrix(idx, d))
    hs = _h_table(d)
    wr = wronskian([hs[lam.parts[i] + n1 - 1 - i] for i in range(n1)], "t1")
    if F != wr:
        raise SchurError(f"determinant and Wronskian forms differ for {lam}")
    return F


def schur(lam) -> MultiPoly:
    if not isinstance(lam, Partition):
        lam = Partition(tuple(lam))
    return _schur_cached(lam.parts)


def schur_from_maya(S) -> MultiPoly:
    """det(h_{j - s_i}), computed directly from the Maya encoding."""
    if isinstance(S, KdVSet):
        S = S.base
    if not isinstance(S, Maya):
        S = S.as_maya()
    n1 = S.tail
    w = maya_to_partition(S).weight
    d = max(w, 1)
    if n1 == 0:
        return MultiPoly.const(1, tvars(d))
    return _schur_maya_cached(S.finite, n1, d)


@lru_cache(maxsize=None)
def _schur_maya_cached(finite, n1, d):
    idx = [[j - finite[i] for j in range(n1)] for i in range(n1)]
    return det(_hmatrix(idx, d))


def derivative_rule_check(lam) -> bool:
    """∂F_λ/∂t1 + Σ F_{λ^i} = 0 over all corner removals."""
    if not isinstance(lam, Partition):
        lam = Partition(tuple(lam))
    total = schur(lam).deriv("t1")
    for mu in lam.removable_boxes():
        total = total + schur(mu)
    return total.is_zero()


def wr(fs, var="t1"):
    """Wronskian with Wr() = 1."""
    fs = list(fs)
    if not fs:
        return Fraction(1)
    return wronskian(fs, var)


@dataclass
class IdentityReport:
    lhs: object
    rhs: object
    equal: bool
    sign: int = 1
    labels: tuple = ()

    def to_json(self):
        return {"lhs": self.lhs.to_str(), "rhs": self.rhs.to_str(), "equal": self.equal,
                "sign": self.sign, "labels": [str(x) for x in self.labels]}


def pair_sets(S: Maya, a1: int, a2: int):
    if a1 >= a2:
        raise SchurError(f"need a1 < a2, got {a1}, {a2}")
    S1p = S.shift(1)
    for a in (a1, a2):
        if a in S1p:
            raise SchurError(f"{a} lies in S+1")
    S1 = S1p.add(a1).as_maya()
    S2 = S1p.add(a2).as_maya()
    S4 = S.shift(2).add(a1 + 1, a2 + 1).as_maya()
    return S1, S2, S, S4


def pair_identity(S: Maya, a1: int, a2: int):
    """Wr(F_S1, F_S2) = F_S3 F_S4 with S1..S4 built from S, a1, a2."""
    S1, S2, S3, S4 = pair_sets(S, a1, a2)
    lhs = wr([schur_from_maya(S1), schur_from_maya(S2)])
    rhs = schur_from_maya(S3) * schur_from_maya(S4)
    rep = IdentityReport(lhs, rhs, lhs == rhs, 1,
                         tuple(maya_to_partition(X) for X in (S1, S2, S3, S4)))
    return S1, S2, S3, S4, rep


def signed_identity(lhs, rhs) -> IdentityReport:
    """Compare lhs with ±rhs and record the sign (0 if neither holds)."""
    if lhs == rhs:
        return IdentityReport(lhs, rhs, True, 1)
    if lhs == -rhs:
        return IdentityReport(lhs, rhs, True, -1)
    return IdentityReport(lhs, rhs, False, 0)


def kfold_identities(gs, k: int, s: int, var="t1"):
    """Both k-fold Wronskian identities for g_1..g_{s+1}; returns (first, second).

    The first holds exactly.  The second holds with the sign (-1)^{k(k+1)/2}
    (the sign of reversing the k+1 complementary Wronskians); the report
    records the observed sign.
    """
    gs = list(gs)
    if len(gs) != s + 1 or not 0 <= k <= s:
        raise SchurError("need s+1 functions and 0 <= k <= s")
    head = gs[:s - k]
    base = wr(head, var)
    full = wr(gs, var)
    vs = [wr(head + [gs[i - 1]], var) for i in range(s - k + 1, s + 2)]
    lhs1 = wr(vs, var)
    rhs1 = base ** k * full
    ws = [wr(gs[:i - 1] + gs[i:], var) for i in range(s - k + 1, s + 2)]
    lhs2 = wr(ws, var)
    rhs2 = base * full ** k
    first = IdentityReport(lhs1, rhs1, lhs1 == rhs1)
    second = signed_identity(lhs2, rhs2)
    return first, second


def complement_sign(k):
    return -1 if (k * (k + 1) // 2) % 2 else 1


def lemma_mv_check(fs, g1, g2, var="t1") -> bool:
    fs = list(fs)
    lhs = wr([wr(fs + [g1], var), wr(fs + [g2], var)], var)
    rhs = wr(fs, var) * wr(fs + [g1, g2], var)
    return lhs == rhs


# ------------------------------------------------------------ D_S operator

def sample_t(rng: random.Random, d: int, bound: int = 20):
    """Small random rationals for t2..t_d (t1 becomes x)."""
    out = {}
    for i in range(2, d + 1):
        num = rng.randint(-bound, bound)
        den = rng.randint(1, bound)
        out[f"t{i}"] = Fraction(num, den)
    return out


def specialize(F: MultiPoly, t_sample: dict) -> Poly:
    """F(t1 = x, t_j = t_sample[t_j])."""
    vals = {v: t_sample.get(v, Fraction(0)) for v in F.vars if v != "t1"}
    return F.subs(vals).to_poly("t1", var="x") if "t1" in F.vars else \
        Poly.const(F.subs(vals).terms.get((), 0))


def tuple_weight_bound(T: MKdVSetTuple):
    return max(max(T.weights()), 1)


def build_DS_operator(T: MKdVSetTuple, t_sample=None, seed=0, retries=8):
    """Π_{i=N..1} (d/dx - log'(F_{S_i}/F_{S_{i-1}})) at t = t_sample.

    Returns (operator, t_sample used)."""
    N = T.N
    d = max(tuple_weight_bound(T), max(w for w in (
        maya_to_partition(mutate_kdv(T[N], a).base).weight for a in leading_term(T[N]))))
    rng = random.Random(seed)
    attempts = [t_sample] if t_sample is not None else [sample_t(rng, d) for _ in range(retries)]
    for ts in attempts:
        Fs = [specialize(schur_from_maya(T[i]), ts) for i in range(1, N + 1)]
        if any(F.is_zero() for F in Fs):
            continue
        factors = []
        for i in range(N, 0, -1):
            ratio = log_derivative(Fs[i - 1]) - log_derivative(Fs[(i - 2) % N])
            factors.append(first_order(ratio))
        return compose_all(factors), ts
    raise SchurError("every sampled t gave a vanishing Schur polynomial; pass a different t_sample")


def DS_kernel_functions(S: KdVSet, t_sample):
    F_S = specialize(schur_from_maya(S), t_sample)
    out = []
    for a in leading_term(S):
        Fa = specialize(schur_from_maya(mutate_kdv(S, a).base), t_sample)
        out.append((a, RatFun(Fa, F_S)))
    return out
