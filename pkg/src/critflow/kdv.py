"""Miura maps to scalar operators, N-th roots, KdV vector fields.

L_i = (∂ - v_{i-1})⋯(∂ - v_1)(∂ - v_N)⋯(∂ - v_{i+1})(∂ - v_i) lies in the
space D of operators ∂^N + Σ_{k<=N-2} u_k ∂^k because Σ v_k = 0.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exactalg import RatFun
from .miura import (DiagRF, MiuraOper, build_TJ, mkdv_vector_field, mkdv_vector_field_TJ,
                    mu_from_tuple, potential_c_derivative)
from .genpop import generate_multi
from .psdo import PsDO, compose_all, first_order


class KdVError(ValueError):
    pass


def factor_order(i, N):
    """Indices of v in L_i from left to right: i-1, i-2, ..., i (mod N, 1-based)."""
    return [((i - 2 - k) % N) + 1 for k in range(N)]


def miura_map(L: MiuraOper, i: int) -> PsDO:
    N = L.N
    if not L.V.trace().is_zero():
        raise KdVError("Miura map needs a trace-zero potential")
    op = compose_all([first_order(L.V[a]) for a in factor_order(i, N)])
    if not in_D(op, N):
        raise KdVError("Miura map left the space D")
    return op


def in_D(P: PsDO, N: int) -> bool:
    return (P.is_differential() and P.top == N and P.coeff(N) == RatFun.const(1)
            and P.coeff(N - 1).is_zero())


def nth_root(L: PsDO, N: int, floor: int) -> PsDO:
    """The unique ∂ + Σ_{i<=0} a_i ∂^i with R^N = L, down to degree ``floor``.

    At step j the ∂^{N-1+j} coefficient of R^N is N a_j plus terms in the
    already known a's, so a_j is read off with a_j = 0 in place.
    """
    if L.top != N or L.coeff(N) != RatFun.const(1):
        raise KdVError("nth_root needs a monic operator of order N")
    terms = {1: RatFun.const(1)}
    for j in range(0, floor - 1, -1):
        trial = PsDO(terms, j)
        power = trial.power(N, N - 1 + j)
        a = (L.coeff(N - 1 + j) - power.coeff(N - 1 + j)) * Fraction(1, N)
        if not a.is_zero():
            terms[j] = a
    return PsDO(terms, floor)


def fractional_plus(L: PsDO, r: int, N: int) -> PsDO:
    """(L^{r/N})^+."""
    if r % N == 0:
        return L.power(r // N)
    R = nth_root(L, N, 1 - r)
    return R.power(r).plus_part()


def kdv_vector_field(L: PsDO, r: int, N: int) -> PsDO:
    """[L, (L^{r/N})^+]; asserted to have order <= N-2."""
    if r < 1:
        raise KdVError("r must be positive")
    P = fractional_plus(L, r, N)
    C = L.mul(P) - P.mul(L)
    if C.terms and C.top > N - 2:
        raise KdVError(f"commutator has order {C.top} > N-2")
    return C


def induced_derivative(L: MiuraOper, i: int, vdot: DiagRF) -> PsDO:
    """d/dt L_i by the Leibniz rule over the ordered factors, with v_k' = vdot_k."""
    N = L.N
    order = factor_order(i, N)
    factors = [first_order(L.V[a]) for a in order]
    total = PsDO({})
    for pos, a in enumerate(order):
        if vdot[a].is_zero():
            continue
        ops = factors[:pos] + [PsDO({0: -vdot[a]})] + factors[pos + 1:]
        total = total + compose_all(ops)
    return total


@dataclass
class KdVReport:
    J: tuple
    c: tuple
    r: int
    i: int
    ok: bool
    sign: int
    residuals: dict

    def to_json(self):
        from .exactalg import rat_str
        return {"J": list(self.J), "c": [rat_str(Fraction(v)) for v in self.c], "r": self.r,
                "i": self.i, "ok": self.ok, "sign": self.sign, "residuals": self.residuals}


# t_r-derivative induced by the mKdV flow equals KDV_SIGN * [L, (L^{r/N})^+]
KDV_SIGN = -1


def verify_mkdv_to_kdv(J, c, r, i, N, use_dressing=False) -> KdVReport:
    """Compare d/dt L_i under the mKdV flow with the KdV right side.

    Under the conventions here the two agree as dL_i/dt = -[L_i, (L_i^{r/N})^+],
    i.e. dL_i/dt = [(L_i^{r/N})^+, L_i]; ``sign`` records which of ±1 matched.
    """
    J = tuple(J)
    c = tuple(Fraction(v) for v in c)
    y = generate_multi(J, c, N)
    L = mu_from_tuple(y)
    if use_dressing:
        vdot = mkdv_vector_field(L, r)
    else:
        vdot = mkdv_vector_field_TJ(build_TJ(J, c, N), r)
    Li = miura_map(L, i)
    lhs = induced_derivative(L, i, vdot)
    rhs = kdv_vector_field(Li, r, N)
    diff = lhs - rhs.scale(KDV_SIGN)
    residuals = {str(k): diff.coeff(k).to_str() for k in range(N - 1)}
    ok = not diff.terms
    if ok:
        sign = KDV_SIGN
    elif not (lhs - rhs).terms:
        sign = -KDV_SIGN
    else:
        sign = 0
    return KdVReport(J, c, r, i, ok, sign, residuals)


def gauge_invariant_maps(j, N):
    """Indices i with m_i(L) = m_i(e^{ad gE_j} L) for Ricatti-defect-free g.

    E_j shifts v_j and v_{j+1} by ±g; these appear as the adjacent pair
    (∂ - v_{j+1})(∂ - v_j) in L_i unless the product wraps between them,
    which happens exactly for i = j + 1.
    """
    return [i for i in range(1, N + 1) if (i - j - 1) % N != 0]


def lemma_j_invariance_check(J, c, i, N) -> bool:
    """L_i does not depend on c_m for i in gauge_invariant_maps(j_m): ∂L_i/∂c_m = 0."""
    J = tuple(J)
    if i not in gauge_invariant_maps(J[-1], N):
        raise KdVError(f"m_{i} is not invariant under the last gauge step E_{J[-1]}")
    return not c_m_derivative_of_map(J, c, i, N).terms


def c_m_derivative_of_map(J, c, i, N) -> PsDO:
    """∂L_i/∂c_m at c, by the Leibniz rule with ∂V/∂c_m."""
    J = tuple(J)
    y = generate_multi(J, c, N)
    L = mu_from_tuple(y)
    dV = potential_c_derivative(J, c, N, len(J))
    return induced_derivative(L, i, dV)


def last_parameter_derivative_check(J, c, N):
    """∂V/∂c_m = a (y_{j-1} y_{j+1} / y_j²) H_j with a nonzero constant a; returns a or None."""
    J = tuple(J)
    j = J[-1]
    y = generate_multi(J, c, N)
    dV = potential_c_derivative(J, c, N, len(J))
    shape = RatFun(y[j - 1] * y[j + 1], y[j] * y[j])
    a = dV[j] / shape
    if not a.is_poly() or a.num.deg > 0 or a.is_zero():
        return None
    for k in range(1, N + 1):
        expected = shape * a if k == j else (-(shape * a) if (k - j - 1) % N == 0 else RatFun.const(0))
        if dV[k] != expected:
            return None
    return a.num.coeff(0)
