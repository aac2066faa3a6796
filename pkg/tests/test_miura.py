import random
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from critflow.combin import is_degree_increasing
from critflow.exactalg import Poly, RatFun, log_derivative
from critflow.genpop import PolyTuple, apply_step, generate_multi, generate_step
from critflow.miura import (DiagRF, H, LaurentMat, MiuraError, MiuraOper, build_TJ, check_dressing,
                            conj_lambda_power, cyclic_r, dress, exp_gE, gamma_polynomial_spot_check,
                            gauge_adjoint, lmat_mul, mkdv_vector_field, mkdv_vector_field_TJ,
                            mkdv_vector_fields, mu_from_tuple, potential_c_derivative, verify_theorem_main)
from critflow.psdo import FloorError
from helpers import to_sympy_ratfun, x

X = Poly.gen("x")
lam = sp.Symbol("lam")


def random_J(rng, N, m):
    J = []
    while len(J) < m:
        j = rng.randint(1, N)
        if is_degree_increasing(tuple(J) + (j,), N):
            J.append(j)
    return tuple(J)


def random_c(rng, m):
    return tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(m))


def cyclic(m, N):
    return tuple((k % N) + 1 for k in range(m))


# --------------------------------------------- matrix oracle for the twist

def lambda_matrix(N, k):
    """Λ = Σ e_{i+1,i} + λ e_{1,N} as an explicit N x N matrix over C(λ)."""
    L = sp.zeros(N, N)
    for i in range(N - 1):
        L[i + 1, i] = 1
    L[0, N - 1] = lam
    return L ** k if k >= 0 else (L.inv()) ** (-k)


def to_matrix(M: LaurentMat):
    N = M.N
    out = sp.zeros(N, N)
    for k, d in M.terms.items():
        out += sp.diag(*[to_sympy_ratfun(e) for e in d.entries]) * lambda_matrix(N, k)
    return out


def random_lmat(rng, N):
    terms = {}
    for k in range(rng.randint(-2, 0), rng.randint(0, 2) + 1):
        terms[k] = DiagRF([RatFun(Poly([rng.randint(-3, 3), rng.randint(-2, 2)])) for _ in range(N)])
    return LaurentMat(N, terms)


@settings(max_examples=15)
@given(st.integers(0, 10 ** 6), st.sampled_from([2, 3]))
def test_twisted_product_matches_matrices(seed, N):
    rng = random.Random(seed)
    a, b = random_lmat(rng, N), random_lmat(rng, N)
    diff = to_matrix(lmat_mul(a, b)) - to_matrix(a) * to_matrix(b)
    assert diff.applyfunc(sp.simplify) == sp.zeros(N, N)


def test_twist_on_idempotents():
    N = 3
    lam1 = LaurentMat.Lambda(N)
    for i in range(1, N + 1):
        e = LaurentMat.diag(DiagRF.unit(i, N))
        e_next = LaurentMat.diag(DiagRF.unit(i + 1, N))
        assert lam1 * e == e_next * lam1


def test_sigma_has_order_N():
    d = DiagRF([RatFun(X), RatFun.const(2), RatFun(X * X)])
    assert d.sigma(3) == d and d.sigma(1) != d


def test_degree_additive():
    a = LaurentMat(2, {2: DiagRF.scalar(1, 2)})
    b = LaurentMat(2, {-3: DiagRF.unit(1, 2)})
    assert (a * b).top == -1


def test_parts():
    M = LaurentMat(2, {1: DiagRF.scalar(1, 2), 0: DiagRF.unit(1, 2), -1: DiagRF.unit(2, 2)})
    plus, minus, zero = M.parts()
    assert set(plus.terms) == {0, 1} and set(minus.terms) == {-1} and zero == DiagRF.unit(1, 2)


def test_floor_underflow_names_depth():
    T = LaurentMat(2, {0: DiagRF.scalar(1, 2), -1: DiagRF.unit(1, 2)}, floor=-3)
    with pytest.raises(FloorError) as err:
        T.mul(LaurentMat.Lambda(2, 2), floor=-4)
    assert err.value.required == -1


# ---------------------------------------------------------------- exponentials

def test_exp_zero_is_identity():
    assert exp_gE(RatFun.const(0), 1, 3) == LaurentMat.identity(3)


@pytest.mark.parametrize("j", [1, 2, 3])
def test_exp_inverse(j):
    g = RatFun(X + 1, X * X + 3)
    assert exp_gE(g, j, 3) * exp_gE(-g, j, 3) == LaurentMat.identity(3)


def test_E_N_wraps():
    M = to_matrix(exp_gE(RatFun.const(1), 2, 2)) - sp.eye(2)
    assert M == sp.Matrix([[0, 0], [1 / lam, 0]])


def test_unipotent_inverse():
    T = exp_gE(RatFun(X), 1, 2) * exp_gE(RatFun(X + 2), 2, 2)
    assert T.mul(T.inverse_unipotent(-6), -6).equal_to(LaurentMat.identity(2), -6)


# ---------------------------------------------------------------- opers

def test_empty_tuple_oper():
    assert mu_from_tuple(PolyTuple.empty(3)).V.is_zero()


def test_adler_moser_oper():
    c1, c2 = Fraction(2), Fraction(-3)
    y = generate_multi((1, 2), (c1, c2), 2)
    v = log_derivative(X + c1) - log_derivative(X ** 3 + X ** 2 * (3 * c1) + X * (3 * c1 * c1) + c2)
    assert mu_from_tuple(y).V == DiagRF([v, -v])


def test_trace_nonzero_rejected():
    with pytest.raises(MiuraError):
        MiuraOper(DiagRF([RatFun(X), RatFun.const(0)]))


@given(st.integers(0, 10 ** 6), st.sampled_from([2, 3, 4]), st.integers(0, 4))
def test_oper_trace_zero(seed, N, m):
    rng = random.Random(seed)
    J = random_J(rng, N, m)
    assert mu_from_tuple(generate_multi(J, random_c(rng, m), N)).V.trace().is_zero()


def test_gauge_zero():
    L = mu_from_tuple(generate_multi((1,), (3,), 2))
    res = gauge_adjoint(L, RatFun.const(0), 2)
    assert res.is_miura and res.V == L.V


@given(st.integers(0, 10 ** 6), st.sampled_from([2, 3]), st.integers(0, 3))
def test_gauge_by_generation_witness(seed, N, m):
    rng = random.Random(seed)
    J = random_J(rng, N, m + 1)
    c = random_c(rng, m + 1)
    y = generate_multi(J[:-1], c[:-1], N)
    j = J[-1]
    y_new = apply_step(y, generate_step(y, j), c[-1])
    g = log_derivative(y_new[j]) - log_derivative(y[j])
    res = gauge_adjoint(mu_from_tuple(y), g, j)
    assert res.is_miura
    assert res.V == mu_from_tuple(y_new).V


# ---------------------------------------------------------------- T^J

def test_TJ_empty():
    tj = build_TJ((), (), 3)
    assert tj.T == LaurentMat.identity(3)


def test_TJ_adler_moser_factors():
    tj = build_TJ((1, 2), (1, 5), 2)
    expected = exp_gE(tj.gs[1], 2, 2) * exp_gE(tj.gs[0], 1, 2)
    assert tj.T == expected
    V = H(1, 2) * tj.gs[0] + H(2, 2) * tj.gs[1]
    assert V == mu_from_tuple(generate_multi((1, 2), (1, 5), 2)).V


@given(st.integers(0, 10 ** 6), st.sampled_from([2, 3]), st.integers(0, 5))
def test_TJ_conjugation(seed, N, m):
    rng = random.Random(seed)
    build_TJ(random_J(rng, N, m), random_c(rng, m), N)   # raises on failure


# ---------------------------------------------------------------- dressing

def test_dress_empty_oper():
    D = dress(MiuraOper(DiagRF.zero(2)), -4)
    assert D.T == LaurentMat.identity(2).truncate(-4)
    assert all(b.is_zero() for b in D.b.values())


def test_dress_floor_must_be_negative():
    with pytest.raises(MiuraError):
        dress(MiuraOper(DiagRF.zero(2)), 0)


@pytest.mark.parametrize("J,c,N", [((1, 2), (1, 5), 2), ((1, 2, 3), (1, 2, 3), 3), ((2, 1, 3), (0, 1, -1), 3)])
def test_dressing_scalarizes(J, c, N):
    L = mu_from_tuple(generate_multi(J, c, N))
    assert check_dressing(L, dress(L, -5), -5)


@pytest.mark.parametrize("J,c,N,r", [((1, 2), (1, 5), 2, 3), ((1, 2, 3), (1, 2, 3), 3, 2),
                                     ((1, 2, 1), (2, 0, -1), 2, 4)])
def test_dressing_matches_TJ_conjugate(J, c, N, r):
    L = mu_from_tuple(generate_multi(J, c, N))
    T = dress(L, -r).T
    A = conj_lambda_power(T, T.inverse_unipotent(-r), r, 0)
    tj = build_TJ(J, c, N)
    B = conj_lambda_power(tj.T, tj.Tinv, r)
    assert all(A.coeff(k) == B.coeff(k) for k in range(0, r + 1))
    assert mkdv_vector_field(L, r) == mkdv_vector_field_TJ(tj, r)


# ---------------------------------------------------------------- mKdV fields

@pytest.mark.parametrize("r", [1, 2, 3, 5])
def test_field_at_empty_oper(r):
    assert mkdv_vector_field(MiuraOper(DiagRF.zero(3)), r).is_zero()


@pytest.mark.parametrize("j", [1, 2])
def test_one_step_field_r1(j):
    c = Fraction(5, 2)
    J = (j,)
    L = mu_from_tuple(generate_multi(J, (c,), 2))
    expected = H(j, 2) * RatFun(Poly([-1]), (X + c) * (X + c))
    assert mkdv_vector_field(L, 1) == expected


@pytest.mark.parametrize("r", [2, 3, 4, 5])
def test_one_step_field_higher_r_vanishes(r):
    L = mu_from_tuple(generate_multi((1,), (Fraction(-4, 3),), 2))
    assert mkdv_vector_field(L, r).is_zero()


def test_field_floor_error():
    L = mu_from_tuple(generate_multi((1,), (1,), 2))
    with pytest.raises(FloorError) as err:
        mkdv_vector_field(L, 3, floor=-2)
    assert err.value.required == -3


def test_fields_from_one_dressing():
    L = mu_from_tuple(generate_multi((1, 2), (1, 5), 2))
    many = mkdv_vector_fields(L, [1, 2, 3])
    assert all(many[r] == mkdv_vector_field(L, r) for r in (1, 2, 3))


# ---------------------------------------------------------------- tangency

def test_gamma_one_step():
    rep = verify_theorem_main((1,), (3,), 1, 2)
    assert rep.ok and rep.gamma == [1] and rep.residual.is_zero()


def test_gamma_one_step_r2_vanishes():
    rep = verify_theorem_main((1,), (3,), 2, 2)
    assert rep.ok and rep.vanishes


def test_gamma_four_step_example():
    rep = verify_theorem_main((1, 2, 1, 2), (1, 2, 3, 4), 1, 2, use_dressing=False)
    assert rep.ok and rep.gamma == [1, 3, 60, 420]


@pytest.mark.parametrize("ell,N,r", [(1, 2, 1), (2, 2, 3), (3, 2, 5), (1, 3, 1), (2, 3, 2), (3, 3, 4),
                                     (4, 3, 5), (5, 3, 7)])
def test_cyclic_r(ell, N, r):
    assert cyclic_r(ell, N) == r


@pytest.mark.parametrize("N,m", [(2, 2), (2, 3), (2, 4), (3, 3), (3, 4), (3, 5)])
def test_cyclic_flow_is_last_parameter(N, m):
    J = cyclic(m, N)
    c = tuple(range(1, m + 1))
    rep = verify_theorem_main(J, c, cyclic_r(m, N), N, use_dressing=False)
    assert rep.ok
    assert all(g == 0 for g in rep.gamma[:-1]) and rep.gamma[-1] != 0


@pytest.mark.parametrize("J,c,r,N,last", [((1, 2, 1, 2), (1, 2, 3, 4), 7, 2, -1575),
                                          ((1, 2, 3, 1), (1, 2, 3, 4), 5, 3, -80),
                                          ((1, 2, 3, 1, 2), (1, 2, 3, 4, 5), 7, 3, 1120)])
def test_cyclic_flow_constants(J, c, r, N, last):
    assert verify_theorem_main(J, c, r, N, use_dressing=False).gamma[-1] == last


@settings(max_examples=10)
@given(st.integers(0, 10 ** 6), st.sampled_from([2, 3]), st.integers(1, 3))
def test_tangency_random(seed, N, m):
    rng = random.Random(seed)
    J, c = random_J(rng, N, m), random_c(rng, m)
    for r in range(1, 2 * m + 3):
        rep = verify_theorem_main(J, c, r, N, use_dressing=False)
        assert rep.ok and rep.residual.is_zero()
        if r > 2 * m:
            assert rep.vanishes


def test_potential_derivative_matches_difference_quotient():
    # y_2 is affine in c_2, so a unit difference gives ∂y_2/∂c_2 exactly
    J, c, N = (1, 2), (Fraction(1), Fraction(5)), 2
    dV = potential_c_derivative(J, c, N, 2)
    y = generate_multi(J, c, N)
    y_dir = generate_multi(J, (c[0], c[1] + 1), N)[2] - y[2]
    expected = RatFun(y_dir, y[2]).deriv()
    assert dV == DiagRF([-expected, expected])


def test_gamma_polynomial_in_c():
    assert gamma_polynomial_spot_check((1, 2), (1, 5), 1, 2, 1)
    assert gamma_polynomial_spot_check((1, 2, 3), (1, 2, 3), 2, 3, 2, degree_bound=3)
