"""Conversions between critflow objects and sympy, used as an independent oracle."""
from fractions import Fraction

import sympy as sp

from critflow.exactalg import MultiPoly, Poly, RatFun

x = sp.Symbol("x")


def to_sympy_poly(p: Poly, var=x):
    return sum(sp.Rational(c.numerator, c.denominator) * var ** i for i, c in enumerate(p.coeffs))


def from_sympy_poly(expr, var=x) -> Poly:
    P = sp.Poly(sp.expand(expr), var)
    cs = [Fraction(int(c.p), int(c.q)) for c in reversed(P.all_coeffs())]
    return Poly(cs)


def to_sympy_ratfun(f: RatFun, var=x):
    return to_sympy_poly(f.num, var) / to_sympy_poly(f.den, var)


def to_sympy_multi(F: MultiPoly):
    syms = {v: sp.Symbol(v) for v in F.vars}
    total = sp.Integer(0)
    for e, c in F.terms.items():
        term = sp.Rational(c.numerator, c.denominator)
        for v, k in zip(F.vars, e):
            term *= syms[v] ** k
        total += term
    return sp.expand(total)


def sympy_equal(a, b):
    return sp.simplify(a - b) == 0
