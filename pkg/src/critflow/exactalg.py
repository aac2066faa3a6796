"""Exact arithmetic: rationals, polynomials, rational functions, Wronskians.

Rationals are ``fractions.Fraction``.  ``Poly`` is a dense univariate
polynomial whose coefficients may be rationals or themselves ``Poly`` objects
in another variable (used for one symbolic parameter).  ``MultiPoly`` is a
sparse multivariate polynomial with rational coefficients and ``RatFun`` a
reduced quotient of two rational ``Poly``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce

# Degree of the zero polynomial.  Behaves correctly under max() and + but is
# never an integer.
DEG_ZERO = float("-inf")


class ExactAlgError(ValueError):
    pass


class RootFindingError(ExactAlgError):
    def __init__(self, msg, best):
        super().__init__(msg)
        self.best = best


# ---------------------------------------------------------------- rationals

def Q(v) -> Fraction:
    """Coerce int, Fraction or a 'num/den' string to a Fraction."""
    if isinstance(v, Fraction):
        return v
    if isinstance(v, bool):
        raise TypeError("bool is not a rational")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v.strip())
    raise TypeError(f"cannot read {v!r} as a rational")


def rat_str(q) -> str:
    q = Q(q)
    return f"{q.numerator}/{q.denominator}"


def _coerce(c):
    if type(c) is int:
        return Fraction(c)
    return c


def _is_rational_list(cs):
    return all(type(c) is Fraction for c in cs)


def _to_ints(cs):
    """Scale a list of Fractions to integers: returns (ints, common denominator)."""
    d = 1
    for c in cs:
        den = c.denominator
        if den != 1:
            d = d * den // math.gcd(d, den)
    return [c.numerator * (d // c.denominator) for c in cs], d


# --------------------------------------------------------------- univariate

class Poly:
    """Dense polynomial in one variable, coefficients stored low to high."""

    __slots__ = ("coeffs", "var")

    def __init__(self, coeffs=(), var: str = "x"):
        cs = [_coerce(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)
        self.var = var

    @classmethod
    def _raw(cls, coeffs, var):
        p = cls.__new__(cls)
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        p.coeffs = tuple(cs)
        p.var = var
        return p

    @classmethod
    def gen(cls, var="x"):
        return cls((0, 1), var)

    @classmethod
    def const(cls, c, var="x"):
        return cls((c,), var)

    @classmethod
    def monomial(cls, k, c=1, var="x"):
        return cls([0] * k + [c], var)

    # basic data
    @property
    def deg(self):
        return len(self.coeffs) - 1 if self.coeffs else DEG_ZERO

    @property
    def lc(self):
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def coeff(self, k):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def is_const(self):
        return len(self.coeffs) <= 1

    def _same(self, other):
        return isinstance(other, Poly) and other.var == self.var

    # arithmetic
    def __add__(self, other):
        if isinstance(other, RatFun):
            return NotImplemented
        if not self._same(other):
            if self.coeffs:
                return Poly._raw((self.coeffs[0] + other,) + self.coeffs[1:], self.var)
            return Poly._raw((_coerce(other),), self.var)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Poly._raw(out, self.var)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw([-c for c in self.coeffs], self.var)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not self._same(other):
            if isinstance(other, RatFun):
                return NotImplemented
            other = _coerce(other)
            if other == 0:
                return Poly._raw((), self.var)
            return Poly._raw([c * other for c in self.coeffs], self.var)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly._raw((), self.var)
        if _is_rational_list(a) and _is_rational_list(b):
            ia, da = _to_ints(a)
            ib, db = _to_ints(b)
            out = [0] * (len(a) + len(b) - 1)
            for i, x in enumerate(ia):
                if x:
                    for j, y in enumerate(ib):
                        out[i + j] += x * y
            d = da * db
            return Poly._raw([Fraction(v, d) for v in out], self.var)
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                out[i + j] = out[i + j] + x * y
        return Poly._raw(out, self.var)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, other):
        if isinstance(other, Poly) and other.var == self.var:
            return RatFun(self, other)
        if isinstance(other, (int, Fraction)):
            inv = 1 / Fraction(other)
            return Poly._raw([c * inv for c in self.coeffs], self.var)
        return Poly._raw([c / other for c in self.coeffs], self.var)

    def __pow__(self, k: int):
        if k < 0:
            raise ExactAlgError("negative power of a polynomial")
        result = Poly.const(1, self.var)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def divmod(self, other: "Poly"):
        """Euclidean division; the divisor's leading coefficient must be invertible."""
        if not other.coeffs:
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        db = len(other.coeffs) - 1
        if len(r) - 1 < db:
            return Poly._raw((), self.var), self
        lc = other.coeffs[-1]
        inv = 1 / lc if type(lc) is Fraction else None
        q = [Fraction(0)] * (len(r) - db)
        b = other.coeffs
        for k in range(len(r) - 1, db - 1, -1):
            c = r[k]
            if c == 0:
                continue
            c = c * inv if inv is not None else c / lc
            q[k - db] = c
            for i in range(db + 1):
                r[k - db + i] = r[k - db + i] - c * b[i]
        return Poly._raw(q, self.var), Poly._raw(r[:db], self.var)

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def exact_div(self, other):
        if (other.coeffs and len(other.coeffs) <= len(self.coeffs)
                and _is_rational_list(self.coeffs) and _is_rational_list(other.coeffs)):
            a, da = _to_ints(self.coeffs)
            g, dg = _to_ints(other.coeffs)
            cont = reduce(math.gcd, g, 0)
            g = [v // cont for v in g]
            q = _int_quotient(a, g)
            if q is None:
                raise ExactAlgError("polynomial division is not exact")
            # self = A/da, other = G*cont/dg
            scale = Fraction(dg, da * cont)
            return Poly._raw(tuple(Fraction(v) * scale for v in q), self.var)
        q, r = self.divmod(other)
        if r:
            raise ExactAlgError("polynomial division is not exact")
        return q

    def deriv(self, k: int = 1):
        cs = self.coeffs
        for _ in range(k):
            cs = [i * cs[i] for i in range(1, len(cs))]
        return Poly._raw(cs, self.var)

    def integrate(self):
        """Antiderivative vanishing at zero."""
        return Poly._raw([Fraction(0)] + [c / (i + 1) for i, c in enumerate(self.coeffs)], self.var)

    def __call__(self, value):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * value + c
        return acc

    def compose(self, other):
        """self(other) where other is any ring element (typically a Poly)."""
        acc = Poly.const(0, other.var) if isinstance(other, Poly) else 0
        for c in reversed(self.coeffs):
            acc = acc * other + c
        return acc

    def scale_arg(self, a):
        """p(a*x)."""
        a = _coerce(a)
        return Poly._raw([c * a ** i for i, c in enumerate(self.coeffs)], self.var)

    def monic(self):
        if not self.coeffs:
            return self
        return self / self.coeffs[-1]

    def map_coeffs(self, f, var=None):
        return Poly._raw([_coerce(f(c)) for c in self.coeffs], var or self.var)

    def content_ints(self):
        """Integer primitive part as a list (rational coefficients only)."""
        ints, _ = _to_ints(self.coeffs)
        g = reduce(math.gcd, ints, 0)
        return [v // g for v in ints] if g else ints

    # comparisons
    def __eq__(self, other):
        if isinstance(other, Poly):
            if other.var != self.var and not (self.is_const() and other.is_const()):
                return False
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return not self.coeffs
            return self.coeffs == (other,)
        return NotImplemented

    def __hash__(self):
        return hash((self.var, self.coeffs))

    def __repr__(self):
        return f"Poly({self.to_str()})"

    def to_str(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            cs = f"({c.to_str()})" if isinstance(c, Poly) else str(c)
            if k == 0:
                terms.append(cs)
            else:
                mon = self.var if k == 1 else f"{self.var}^{k}"
                terms.append(mon if cs == "1" else f"{cs}*{mon}")
        return " + ".join(terms).replace("+ -", "- ")

    def to_json(self):
        return [c.to_json() if isinstance(c, Poly) else rat_str(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data, var="x"):
        return cls([Q(c) for c in data], var)


def _int_prs_gcd(a, b):
    """Primitive remainder sequence gcd of integer coefficient lists (low to high)."""
    def prim(p):
        g = reduce(math.gcd, p, 0)
        return [v // g for v in p] if g > 1 else p

    def trim(p):
        while p and p[-1] == 0:
            p.pop()
        return p

    a, b = prim(trim(list(a))), prim(trim(list(b)))
    if len(a) < len(b):
        a, b = b, a
    while b:
        # pseudo remainder of a by b
        r = list(a)
        db = len(b) - 1
        lb = b[-1]
        while len(r) - 1 >= db and r:
            c = r[-1]
            shift = len(r) - 1 - db
            r = [v * lb for v in r]
            for i in range(db + 1):
                r[shift + i] -= c * b[i]
            trim(r)
        a, b = b, prim(r)
    return a


def _int_quotient(a, g):
    """a / g over Z for primitive g, or None if g does not divide a (Gauss's lemma)."""
    r = list(a)
    dg = len(g) - 1
    lg = g[-1]
    if len(r) - 1 < dg:
        return [] if not any(r) else None
    q = [0] * (len(r) - dg)
    while len(r) - 1 >= dg:
        c, rem = divmod(r[-1], lg)
        if rem:
            return None
        shift = len(r) - 1 - dg
        q[shift] = c
        for i in range(dg + 1):
            r[shift + i] -= c * g[i]
        while r and r[-1] == 0:
            r.pop()
    return q if not r else None


def _int_divides(g, a):
    return _int_quotient(a, g) is not None


def _heuristic_gcd(a, b, tries=6):
    """gcd via integer gcd of values at a large point, rebuilt xi-adically.

    Returns None when every evaluation point fails; the result is always verified.
    """
    def prim(p):
        g = reduce(math.gcd, p, 0)
        if p[-1] < 0:
            g = -g
        return [v // g for v in p]

    a, b = prim(a), prim(b)
    xi = 2 * min(max(abs(v) for v in a), max(abs(v) for v in b)) + 29
    for _ in range(tries):
        va = vb = 0
        for c in reversed(a):
            va = va * xi + c
        for c in reversed(b):
            vb = vb * xi + c
        h = math.gcd(va, vb)
        coeffs = []
        while h:
            c = h % xi
            if c > xi // 2:
                c -= xi
            coeffs.append(c)
            h = (h - c) // xi
        if coeffs:
            g = prim(coeffs)
            if _int_divides(g, a) and _int_divides(g, b):
                return g
        xi = xi * 73794 // 27011
    return None


def gcd_poly(p: Poly, q: Poly) -> Poly:
    """Monic gcd of two rational polynomials (zero if both are zero)."""
    if not p.coeffs:
        return q.monic()
    if not q.coeffs:
        return p.monic()
    if len(p.coeffs) == 1 or len(q.coeffs) == 1:
        return Poly.const(1, p.var)
    a, b = _to_ints(p.coeffs)[0], _to_ints(q.coeffs)[0]
    g = _heuristic_gcd(a, b)
    if g is None:
        g = _int_prs_gcd(a, b)
    return Poly([Fraction(v) for v in g], p.var).monic()


def squarefree(p: Poly) -> bool:
    return gcd_poly(p, p.deriv()).deg <= 0


# ------------------------------------------------------- rational functions

class RatFun:
    """num/den with gcd(num, den) = 1 and den monic."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, _reduced=False):
        var = num.var if isinstance(num, Poly) else (den.var if isinstance(den, Poly) else "x")
        if not isinstance(num, Poly):
            num = Poly.const(num, var)
        if den is None:
            den = Poly.const(1, var)
        elif not isinstance(den, Poly):
            den = Poly.const(den, var)
        if not den.coeffs:
            raise ZeroDivisionError("rational function with zero denominator")
        if not _reduced:
            if not num.coeffs:
                den = Poly.const(1, var)
            else:
                g = gcd_poly(num, den)
                if g.deg > 0:
                    num = num.exact_div(g)
                    den = den.exact_div(g)
            lc = den.coeffs[-1]
            if lc != 1:
                num = num / lc
                den = den / lc
        self.num = num
        self.den = den

    @property
    def var(self):
        return self.num.var

    @classmethod
    def from_poly(cls, p: Poly):
        return cls(p, Poly.const(1, p.var), _reduced=True)

    @classmethod
    def const(cls, c, var="x"):
        return cls(Poly.const(c, var), Poly.const(1, var), _reduced=True)

    def is_zero(self):
        return not self.num.coeffs

    def __bool__(self):
        return bool(self.num.coeffs)

    def is_poly(self):
        return self.den.deg == 0

    def _lift(self, other):
        if isinstance(other, RatFun):
            return other
        if isinstance(other, Poly) and other.var == self.var:
            return RatFun.from_poly(other)
        return RatFun.const(other, self.var)

    def __add__(self, other):
        other = self._lift(other)
        if not other.num.coeffs:
            return self
        if not self.num.coeffs:
            return other
        if self.den == other.den:
            return RatFun(self.num + other.num, self.den)
        if self.den.deg == 0:
            return RatFun(self.num * other.den + other.num, other.den, _reduced=True)
        if other.den.deg == 0:
            return RatFun(self.num + other.num * self.den, self.den, _reduced=True)
        g = gcd_poly(self.den, other.den)
        if g.deg == 0:
            return RatFun(self.num * other.den + other.num * self.den,
                          self.den * other.den, _reduced=True)
        d1 = self.den.exact_div(g)
        d2 = other.den.exact_div(g)
        return RatFun(self.num * d2 + other.num * d1, d1 * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFun(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, (RatFun, Poly)):
            other = _coerce(other)
            if other == 0:
                return RatFun.const(0, self.var)
            return RatFun(self.num * other, self.den, _reduced=True)
        other = self._lift(other)
        if not self.num.coeffs or not other.num.coeffs:
            return RatFun.const(0, self.var)
        g1 = gcd_poly(self.num, other.den)
        g2 = gcd_poly(other.num, self.den)
        n1 = self.num.exact_div(g1) if g1.deg > 0 else self.num
        d2 = other.den.exact_div(g1) if g1.deg > 0 else other.den
        n2 = other.num.exact_div(g2) if g2.deg > 0 else other.num
        d1 = self.den.exact_div(g2) if g2.deg > 0 else self.den
        num, den = n1 * n2, d1 * d2
        lc = den.coeffs[-1]
        if lc != 1:
            num, den = num / lc, den / lc
        return RatFun(num, den, _reduced=True)

    __rmul__ = __mul__

    def inverse(self):
        if not self.num.coeffs:
            raise ZeroDivisionError("inverse of zero rational function")
        return RatFun(self.den, self.num)

    def __truediv__(self, other):
        other = self._lift(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return RatFun(self.num ** k, self.den ** k, _reduced=True)

    def deriv(self):
        n, d = self.num, self.den
        if d.deg == 0:
            return RatFun(n.deriv(), d, _reduced=True)
        return RatFun(n.deriv() * d - n * d.deriv(), d * d)

    def __call__(self, value):
        return self.num(value) / self.den(value)

    def __eq__(self, other):
        if isinstance(other, RatFun):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (Poly, int, Fraction)):
            return self == self._lift(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RatFun({self.to_str()})"

    def to_str(self):
        if self.den.deg == 0:
            return self.num.to_str()
        return f"({self.num.to_str()})/({self.den.to_str()})"

    def to_json(self):
        return {"num": self.num.to_json(), "den": self.den.to_json()}


def log_derivative(p: Poly) -> RatFun:
    """p'/p."""
    if not p.coeffs:
        raise ExactAlgError("log derivative of the zero polynomial")
    return RatFun(p.deriv(), p)


# ------------------------------------------------------------ multivariate

class MultiPoly:
    """Sparse polynomial: exponent tuple -> Fraction over named variables."""

    __slots__ = ("vars", "terms")

    def __init__(self, variables, terms=None):
        self.vars = tuple(variables)
        self.terms = {}
        if terms:
            n = len(self.vars)
            for e, c in terms.items():
                e = tuple(e)
                if len(e) != n:
                    raise ExactAlgError(f"exponent {e} has wrong arity for {self.vars}")
                c = Q(c)
                if c != 0:
                    self.terms[e] = self.terms.get(e, 0) + c
            self.terms = {e: c for e, c in self.terms.items() if c != 0}

    @classmethod
    def _raw(cls, variables, terms):
        m = cls.__new__(cls)
        m.vars = variables
        m.terms = terms
        return m

    @classmethod
    def const(cls, c, variables=()):
        c = Q(c)
        vs = tuple(variables)
        return cls._raw(vs, {(0,) * len(vs): c} if c != 0 else {})

    @classmethod
    def var(cls, name, variables=None):
        vs = tuple(variables) if variables is not None else (name,)
        e = tuple(1 if v == name else 0 for v in vs)
        return cls._raw(vs, {e: Fraction(1)})

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def with_vars(self, variables):
        """Re-express over a variable list containing all variables in use."""
        variables = tuple(variables)
        if variables == self.vars:
            return self
        pos = []
        for v in self.vars:
            pos.append(variables.index(v) if v in variables else None)
        n = len(variables)
        out = {}
        for e, c in self.terms.items():
            ne = [0] * n
            for k, p in zip(e, pos):
                if k:
                    if p is None:
                        raise ExactAlgError(f"variable {self.vars} not contained in {variables}")
                    ne[p] = k
            out[tuple(ne)] = c
        return MultiPoly._raw(variables, out)

    def _unify(self, other):
        if isinstance(other, MultiPoly):
            if other.vars == self.vars:
                return self, other
            vs = list(self.vars)
            for v in other.vars:
                if v not in vs:
                    vs.append(v)
            return self.with_vars(vs), other.with_vars(vs)
        return self, MultiPoly.const(other, self.vars)

    def __add__(self, other):
        a, b = self._unify(other)
        out = dict(a.terms)
        for e, c in b.terms.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v = v + c
                if v:
                    out[e] = v
                else:
                    del out[e]
        return MultiPoly._raw(a.vars, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other if isinstance(other, MultiPoly) else -Q(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            c0 = Q(other)
            if c0 == 0:
                return MultiPoly._raw(self.vars, {})
            return MultiPoly._raw(self.vars, {e: c * c0 for e, c in self.terms.items()})
        a, b = self._unify(other)
        if not a.terms or not b.terms:
            return MultiPoly._raw(a.vars, {})
        # integer path: scale both to integer coefficients
        ea, ca = zip(*a.terms.items())
        eb, cb = zip(*b.terms.items())
        ia, da = _to_ints(ca)
        ib, db = _to_ints(cb)
        out = {}
        get = out.get
        for e1, x in zip(ea, ia):
            for e2, y in zip(eb, ib):
                e = tuple(p + q for p, q in zip(e1, e2))
                out[e] = get(e, 0) + x * y
        d = da * db
        return MultiPoly._raw(a.vars, {e: Fraction(v, d) for e, v in out.items() if v})

    __rmul__ = __mul__

    def __truediv__(self, other):
        c0 = Q(other)
        return MultiPoly._raw(self.vars, {e: c / c0 for e, c in self.terms.items()})

    def __pow__(self, k):
        result = MultiPoly.const(1, self.vars)
        for _ in range(k):
            result = result * self
        return result

    def deriv(self, name):
        if name not in self.vars:
            return MultiPoly._raw(self.vars, {})
        i = self.vars.index(name)
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                ne = e[:i] + (k - 1,) + e[i + 1:]
                out[ne] = c * k
        return MultiPoly._raw(self.vars, out)

    def degree_in(self, name):
        if name not in self.vars:
            return 0 if self.terms else DEG_ZERO
        i = self.vars.index(name)
        return max((e[i] for e in self.terms), default=DEG_ZERO)

    def coeff_in(self, name, k):
        """Coefficient of name^k as a MultiPoly over the remaining variables."""
        i = self.vars.index(name)
        vs = self.vars[:i] + self.vars[i + 1:]
        out = {}
        for e, c in self.terms.items():
            if e[i] == k:
                out[e[:i] + e[i + 1:]] = c
        return MultiPoly._raw(vs, out)

    def subs(self, values: dict):
        """Substitute rationals for some variables; returns a MultiPoly over the rest."""
        keep = [i for i, v in enumerate(self.vars) if v not in values]
        drop = [(i, Q(values[v])) for i, v in enumerate(self.vars) if v in values]
        vs = tuple(self.vars[i] for i in keep)
        out = {}
        for e, c in self.terms.items():
            for i, val in drop:
                if e[i]:
                    c = c * val ** e[i]
            if c == 0:
                continue
            ne = tuple(e[i] for i in keep)
            out[ne] = out.get(ne, 0) + c
        return MultiPoly._raw(vs, {e: c for e, c in out.items() if c != 0})

    def shift(self, shifts: dict):
        """Substitute v -> v + shifts[v]."""
        result = MultiPoly.const(0, self.vars)
        lin = {v: MultiPoly.var(v, self.vars) + Q(a) for v, a in shifts.items() if v in self.vars}
        powers = {}
        for e, c in self.terms.items():
            term = MultiPoly.const(c, self.vars)
            rest = list(e)
            for v, base in lin.items():
                i = self.vars.index(v)
                k = e[i]
                if k:
                    key = (v, k)
                    if key not in powers:
                        powers[key] = base ** k
                    term = term * powers[key]
                    rest[i] = 0
            mono = MultiPoly._raw(self.vars, {tuple(rest): Fraction(1)})
            result = result + term * mono
        return result

    def to_poly(self, name, var=None):
        """Univariate Poly in ``name`` (all other variables must be absent)."""
        i = self.vars.index(name) if name in self.vars else None
        deg = -1
        for e in self.terms:
            for j, k in enumerate(e):
                if j != i and k:
                    raise ExactAlgError(f"{self.vars[j]} still present")
            deg = max(deg, e[i] if i is not None else 0)
        cs = [Fraction(0)] * (deg + 1)
        for e, c in self.terms.items():
            cs[e[i] if i is not None else 0] = c
        return Poly(cs, var or name)

    def used_vars(self):
        return tuple(v for j, v in enumerate(self.vars) if any(e[j] for e in self.terms))

    def trim(self):
        return self.with_vars(self.used_vars())

    def is_const(self):
        return all(not any(e) for e in self.terms)

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            a, b = self._unify(other)
            return a.terms == b.terms
        if isinstance(other, (int, Fraction)):
            return self == MultiPoly.const(other, self.vars)
        return NotImplemented

    def __hash__(self):
        t = self.trim()
        return hash((t.vars, frozenset(t.terms.items())))

    def __repr__(self):
        return f"MultiPoly({self.to_str()})"

    def to_str(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mon = "*".join(v if k == 1 else f"{v}^{k}" for v, k in zip(self.vars, e) if k)
            if not mon:
                parts.append(str(c))
            elif c == 1:
                parts.append(mon)
            elif c == -1:
                parts.append("-" + mon)
            else:
                parts.append(f"{c}*{mon}")
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self):
        return {"vars": list(self.vars),
                "terms": [[list(e), rat_str(self.terms[e])] for e in sorted(self.terms)]}

    @classmethod
    def from_json(cls, data):
        return cls(data["vars"], {tuple(e): Q(c) for e, c in data["terms"]})


# ------------------------------------------------------------ determinants

def det(matrix):
    """Division-free determinant by Laplace expansion with memoized minors.

    Works over any commutative ring; zero entries prune the expansion.
    """
    n = len(matrix)
    if n == 0:
        return Fraction(1)
    if any(len(row) != n for row in matrix):
        raise ExactAlgError("determinant of a non-square matrix")
    nz = [[j for j in range(n) if not _is_zero(matrix[i][j])] for i in range(n)]
    memo = {}

    def minor(i, used):
        # determinant of rows i..n-1 with the columns not in `used`
        if i == n:
            return 1
        key = used
        if key in memo:
            return memo[key]
        total = None
        free_before = 0
        for j in range(n):
            if used >> j & 1:
                continue
            if j in nz_set[i]:
                sub = minor(i + 1, used | (1 << j))
                if not _is_zero(sub):
                    term = matrix[i][j] * sub
                    if free_before & 1:
                        term = -term
                    total = term if total is None else total + term
            free_before += 1
        if total is None:
            total = 0
        memo[key] = total
        return total

    nz_set = [set(r) for r in nz]
    result = minor(0, 0)
    if isinstance(result, int):
        result = Fraction(result)
    return result


def _is_zero(v):
    if isinstance(v, (Poly, MultiPoly, RatFun)):
        return v.is_zero()
    return v == 0


def _derivative(f, var):
    if isinstance(f, MultiPoly):
        return f.deriv(var)
    if isinstance(f, Poly):
        if f.var != var:
            raise ExactAlgError(f"polynomial in {f.var} differentiated in {var}")
        return f.deriv()
    if isinstance(f, RatFun):
        if f.var != var:
            raise ExactAlgError(f"rational function in {f.var} differentiated in {var}")
        return f.deriv()
    raise ExactAlgError(f"cannot differentiate {type(f).__name__}")


def wronskian(fs, var="x"):
    """det(f_i^{(j)}), rows indexed by the functions."""
    fs = list(fs)
    if not fs:
        raise ExactAlgError("Wronskian of an empty list")
    kinds = {type(f) for f in fs}
    if len(kinds) != 1:
        raise ExactAlgError(f"mixed types in Wronskian: {sorted(k.__name__ for k in kinds)}")
    if isinstance(fs[0], MultiPoly):
        vs = fs[0].vars
        if any(f.vars != vs for f in fs):
            allv = []
            for f in fs:
                allv += [v for v in f.vars if v not in allv]
            if var not in allv:
                raise ExactAlgError(f"{var} is not a variable of the entries")
            fs = [f.with_vars(allv) for f in fs]
        elif var not in vs:
            raise ExactAlgError(f"{var} is not a variable of the entries")
    n = len(fs)
    rows = []
    for f in fs:
        row = [f]
        for _ in range(n - 1):
            row.append(_derivative(row[-1], var))
        rows.append(row)
    d = det(rows)
    if not isinstance(d, type(fs[0])):
        if isinstance(fs[0], MultiPoly):
            d = MultiPoly.const(d, fs[0].vars)
        elif isinstance(fs[0], Poly):
            d = Poly.const(d, fs[0].var)
    return d


# ------------------------------------------------------------ linear solve

@dataclass
class LinearSolution:
    """Tagged result: status is 'unique', 'underdetermined' or 'inconsistent'."""
    status: str
    solution: list | None = None
    kernel: list = field(default_factory=list)

    @property
    def dimension(self):
        return len(self.kernel)


def linear_solve(matrix, rhs) -> LinearSolution:
    """Gauss-Jordan elimination over an exact field (Fraction or RatFun entries)."""
    m = len(matrix)
    n = len(matrix[0]) if m else 0
    if len(rhs) != m:
        raise ExactAlgError("right-hand side has the wrong length")
    sample = next((e for row in matrix for e in row if not _is_zero(e)), Fraction(0))
    one = RatFun.const(1, sample.var) if isinstance(sample, RatFun) else Fraction(1)
    zero = one * 0
    A = [[(e if isinstance(e, RatFun) else (one * e)) for e in row] + [one * rhs[i]]
         for i, row in enumerate(matrix)]
    pivots = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, m) if not _is_zero(A[i][col])), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = one / A[r][col]
        A[r] = [e * inv for e in A[r]]
        for i in range(m):
            if i != r and not _is_zero(A[i][col]):
                f = A[i][col]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(col)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if not _is_zero(A[i][n]):
            return LinearSolution("inconsistent")
    sol = [zero] * n
    for i, col in enumerate(pivots):
        sol[col] = A[i][n]
    free = [j for j in range(n) if j not in pivots]
    kernel = []
    for fcol in free:
        vec = [zero] * n
        vec[fcol] = one
        for i, col in enumerate(pivots):
            vec[col] = -A[i][fcol]
        kernel.append(vec)
    return LinearSolution("unique" if not free else "underdetermined", sol, kernel)


# -------------------------------------------------------------- root finding

def poly_roots_numeric(p: Poly, tol: float = 1e-12, max_iter: int = 500):
    """All complex roots with multiplicity by Aberth iteration, Newton polished."""
    if not p.coeffs:
        raise ExactAlgError("roots of the zero polynomial")
    n = p.deg
    if n <= 0:
        return []
    cs = [complex(float(c)) for c in p.coeffs]
    lc = cs[-1]
    a = [c / lc for c in cs]
    dcs = [i * a[i] for i in range(1, n + 1)]

    def ev(z):
        v = 0j
        for c in reversed(a):
            v = v * z + c
        return v

    def evd(z):
        v = 0j
        for c in reversed(dcs):
            v = v * z + c
        return v

    def rel_residual(z):
        den = sum(abs(c) * abs(z) ** i for i, c in enumerate(a))
        return abs(ev(z)) / den if den else abs(ev(z))

    # initial guesses on a circle of the Fujiwara radius
    radius = 2 * max(abs(c) ** (1.0 / (n - i)) for i, c in enumerate(a[:-1]))
    zs = [radius * cmath.exp(2j * math.pi * (k + 0.25) / n) for k in range(n)]
    for _ in range(max_iter):
        done = True
        for i in range(n):
            z = zs[i]
            pv = ev(z)
            if pv == 0:
                continue
            ratio = pv / evd(z) if evd(z) != 0 else pv
            s = sum(1 / (z - zs[k]) for k in range(n) if k != i and z != zs[k])
            w = ratio / (1 - ratio * s)
            zs[i] = z - w
            if abs(w) > 1e-15 * max(1.0, abs(z)):
                done = False
        if done:
            break
    # polish and check
    out = []
    for z in zs:
        for _ in range(3):
            d = evd(z)
            if d == 0:
                break
            step = ev(z) / d
            if abs(step) < 1e-17 * max(1.0, abs(z)):
                break
            z2 = z - step
            if rel_residual(z2) <= rel_residual(z):
                z = z2
            else:
                break
        out.append(z)
    worst = max(rel_residual(z) for z in out)
    if worst >= tol:
        raise RootFindingError(f"Aberth iteration did not reach tol {tol} (residual {worst:.3e})", out)
    return out
