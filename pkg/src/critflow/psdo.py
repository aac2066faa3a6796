"""Pseudodifferential operators Σ a_i ∂^i with rational-function coefficients.

``floor`` records the lowest degree whose coefficient is known exactly;
``None`` means the operator is known completely (all lower terms vanish).
Composition uses ∂^k u = Σ_l C(k, l) u^{(l)} ∂^{k-l} with the binomial
C(k, l) = k(k-1)...(k-l+1)/l!, valid for negative k.
"""
from __future__ import annotations

from fractions import Fraction
from math import factorial

from .exactalg import RatFun


class FloorError(ValueError):
    def __init__(self, msg, required=None):
        super().__init__(msg)
        self.required = required


def binom(k: int, l: int) -> Fraction:
    num = 1
    for i in range(l):
        num *= k - i
    return Fraction(num, factorial(l))


def _rf(c):
    return c if isinstance(c, RatFun) else RatFun.const(c)


def _max_floor(*fs):
    fs = [f for f in fs if f is not None]
    return max(fs) if fs else None


class PsDO:
    __slots__ = ("terms", "floor")

    def __init__(self, terms=None, floor=None):
        out = {}
        for k, c in (terms or {}).items():
            c = _rf(c)
            if floor is not None and k < floor:
                continue
            if not c.is_zero():
                out[int(k)] = c
        self.terms = out
        self.floor = floor

    @classmethod
    def d(cls, k=1):
        return cls({k: RatFun.const(1)})

    @classmethod
    def const(cls, c):
        return cls({0: _rf(c)})

    @property
    def top(self):
        return max(self.terms) if self.terms else None

    def coeff(self, k):
        if self.floor is not None and k < self.floor:
            raise FloorError(f"coefficient of degree {k} is below the floor {self.floor}", k)
        return self.terms.get(k, RatFun.const(0))

    def is_differential(self):
        return self.floor is None and all(k >= 0 for k in self.terms)

    def truncate(self, floor):
        if floor is None:
            return self
        if self.floor is not None and floor < self.floor:
            raise FloorError(f"requested floor {floor} is below the known floor {self.floor}", floor)
        return PsDO({k: c for k, c in self.terms.items() if k >= floor}, floor)

    def plus_part(self):
        if self.floor is not None and self.floor > 0:
            raise FloorError("positive part needs the floor at or below 0", 0)
        return PsDO({k: c for k, c in self.terms.items() if k >= 0})

    def minus_part(self):
        return PsDO({k: c for k, c in self.terms.items() if k < 0}, self.floor)

    def __add__(self, other):
        if not isinstance(other, PsDO):
            other = PsDO.const(other)
        fl = _max_floor(self.floor, other.floor)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out[k] + c if k in out else c
        return PsDO(out, fl)

    __radd__ = __add__

    def __neg__(self):
        return PsDO({k: -c for k, c in self.terms.items()}, self.floor)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return PsDO({k: v * c for k, v in self.terms.items()}, self.floor)

    def mul(self, other, floor=None):
        """Composition self∘other, exact for degrees >= the returned floor."""
        if not isinstance(other, PsDO):
            return self.scale(_rf(other))
        if not self.terms or not other.terms:
            return PsDO({}, _max_floor(self.floor, other.floor, floor))
        valid = None
        if self.floor is not None:
            valid = self.floor + other.top
        if other.floor is not None:
            v2 = other.floor + self.top
            valid = v2 if valid is None else max(valid, v2)
        if floor is not None and valid is not None and floor < valid:
            raise FloorError(f"product is only known down to degree {valid}, requested {floor}", valid)
        out_floor = _max_floor(valid, floor)
        out = {}
        derivs = {}
        for i, a in self.terms.items():
            for j, b in other.terms.items():
                l = 0
                while True:
                    deg = i + j - l
                    if out_floor is not None and deg < out_floor:
                        break
                    if i >= 0 and l > i:
                        break
                    key = (j, l)
                    if key not in derivs:
                        derivs[key] = b if l == 0 else derivs[(j, l - 1)].deriv()
                    bl = derivs[key]
                    if bl.is_zero():
                        break
                    if out_floor is None and i < 0 and l > 0:
                        raise FloorError("composition with a negative power needs a floor", None)
                    term = a * bl * binom(i, l)
                    out[deg] = out[deg] + term if deg in out else term
                    l += 1
        return PsDO(out, out_floor)

    def __mul__(self, other):
        return self.mul(other)

    def power(self, r, floor=None):
        """self^r; the k-th partial power is kept down to floor - (r - k)·top."""
        result = PsDO.const(1)
        for k in range(1, r + 1):
            fk = None if floor is None or self.top is None else floor - (r - k) * self.top
            result = result.mul(self, fk)
        return result

    def deriv_coeffs(self):
        return PsDO({k: c.deriv() for k, c in self.terms.items()}, self.floor)

    def apply(self, f: RatFun) -> RatFun:
        """Action of a differential operator on a rational function."""
        if not self.is_differential():
            raise ValueError("only differential operators act on functions")
        acc = RatFun.const(0)
        g = _rf(f)
        for k in range(0, (self.top or 0) + 1):
            if k in self.terms:
                acc = acc + self.terms[k] * g
            g = g.deriv()
        return acc

    def equal_to(self, other, floor=None):
        fl = _max_floor(self.floor, other.floor, floor)
        keys = set(self.terms) | set(other.terms)
        for k in keys:
            if fl is not None and k < fl:
                continue
            if self.terms.get(k, RatFun.const(0)) != other.terms.get(k, RatFun.const(0)):
                return False
        return True

    def __eq__(self, other):
        if not isinstance(other, PsDO):
            return NotImplemented
        return self.floor == other.floor and self.equal_to(other)

    def __hash__(self):
        return hash((self.floor, tuple(sorted(self.terms.items(), key=lambda kv: kv[0]))))

    def to_str(self):
        if not self.terms:
            return "0"
        parts = []
        for k in sorted(self.terms, reverse=True):
            parts.append(f"[{self.terms[k].to_str()}]*D^{k}")
        s = " + ".join(parts)
        return s + (f" + O(D^{self.floor - 1})" if self.floor is not None else "")

    def __repr__(self):
        return f"PsDO({self.to_str()})"

    def to_json(self):
        return {"floor": self.floor,
                "terms": {str(k): self.terms[k].to_str() for k in sorted(self.terms, reverse=True)}}


def first_order(v) -> PsDO:
    """∂ - v."""
    return PsDO({1: RatFun.const(1), 0: -_rf(v)})


def compose_all(ops, floor=None) -> PsDO:
    result = PsDO.const(1)
    for op in ops:
        result = result.mul(op, floor)
    return result


def psdo_mul(a: PsDO, b: PsDO, floor=None) -> PsDO:
    return a.mul(b, floor)
