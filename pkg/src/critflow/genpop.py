"""Critical points of master functions: tuples, fertility, generation.

A tuple y = (y_1, ..., y_N) of monic polynomials in x represents the roots of
a critical point.  Generation in direction j replaces y_j by
ỹ_j = y_{j,0} + c y_j where Wr(y_j, y_{j,0}) = (k̃_j - k_j) y_{j-1} y_{j+1}
and y_{j,0} has no x^{k_j} term.  The partner is found by a triangular
solve: x^i contributes (i - k) x^{i+k-1} as leading term of Wr(y, x^i).
"""
from __future__ import annotations

import cmath
import random
from dataclasses import dataclass
from fractions import Fraction

from .combin import (MKdVSetTuple, degree_transform, is_degree_increasing, mutate_tuple,
                     reduce_tuple_to_empty)
from .exactalg import Poly, gcd_poly, poly_roots_numeric, squarefree
from .schur import sample_t, schur_from_maya, specialize


class GenerationError(ValueError):
    def __init__(self, msg, step=None):
        super().__init__(msg)
        self.step = step


X = Poly.gen("x")
ONE = Poly.const(1, "x")


@dataclass(frozen=True)
class PolyTuple:
    ys: tuple

    def __post_init__(self):
        object.__setattr__(self, "ys", tuple(self.ys))
        if len(self.ys) < 2:
            raise GenerationError("a tuple needs N >= 2 entries")

    @property
    def N(self):
        return len(self.ys)

    def __getitem__(self, j):
        """1-based, cyclic."""
        return self.ys[(j - 1) % self.N]

    @property
    def degrees(self):
        return tuple(int(y.deg) for y in self.ys)

    def replace(self, j, y):
        ys = list(self.ys)
        ys[(j - 1) % self.N] = y
        return PolyTuple(tuple(ys))

    def map(self, f):
        return PolyTuple(tuple(f(y) for y in self.ys))

    @classmethod
    def empty(cls, N):
        return cls((ONE,) * N)

    def to_json(self):
        return [y.to_json() for y in self.ys]

    def to_str(self):
        return "(" + ", ".join(y.to_str() for y in self.ys) + ")"


def _wr_monomial(y, dy, i):
    """Wr(y, x^i) = i y x^{i-1} - y' x^i."""
    shifted = Poly._raw((0,) * i + dy.coeffs, "x")
    if i == 0:
        return -shifted
    return Poly._raw((0,) * (i - 1) + y.coeffs, "x") * i - shifted


def wronskian_partner(y: Poly, rhs: Poly, deg_bound: int):
    """p with deg p <= deg_bound, Wr(y, p) = rhs and no x^{deg y} term; None if none exists."""
    k = int(y.deg)
    lc = y.lc
    dy = y.deriv()
    residual = rhs
    coeffs = [Fraction(0)] * (deg_bound + 1)
    for i in range(deg_bound, -1, -1):
        if i == k:
            if k >= 1 and residual.coeff(2 * k - 1) != 0:
                return None
            continue
        c = residual.coeff(i + k - 1)
        if c == 0:
            continue
        c = c / ((i - k) * lc)
        coeffs[i] = c
        residual = residual - _wr_monomial(y, dy, i) * c
    if residual:
        return None
    return Poly(coeffs, "x")


@dataclass(frozen=True)
class GenerationStep:
    j: int
    y_j0: Poly
    const: Fraction


def new_degree(y: PolyTuple, j: int) -> int:
    return degree_transform(y.degrees, j)[(j - 1) % y.N]


def generate_step(y: PolyTuple, j: int) -> GenerationStep:
    k = y.degrees[(j - 1) % y.N]
    kt = new_degree(y, j)
    if kt <= k:
        raise GenerationError(f"direction {j} is not degree increasing ({k} -> {kt})")
    const = Fraction(kt - k)
    rhs = y[j - 1] * y[j + 1] * const
    p = wronskian_partner(y[j], rhs, kt)
    if p is None:
        raise GenerationError(f"tuple is not fertile in direction {j}")
    return GenerationStep(j, p, const)


def apply_step(y: PolyTuple, step: GenerationStep, c) -> PolyTuple:
    return y.replace(step.j, step.y_j0 + y[step.j] * c)


def generate_path(J, c, N, symbolic=None):
    """Tuples after each step of Y^J(c); c_symbolic (1-based) becomes Poly 'c'."""
    J = tuple(J)
    if len(c) != len(J):
        raise GenerationError("need one parameter per step")
    if not is_degree_increasing(J, N):
        raise GenerationError(f"{J} is not degree increasing for N={N}")
    y = PolyTuple.empty(N)
    path = [y]
    for ell, (j, cl) in enumerate(zip(J, c), start=1):
        step = generate_step(y, j)
        if symbolic == ell:
            cl = Poly.gen("c")
        else:
            cl = Fraction(cl)
        y = apply_step(y, step, cl)
        path.append(y)
    return path


def generate_multi(J, c, N, symbolic=None) -> PolyTuple:
    return generate_path(J, c, N, symbolic)[-1]


def is_generic(y: PolyTuple) -> bool:
    for j in range(1, y.N + 1):
        if not squarefree(y[j]):
            return False
        if gcd_poly(y[j], y[j + 1]).deg > 0:
            return False
    return True


def is_fertile(y: PolyTuple):
    """(fertile?, witnesses) with Wr(y_j, w_j) = y_{j-1} y_{j+1}."""
    witnesses = []
    for j in range(1, y.N + 1):
        k = int(y[j].deg)
        kt = new_degree(y, j)
        rhs = y[j - 1] * y[j + 1]
        p = wronskian_partner(y[j], rhs, max(k, kt, 0))
        if p is None:
            return False, []
        witnesses.append(p)
    return True, witnesses


# ---------------------------------------------------------- master function

@dataclass
class MasterSpec:
    N: int
    k: tuple
    u: tuple   # u[j] = roots of y_{j+1}


class MasterError(ValueError):
    pass


def master_spec(y: PolyTuple, tol=1e-12) -> MasterSpec:
    roots = tuple(tuple(poly_roots_numeric(p, tol)) for p in y.ys)
    return MasterSpec(y.N, y.degrees, roots)


def _neighbours(N, j):
    return [(j + 1) % N, (j - 1) % N]


def master_value(spec: MasterSpec) -> complex:
    """Φ = 2 Σ_j Σ_{i<i'} log(u^j_i - u^j_{i'}) - Σ_j Σ_{i,i'} log(u^j_i - u^{j+1}_{i'})."""
    total = 0j
    N = spec.N
    for j in range(N):
        uj = spec.u[j]
        for a in range(len(uj)):
            for b in range(a + 1, len(uj)):
                d = uj[a] - uj[b]
                if d == 0:
                    raise MasterError("coincident roots in one group")
                total += 2 * cmath.log(d)
        nxt = spec.u[(j + 1) % N]
        for a in uj:
            for b in nxt:
                if a - b == 0:
                    raise MasterError("coincident roots in neighbouring groups")
                total -= cmath.log(a - b)
    return total


def bethe_residuals(spec: MasterSpec):
    """Σ_{i'≠i} 2/(u^j_i - u^j_{i'}) - Σ 1/(u^j_i - u^{j+1}) - Σ 1/(u^j_i - u^{j-1})."""
    out = []
    N = spec.N
    for j in range(N):
        uj = spec.u[j]
        for a, ua in enumerate(uj):
            r = 0j
            for b, ub in enumerate(uj):
                if b != a:
                    if ua == ub:
                        raise MasterError("coincident roots in one group")
                    r += 2 / (ua - ub)
            for nb in _neighbours(N, j):
                for ub in spec.u[nb]:
                    if ua == ub:
                        raise MasterError("coincident roots in neighbouring groups")
                    r -= 1 / (ua - ub)
            out.append(r)
    return out


# ------------------------------------------------------ Schur tuple bridge

def _tuple_vars(T: MKdVSetTuple):
    return max(max(T.weights()), 1)


def schur_tuple_at(T: MKdVSetTuple, t_sample) -> PolyTuple:
    ys = []
    for i in range(1, T.N + 1):
        p = specialize(schur_from_maya(T[i]), t_sample)
        if p.is_zero():
            raise GenerationError("Schur polynomial vanishes at the sample")
        ys.append(p.monic())
    return PolyTuple(tuple(ys))


def schur_tuple_as_critical(T: MKdVSetTuple, t_sample=None, seed=0, retries=8):
    """Monic (F_{S_1}(x,t), ..., F_{S_N}(x,t)); returns (tuple, t used)."""
    d = _tuple_vars(T)
    rng = random.Random(seed)
    tries = [t_sample] if t_sample is not None else [sample_t(rng, d) for _ in range(retries)]
    for ts in tries:
        y = schur_tuple_at(T, ts)
        if is_generic(y):
            ok, _ = is_fertile(y)
            if not ok:
                raise GenerationError("Schur tuple is generic but not fertile")
            return y, ts
    raise GenerationError(f"no generic sample among {len(tries)} tries")


def fit_generation(J, targets):
    """c with Y^J(c) passing through targets[0..m] (targets[0] the empty tuple)."""
    y = targets[0]
    cs = []
    for ell, j in enumerate(J, start=1):
        step = generate_step(y, j)
        target = targets[ell][j]
        c = target.coeff(int(y[j].deg))
        if step.y_j0 + y[j] * c != target:
            raise GenerationError(f"generation does not reach the target at step {ell}", ell)
        y = apply_step(y, step, c)
        if y != targets[ell]:
            raise GenerationError(f"tuple differs from the target at step {ell}", ell)
        cs.append(c)
    return tuple(cs)


def lift_to_generation(T: MKdVSetTuple, t_sample):
    """(J, c) with Y^J(c) = monic Schur tuple of T at t_sample."""
    steps = reduce_tuple_to_empty(T)
    stages = [T]
    for i in steps:
        stages.append(mutate_tuple(stages[-1], i))
    J = tuple(reversed(steps))
    targets = [schur_tuple_at(S, t_sample) for S in reversed(stages)]
    return J, fit_generation(J, targets)


def exceptional_adler_moser_c1(c1):
    """c with Y^{(1,2)}(c) non-generic: x = -c1 is a root of the cubic iff c2 = c1^3."""
    c1 = Fraction(c1)
    return (c1, c1 ** 3)
