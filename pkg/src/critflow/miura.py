"""Miura opers ∂ + Λ + V in the twisted Λ-graded algebra, dressing, mKdV fields.

An element of the loop algebra is Σ d_i Λ^i with diagonal d_i; the twist is
Λ d = σ(d) Λ where σ(d)_k = d_{k-1}.  E_j = e_{jj} Λ^{-1}, H_j = e_{jj} - e_{j+1,j+1}
(indices mod N), so ⟨α_j, V⟩ = v_j - v_{j+1}.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .exactalg import Poly, RatFun, linear_solve, log_derivative
from .genpop import PolyTuple, generate_path
from .psdo import FloorError


class MiuraError(ValueError):
    pass


def _rf(c):
    return c if isinstance(c, RatFun) else RatFun.const(c)


ZERO = RatFun.const(0)
ONE = RatFun.const(1)


class DiagRF:
    __slots__ = ("entries",)

    def __init__(self, entries):
        self.entries = tuple(_rf(e) for e in entries)

    @classmethod
    def zero(cls, N):
        return cls((ZERO,) * N)

    @classmethod
    def scalar(cls, c, N):
        return cls((_rf(c),) * N)

    @classmethod
    def unit(cls, j, N, c=1):
        """c e_{jj}, j 1-based mod N."""
        out = [ZERO] * N
        out[(j - 1) % N] = _rf(c)
        return cls(out)

    @property
    def N(self):
        return len(self.entries)

    def __getitem__(self, k):
        """1-based, cyclic."""
        return self.entries[(k - 1) % self.N]

    def __add__(self, other):
        return DiagRF(a + b for a, b in zip(self.entries, other.entries))

    def __sub__(self, other):
        return DiagRF(a - b for a, b in zip(self.entries, other.entries))

    def __neg__(self):
        return DiagRF(-a for a in self.entries)

    def __mul__(self, other):
        if isinstance(other, DiagRF):
            return DiagRF(a * b for a, b in zip(self.entries, other.entries))
        return DiagRF(a * other for a in self.entries)

    __rmul__ = __mul__

    def sigma(self, k=1):
        """σ^k: entry i of the result is entry i-k."""
        N = self.N
        k %= N
        return DiagRF(self.entries[(i - k) % N] for i in range(N))

    def deriv(self):
        return DiagRF(a.deriv() for a in self.entries)

    def trace(self):
        acc = ZERO
        for a in self.entries:
            acc = acc + a
        return acc

    def is_zero(self):
        return all(a.is_zero() for a in self.entries)

    def is_scalar(self):
        return all(a == self.entries[0] for a in self.entries)

    def __eq__(self, other):
        return isinstance(other, DiagRF) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def to_json(self):
        return [a.to_str() for a in self.entries]

    def __repr__(self):
        return "diag(" + ", ".join(a.to_str() for a in self.entries) + ")"


def H(j, N):
    return DiagRF.unit(j, N) - DiagRF.unit(j + 1, N)


def alpha_pairing(j, V: DiagRF):
    """⟨α_j, V⟩ = v_j - v_{j+1}; ⟨α_j, H_j⟩ = 2."""
    return V[j] - V[j + 1]


def _max_floor(*fs):
    fs = [f for f in fs if f is not None]
    return max(fs) if fs else None


class LaurentMat:
    """Σ d_i Λ^i; ``floor`` is the lowest degree known exactly (None = exact)."""

    __slots__ = ("N", "terms", "floor")

    def __init__(self, N, terms=None, floor=None):
        self.N = N
        out = {}
        for k, d in (terms or {}).items():
            if floor is not None and k < floor:
                continue
            if not d.is_zero():
                out[int(k)] = d
        self.terms = out
        self.floor = floor

    @classmethod
    def identity(cls, N):
        return cls(N, {0: DiagRF.scalar(1, N)})

    @classmethod
    def Lambda(cls, N, k=1):
        return cls(N, {k: DiagRF.scalar(1, N)})

    @classmethod
    def diag(cls, d: DiagRF):
        return cls(d.N, {0: d})

    @property
    def top(self):
        return max(self.terms) if self.terms else None

    @property
    def bottom(self):
        return min(self.terms) if self.terms else None

    def coeff(self, k):
        if self.floor is not None and k < self.floor:
            raise FloorError(f"degree {k} is below the known floor {self.floor}", k)
        return self.terms.get(k, DiagRF.zero(self.N))

    def __add__(self, other):
        out = dict(self.terms)
        for k, d in other.terms.items():
            out[k] = out[k] + d if k in out else d
        return LaurentMat(self.N, out, _max_floor(self.floor, other.floor))

    def __neg__(self):
        return LaurentMat(self.N, {k: -d for k, d in self.terms.items()}, self.floor)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return LaurentMat(self.N, {k: d * _rf(c) for k, d in self.terms.items()}, self.floor)

    def mul(self, other, floor=None):
        """Twisted product (d Λ^i)(e Λ^j) = d σ^i(e) Λ^{i+j}."""
        if not self.terms or not other.terms:
            return LaurentMat(self.N, {}, _max_floor(self.floor, other.floor, floor))
        valid = None
        if self.floor is not None:
            valid = self.floor + other.top
        if other.floor is not None:
            v2 = other.floor + self.top
            valid = v2 if valid is None else max(valid, v2)
        if floor is not None and valid is not None and floor < valid:
            raise FloorError(f"product is only known down to degree {valid}, requested {floor}", valid)
        fl = _max_floor(valid, floor)
        out = {}
        for i, d in self.terms.items():
            for j, e in other.terms.items():
                k = i + j
                if fl is not None and k < fl:
                    continue
                t = d * e.sigma(i)
                out[k] = out[k] + t if k in out else t
        return LaurentMat(self.N, out, fl)

    def __mul__(self, other):
        if isinstance(other, LaurentMat):
            return self.mul(other)
        return self.scale(other)

    def deriv(self):
        return LaurentMat(self.N, {k: d.deriv() for k, d in self.terms.items()}, self.floor)

    def truncate(self, floor):
        if self.floor is not None and floor < self.floor:
            raise FloorError(f"requested floor {floor} is below the known floor {self.floor}", floor)
        return LaurentMat(self.N, {k: d for k, d in self.terms.items() if k >= floor}, floor)

    def parts(self):
        """(M⁺, M⁻, M⁰): degrees >= 0, degrees < 0, degree-0 diagonal."""
        plus = LaurentMat(self.N, {k: d for k, d in self.terms.items() if k >= 0})
        minus = LaurentMat(self.N, {k: d for k, d in self.terms.items() if k < 0}, self.floor)
        return plus, minus, self.coeff(0)

    def inverse_unipotent(self, floor):
        """(1 + M)^{-1} for M of negative degrees, solved grade by grade to the floor.

        U_k = -Σ_{k<=i<0} T_i σ^i(U_{k-i}) from (T U)_k = 0.
        """
        if self.coeff(0) != DiagRF.scalar(1, self.N) or any(k > 0 for k in self.terms):
            raise MiuraError("series inverse needs the form 1 + lower terms")
        if self.floor is not None and floor < self.floor:
            raise FloorError(f"inverse needs T down to degree {floor}", floor)
        exact = self.floor is None and (self.bottom or 0) >= 0
        U = {0: DiagRF.scalar(1, self.N)}
        for k in range(-1, floor - 1, -1):
            acc = DiagRF.zero(self.N)
            for i in range(k, 0):
                if i in self.terms and (k - i) in U:
                    acc = acc + self.terms[i] * U[k - i].sigma(i)
            if not acc.is_zero():
                U[k] = -acc
        return LaurentMat(self.N, U, None if exact else floor)

    def equal_to(self, other, floor=None):
        fl = _max_floor(self.floor, other.floor, floor)
        for k in set(self.terms) | set(other.terms):
            if fl is not None and k < fl:
                continue
            if self.coeff(k) != other.coeff(k):
                return False
        return True

    def __eq__(self, other):
        return isinstance(other, LaurentMat) and self.floor == other.floor and self.equal_to(other)

    def __hash__(self):
        return hash((self.floor, tuple(sorted(self.terms.items(), key=lambda kv: kv[0]))))

    def to_json(self):
        return {"floor": self.floor,
                "terms": {str(k): self.terms[k].to_json() for k in sorted(self.terms, reverse=True)}}

    def __repr__(self):
        body = " + ".join(f"{self.terms[k]!r}L^{k}" for k in sorted(self.terms, reverse=True))
        return f"LaurentMat({body or '0'})"


def e_diag(j, N):
    return LaurentMat.diag(DiagRF.unit(j, N))


def exp_gE(g, j, N):
    """e^{g E_j} = 1 + g e_{jj} Λ^{-1}."""
    return LaurentMat(N, {0: DiagRF.scalar(1, N), -1: DiagRF.unit(j, N, g)})


# ------------------------------------------------------------------ opers

@dataclass
class MiuraOper:
    V: DiagRF

    def __post_init__(self):
        if not self.V.trace().is_zero():
            raise MiuraError("Miura potential must have trace zero")

    @property
    def N(self):
        return self.V.N

    def to_json(self):
        return {"V": self.V.to_json()}


def mu_from_tuple(y: PolyTuple) -> MiuraOper:
    """v_k = log'(y_k / y_{k-1})."""
    for p in y.ys:
        if p.is_zero():
            raise MiuraError("zero polynomial in tuple")
    logs = [log_derivative(p) for p in y.ys]
    N = y.N
    return MiuraOper(DiagRF(logs[k] - logs[k - 1] for k in range(N)))


@dataclass
class GaugeResult:
    V: DiagRF
    defect: RatFun

    @property
    def is_miura(self):
        return self.defect.is_zero()


def gauge_adjoint(L: MiuraOper, g, j) -> GaugeResult:
    """e^{g E_j}(∂+Λ+V)e^{-g E_j} = ∂ + Λ + (V + gH_j) - (g' + ⟨α_j,V⟩g + g²)E_j."""
    g = _rf(g)
    V = L.V + H(j, L.N) * g
    defect = g.deriv() + alpha_pairing(j, L.V) * g + g * g
    return GaugeResult(V, defect)


def conjugate_free(T: LaurentMat, Tinv: LaurentMat, floor=None) -> LaurentMat:
    """Potential part of T(∂+Λ)T^{-1}: -T'T^{-1} + TΛT^{-1}."""
    lam = LaurentMat.Lambda(T.N)
    return (-T.deriv()).mul(Tinv, floor) + T.mul(lam, floor).mul(Tinv, floor)


@dataclass
class TJResult:
    T: LaurentMat
    Tinv: LaurentMat
    gs: list
    js: tuple
    tuples: list


def build_TJ(J, c, N) -> TJResult:
    """T^J = e^{g_m E_{j_m}} ⋯ e^{g_1 E_{j_1}}, g_ℓ = log'(y^{(ℓ)}_{j_ℓ} / y^{(ℓ-1)}_{j_ℓ})."""
    path = generate_path(J, c, N)
    T = LaurentMat.identity(N)
    Tinv = LaurentMat.identity(N)
    gs = []
    for ell, j in enumerate(J, start=1):
        g = log_derivative(path[ell][j]) - log_derivative(path[ell - 1][j])
        gs.append(g)
        T = exp_gE(g, j, N).mul(T)
        Tinv = Tinv.mul(exp_gE(-g, j, N))
    L = mu_from_tuple(path[-1])
    expected = LaurentMat.Lambda(N) + LaurentMat.diag(L.V)
    if not conjugate_free(T, Tinv).equal_to(expected):
        raise MiuraError("T^J does not conjugate ∂+Λ to the generated oper")
    return TJResult(T, Tinv, gs, tuple(J), path)


tj_matrix = build_TJ


def oper_from_gs(gs, J, N) -> DiagRF:
    """Σ g_ℓ H_{j_ℓ}."""
    V = DiagRF.zero(N)
    for g, j in zip(gs, J):
        V = V + H(j, N) * g
    return V


# -------------------------------------------------------------- dressing

@dataclass
class DressingResult:
    T: LaurentMat
    b: dict = field(default_factory=dict)


def _solve_sigma(Y: DiagRF) -> DiagRF:
    """X with σ(X) - X = Y for trace-zero Y, by partial sums with X_1 = 0.

    Pinning the first entry (rather than the mean) keeps denominators small:
    the scalar ambiguity feeds into b_i, and the mean couples every entry.
    """
    N = Y.N
    xs = [ZERO]
    for i in range(1, N):
        xs.append(xs[-1] - Y.entries[i])
    X = DiagRF(xs)
    if X.sigma() - X != Y:
        raise MiuraError("σ - id inversion failed")
    return X


def dress(L: MiuraOper, floor: int) -> DressingResult:
    """T = 1 + Σ_{i<0} T_i Λ^i with T^{-1}(∂+Λ+V)T = ∂ + Λ + Σ_{i<=0} b_i Λ^i.

    Grade k of (∂+Λ+V)T = T(∂+Λ+B) reads
    (σ - 1)T_{k-1} = -T_k' - V T_k + b_k + Σ_{k<=i<0} T_i b_{k-i}.
    """
    if floor > -1:
        raise MiuraError("dressing floor must be at most -1")
    N = L.N
    V = L.V
    Ts = {0: DiagRF.scalar(1, N)}
    b = {}
    for k in range(0, floor - 1, -1):
        rest = -Ts[k].deriv() - V * Ts[k]
        for i in range(k, 0):
            rest = rest + Ts[i] * b[k - i]
        bk = -rest.trace() * Fraction(1, N)
        b[k] = bk
        rest = rest + DiagRF.scalar(bk, N)
        if k - 1 >= floor:
            Ts[k - 1] = _solve_sigma(rest)
    return DressingResult(LaurentMat(N, Ts, floor), b)


def check_dressing(L: MiuraOper, D: DressingResult, floor):
    """T^{-1}(∂+Λ+V)T has only scalar coefficients down to the floor."""
    N = L.N
    T = D.T
    Tinv = T.inverse_unipotent(floor)
    Lm = LaurentMat.Lambda(N) + LaurentMat.diag(L.V)
    conj = Tinv.mul(Lm.mul(T)) + Tinv.mul(T.deriv())
    return all(conj.coeff(k).is_scalar() for k in range(conj.floor, 2))


def conj_lambda_power(T: LaurentMat, Tinv: LaurentMat, r: int, floor=None) -> LaurentMat:
    return T.mul(LaurentMat.Lambda(T.N, r), floor).mul(Tinv, floor)


def conj_degree_zero(T: LaurentMat, Tinv: LaurentMat, r: int) -> DiagRF:
    """(T Λ^r T^{-1})^0 = Σ_i T_i σ^{i+r}(U_{-r-i})."""
    acc = DiagRF.zero(T.N)
    for i in range(-r, 1):
        j = -r - i
        acc = acc + T.coeff(i) * Tinv.coeff(j).sigma(i + r)
    return acc


def mkdv_vector_field(L: MiuraOper, r: int, floor=None) -> DiagRF:
    """d/dx (T Λ^r T^{-1})^0 with T from the dressing; needs floor <= -r."""
    if r < 1:
        raise MiuraError("r must be positive")
    if floor is None:
        floor = -r
    if floor > -r:
        raise FloorError(f"the degree-0 part of TΛ^{r}T^(-1) needs floor <= {-r}", -r)
    D = dress(L, floor)
    Tinv = D.T.inverse_unipotent(floor)
    return conj_degree_zero(D.T, Tinv, r).deriv()


def mkdv_vector_fields(L: MiuraOper, rs, floor=None) -> dict:
    """Fields for several r from a single dressing at the deepest floor."""
    rs = list(rs)
    deepest = -max(rs)
    if floor is None:
        floor = deepest
    if floor > deepest:
        raise FloorError(f"the requested flows need floor <= {deepest}", deepest)
    D = dress(L, floor)
    Tinv = D.T.inverse_unipotent(floor)
    return {r: conj_degree_zero(D.T, Tinv, r).deriv() for r in rs}


def mkdv_vector_field_TJ(tj: TJResult, r: int) -> DiagRF:
    """The same field from the exact finite conjugator T^J."""
    return conj_degree_zero(tj.T, tj.Tinv, r).deriv()


# --------------------------------------------------- derivatives in c_k

def _eval_coeffs(p: Poly, value):
    return p.map_coeffs(lambda a: a(value) if isinstance(a, Poly) else a)


def _dc_coeffs(p: Poly, value):
    return p.map_coeffs(lambda a: a.deriv()(value) if isinstance(a, Poly) else 0)


def tuple_c_derivative(J, c, N, k):
    """(y(c), ∂y/∂c_k at c) via generation with c_k symbolic."""
    sym = generate_path(J, c, N, symbolic=k)[-1]
    ck = Fraction(c[k - 1])
    y = sym.map(lambda p: _eval_coeffs(p, ck))
    dy = sym.map(lambda p: _dc_coeffs(p, ck))
    return y, dy


def potential_c_derivative(J, c, N, k) -> DiagRF:
    """∂V/∂c_k, with ∂_c log'(y) = d/dx (y_c / y)."""
    y, dy = tuple_c_derivative(J, c, N, k)
    ratios = [RatFun(dy.ys[i], y.ys[i]) for i in range(N)]
    return DiagRF((ratios[i] - ratios[i - 1]).deriv() for i in range(N))


@dataclass
class TangencyReport:
    J: tuple
    c: tuple
    r: int
    vanishes: bool
    ok: bool
    gamma: list
    residual: DiagRF

    def to_json(self):
        from .exactalg import rat_str
        return {"J": list(self.J), "c": [rat_str(Fraction(v)) for v in self.c], "r": self.r,
                "vanishes": self.vanishes, "ok": self.ok,
                "gamma": [rat_str(g) for g in self.gamma], "residual": self.residual.to_json()}


def _sample_points(fields, count):
    """Rational x avoiding poles of every entry."""
    pts = []
    x = Fraction(0)
    step = 0
    while len(pts) < count:
        cand = Fraction((step // 2 + 1) * (1 if step % 2 else -1), 3) if step else x
        step += 1
        if all(f.den(cand) != 0 for d in fields for f in d.entries):
            pts.append(cand)
    return pts


def express_in_span(target: DiagRF, basis):
    """Constants γ with target = Σ γ_k basis_k exactly, or None."""
    if not basis:
        return ([] if target.is_zero() else None)
    N = target.N
    count = 2 * len(basis) + 4
    pts = _sample_points([target] + list(basis), count)
    rows, rhs = [], []
    for x in pts:
        for i in range(N):
            rows.append([b.entries[i](x) for b in basis])
            rhs.append(target.entries[i](x))
    sol = linear_solve(rows, rhs)
    if sol.status == "inconsistent":
        return None
    gamma = list(sol.solution)
    acc = DiagRF.zero(N)
    for g, b in zip(gamma, basis):
        acc = acc + b * g
    return gamma if acc == target else None


def verify_theorem_main(J, c, r, N, use_dressing=True, floor=None) -> TangencyReport:
    """The mKdV field at μ^J(c) is Σ γ_k ∂μ^J/∂c_k with constant γ; zero when r > 2m."""
    J = tuple(J)
    c = tuple(Fraction(v) for v in c)
    m = len(J)
    y = generate_path(J, c, N)[-1]
    L = mu_from_tuple(y)
    if use_dressing:
        field_ = mkdv_vector_field(L, r, floor)
    else:
        field_ = mkdv_vector_field_TJ(build_TJ(J, c, N), r)
    if r > 2 * m:
        return TangencyReport(J, c, r, field_.is_zero(), field_.is_zero(), [], field_)
    basis = [potential_c_derivative(J, c, N, k) for k in range(1, m + 1)]
    gamma = express_in_span(field_, basis)
    if gamma is None:
        return TangencyReport(J, c, r, field_.is_zero(), False, [], field_)
    acc = DiagRF.zero(N)
    for g, b in zip(gamma, basis):
        acc = acc + b * g
    return TangencyReport(J, c, r, field_.is_zero(), True, gamma, field_ - acc)


def cyclic_r(ell, N):
    """r_ℓ = ℓ + p where ℓ = (N-1)p + q with 1 <= q <= N-1."""
    p, q = divmod(ell - 1, N - 1)
    return ell + p


def gamma_polynomial_spot_check(J, c, r, N, k, degree_bound=None):
    """γ along c + t e_k, t = 0..D+1, has vanishing (D+1)-st finite difference."""
    m = len(J)
    D = degree_bound if degree_bound is not None else 2 * m
    values = []
    for t in range(D + 2):
        cc = list(c)
        cc[k - 1] = Fraction(cc[k - 1]) + t
        rep = verify_theorem_main(J, cc, r, N, use_dressing=False)
        if not rep.ok:
            return False
        values.append(rep.gamma or [Fraction(0)] * m)
    for _ in range(D + 1):
        values = [[b - a for a, b in zip(u, v)] for u, v in zip(values, values[1:])]
    return all(v == 0 for row in values for v in row)


def lmat_mul(a: LaurentMat, b: LaurentMat, floor=None) -> LaurentMat:
    return a.mul(b, floor)
