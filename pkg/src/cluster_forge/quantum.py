"""Quantum tori, compatible pairs, quantum seeds and dilogarithm series.

Everything is exact in q^{1/2}: the single variable v with v^2 = q.  Torus
elements carry reduced fractions of integer polynomials in v; series
coefficients use a dedicated representation num / (v^a prod Phi_d(v)^e)
with cyclotomic denominator factors, which keeps reduction to cheap exact
trial divisions.  Dense univariate products go through Kronecker
substitution (one big-integer multiplication per polynomial product).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .linalg import identity, is_permutation, mat_mul, transpose
from .quiver import ExchangeMatrix, IceMatrix, MutationRangeError
from .ratfunc import Frac, PolyRing, xy_ring
from .tropical import SignIncoherenceError, _mutating_sign, elementary_pair

VRING = PolyRing(("v",))


class QuantumError(ValueError):
    pass


class IncompatibleInputError(QuantumError):
    """(B~, Lambda) fails the compatibility equation B~^T Lambda = [D 0]."""


class NonLaurentError(QuantumError):
    """Division left a non-monomial remainder; the quantum Laurent property failed."""


class PoleAtOneError(QuantumError):
    """A coefficient denominator vanishes at v = 1."""


class PreconditionFailedError(QuantumError):
    pass


def vpow(k: int) -> Frac:
    return Frac.monomial(VRING, (k,))


# -- dense univariate helpers (coefficients of the series algebra) -----------------


def _trim(a: list) -> tuple:
    while a and a[-1] == 0:
        a.pop()
    return tuple(a)


def dense_mul(a: Sequence[int], b: Sequence[int]) -> tuple:
    """Product of dense integer polynomials via Kronecker substitution."""
    if not a or not b:
        return ()
    ma = max(abs(x) for x in a)
    mb = max(abs(x) for x in b)
    if ma == 0 or mb == 0:
        return ()
    bound = ma * mb * min(len(a), len(b))
    bits = bound.bit_length() + 2
    pa = 0
    for c in reversed(a):
        pa = (pa << bits) | c if c >= 0 else (pa << bits) + c
    pb = 0
    for c in reversed(b):
        pb = (pb << bits) | c if c >= 0 else (pb << bits) + c
    prod = pa * pb
    negate = prod < 0
    if negate:
        prod = -prod
    half = 1 << (bits - 1)
    mask = (1 << bits) - 1
    out = []
    carry = 0
    while prod or carry:
        digit = (prod & mask) + carry
        prod >>= bits
        carry = 0
        if digit >= half:
            digit -= 1 << bits
            carry = 1
        out.append(digit)
    if negate:
        out = [-x for x in out]
    return _trim(out)


def dense_add(a: Sequence[int], b: Sequence[int]) -> tuple:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, x in enumerate(b):
        out[i] += x
    return _trim(out)


def dense_neg(a: Sequence[int]) -> tuple:
    return tuple(-x for x in a)


def dense_div_exact(a: Sequence[int], f: Sequence[int]) -> Optional[tuple]:
    """Quotient a / f over Z if the division is exact, else None."""
    if not a:
        return ()
    if len(a) < len(f):
        return None
    rem = list(a)
    lead = f[-1]
    q = [0] * (len(a) - len(f) + 1)
    for i in range(len(q) - 1, -1, -1):
        c = rem[i + len(f) - 1]
        if c % lead:
            return None
        qi = c // lead
        q[i] = qi
        if qi:
            for j, fc in enumerate(f):
                rem[i + j] -= qi * fc
    if any(rem):
        return None
    return _trim(q)


_CYCLOTOMIC: dict = {}


def cyclotomic(d: int) -> tuple:
    """Dense coefficients of the d-th cyclotomic polynomial in v."""
    if d in _CYCLOTOMIC:
        return _CYCLOTOMIC[d]
    poly = tuple([-1] + [0] * (d - 1) + [1])  # v^d - 1
    for e in range(1, d):
        if d % e == 0:
            q = dense_div_exact(poly, cyclotomic(e))
            if q is None:
                raise AssertionError("cyclotomic recursion failed")
            poly = q
    _CYCLOTOMIC[d] = poly
    return poly


class QCoef:
    """num(v) / (v^a * prod Phi_d(v)^{e_d}), maximally stripped.

    Denominator keys: 0 stands for the factor v, d >= 1 for Phi_d(v).  The
    factors are pairwise coprime, so the stripped form is canonical.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Sequence[int], den: Iterable = (), strip: bool = True):
        num = _trim(list(num))
        den_d = {d: e for d, e in den if e}
        if not num:
            den_d = {}
        elif strip and den_d:
            for d in sorted(den_d):
                f = (0, 1) if d == 0 else cyclotomic(d)
                while den_d.get(d, 0) > 0:
                    q = dense_div_exact(num, f)
                    if q is None:
                        break
                    num = q
                    den_d[d] -= 1
                if den_d.get(d) == 0:
                    del den_d[d]
        self.num = tuple(num)
        self.den = tuple(sorted(den_d.items()))

    @staticmethod
    def from_int(c: int) -> "QCoef":
        return QCoef((c,), ())

    @staticmethod
    def v_power(k: int) -> "QCoef":
        if k >= 0:
            return QCoef([0] * k + [1], ())
        return QCoef((1,), ((0, -k),), strip=False)

    def is_zero(self) -> bool:
        return not self.num

    def is_one(self) -> bool:
        return self.num == (1,) and not self.den

    def __mul__(self, other: "QCoef") -> "QCoef":
        if self.is_zero() or other.is_zero():
            return QCoef((), ())
        den: dict = dict(self.den)
        for d, e in other.den:
            den[d] = den.get(d, 0) + e
        return QCoef(dense_mul(self.num, other.num), den.items())

    def __add__(self, other: "QCoef") -> "QCoef":
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        da, db = dict(self.den), dict(other.den)
        union = sorted(set(da) | set(db))
        num_a, num_b = self.num, other.num
        den: dict = {}
        for d in union:
            ea, eb = da.get(d, 0), db.get(d, 0)
            e = max(ea, eb)
            den[d] = e
            f = (0, 1) if d == 0 else cyclotomic(d)
            for _ in range(e - ea):
                num_a = dense_mul(num_a, f)
            for _ in range(e - eb):
                num_b = dense_mul(num_b, f)
        return QCoef(dense_add(num_a, num_b), den.items())

    def __neg__(self) -> "QCoef":
        return QCoef(dense_neg(self.num), self.den, strip=False)

    def __sub__(self, other: "QCoef") -> "QCoef":
        return self + (-other)

    def inverse(self) -> "QCoef":
        """Inverse when the numerator is +-v^a times denominator-basis factors."""
        num = list(self.num)
        new_den: dict = {}
        a = 0
        while num and num[0] == 0:
            num = num[1:]
            a += 1
        if a:
            new_den[0] = a
        d = 1
        while len(num) > 1:
            if d > 4 * (len(self.num) + 4):
                raise QuantumError(f"cannot invert coefficient {self}")
            q = dense_div_exact(num, cyclotomic(d))
            if q is not None:
                new_den[d] = new_den.get(d, 0) + 1
                num = list(q)
            else:
                d += 1
        if num not in ([1], [-1]):
            raise QuantumError(f"cannot invert coefficient {self}")
        sign = num[0]
        out_num: Sequence[int] = (sign,)
        for d, e in self.den:
            f = (0, 1) if d == 0 else cyclotomic(d)
            for _ in range(e):
                out_num = dense_mul(out_num, f)
        return QCoef(out_num, new_den.items())

    def to_frac(self) -> Frac:
        num = VRING.zero
        for i, c in enumerate(self.num):
            if c:
                num = num + VRING.monomial((i,), c)
        den = VRING.one
        for d, e in self.den:
            f = (0, 1) if d == 0 else cyclotomic(d)
            fp = VRING.zero
            for i, c in enumerate(f):
                if c:
                    fp = fp + VRING.monomial((i,), c)
            for _ in range(e):
                den = den * fp
        return Frac(VRING, num, den)

    def __eq__(self, other):
        return isinstance(other, QCoef) and self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __str__(self):
        return str(self.to_frac())

    __repr__ = __str__


def qfactorial_coeff(j: int) -> QCoef:
    """The dilogarithm coefficient q^{j/2} / ((q^j - 1) ... (q - 1)).

    This is the expansion of prod_{i>=0} (1 + q^{i+1/2} y)^{-1}, the unique
    normalization satisfying (1 + q^{1/2} y) E(y) = E(q y) and the pentagon
    identity.
    """
    den: dict = {}
    for s in range(1, j + 1):
        for d in range(1, 2 * s + 1):
            if (2 * s) % d == 0:
                den[d] = den.get(d, 0) + 1
    return QCoef([0] * j + [1], den.items(), strip=False)


# -- truncated series ----------------------------------------------------------------


@dataclass(frozen=True)
class SeriesContext:
    """The quantum affine space A_B truncated in total degree."""

    b_rows: tuple     # n x n skew form: y^a y^b = q^{(1/2) a^T B b} y^{a+b}
    truncation: int

    @property
    def n(self) -> int:
        return len(self.b_rows)

    def twist(self, a: tuple, b: tuple) -> int:
        """a^T B b; the product picks up v to this power."""
        total = 0
        for i, ai in enumerate(a):
            if ai:
                row = self.b_rows[i]
                total += ai * sum(row[j] * bj for j, bj in enumerate(b) if bj)
        return total


class TruncatedSeries:
    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: SeriesContext, terms: dict):
        self.ctx = ctx
        self.terms = {a: c for a, c in terms.items() if not c.is_zero()}

    @staticmethod
    def unit(ctx: SeriesContext) -> "TruncatedSeries":
        return TruncatedSeries(ctx, {(0,) * ctx.n: QCoef.from_int(1)})

    @staticmethod
    def generator(ctx: SeriesContext, alpha: Sequence[int], coeff: QCoef = None) -> "TruncatedSeries":
        alpha = tuple(alpha)
        if any(x < 0 for x in alpha):
            raise QuantumError("series exponents must be non-negative")
        return TruncatedSeries(ctx, {alpha: coeff or QCoef.from_int(1)})

    def is_unit_series(self) -> bool:
        zero = (0,) * self.ctx.n
        return self.terms == {zero: QCoef.from_int(1)}

    def constant_term(self) -> QCoef:
        return self.terms.get((0,) * self.ctx.n, QCoef.from_int(0))

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check(other)
        out = dict(self.terms)
        for a, c in other.terms.items():
            s = out.get(a)
            out[a] = c if s is None else s + c
        return TruncatedSeries(self.ctx, out)

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries(self.ctx, {a: -c for a, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check(other)
        ctx = self.ctx
        cap = ctx.truncation
        out: dict = {}
        for a, ca in self.terms.items():
            da = sum(a)
            for b, cb in other.terms.items():
                if da + sum(b) > cap:
                    continue
                e = tuple(x + y for x, y in zip(a, b))
                c = ca * cb * QCoef.v_power(ctx.twist(a, b))
                s = out.get(e)
                out[e] = c if s is None else s + c
        return TruncatedSeries(ctx, out)

    def scale(self, c: QCoef) -> "TruncatedSeries":
        return TruncatedSeries(self.ctx, {a: x * c for a, x in self.terms.items()})

    def inverse(self) -> "TruncatedSeries":
        c0 = self.constant_term()
        if c0.is_zero():
            raise QuantumError("series with zero constant term is not invertible")
        c0_inv = c0.inverse()
        w = TruncatedSeries(self.ctx, {a: c for a, c in self.scale(c0_inv).terms.items()
                                       if any(a)})
        out = TruncatedSeries.unit(self.ctx)
        power = TruncatedSeries.unit(self.ctx)
        for _ in range(self.ctx.truncation):
            power = power * w
            if not power.terms:
                break
            out = out + (-power if _ % 2 == 0 else power)
        return out.scale(c0_inv)

    def __pow__(self, k: int) -> "TruncatedSeries":
        if k == -1:
            return self.inverse()
        if k < 0:
            return self.inverse() ** (-k)
        out = TruncatedSeries.unit(self.ctx)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        return (isinstance(other, TruncatedSeries) and self.ctx == other.ctx
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.ctx, tuple(sorted(self.terms.items(), key=lambda t: t[0]))))

    def _check(self, other: "TruncatedSeries"):
        if self.ctx != other.ctx:
            raise QuantumError("mixed series contexts")

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for a, c in self.sorted_terms():
            mono = "*".join(f"y{i+1}^{k}" if k > 1 else f"y{i+1}"
                            for i, k in enumerate(a) if k)
            cs = str(c)
            parts.append(f"({cs})*{mono}" if mono else cs)
        return " + ".join(parts)

    __repr__ = __str__


def qdilog(ctx: SeriesContext, alpha: Sequence[int]) -> TruncatedSeries:
    """The quantum dilogarithm E(y^alpha), truncated in total degree.

    alpha must be a non-zero vector with non-negative entries; since the
    skew form vanishes on alpha, (y^alpha)^j = y^{j alpha} with no twist.
    """
    alpha = tuple(alpha)
    if not any(alpha):
        raise QuantumError("alpha must be non-zero")
    if any(x < 0 for x in alpha):
        raise QuantumError("alpha must lie in the non-negative orthant")
    size = sum(alpha)
    terms = {(0,) * ctx.n: QCoef.from_int(1)}
    j = 1
    while j * size <= ctx.truncation:
        terms[tuple(j * x for x in alpha)] = qfactorial_coeff(j)
        j += 1
    return TruncatedSeries(ctx, terms)


def qexp(series: TruncatedSeries) -> TruncatedSeries:
    """E applied to a series with zero constant term (functional calculus)."""
    if not series.constant_term().is_zero():
        raise QuantumError("E(u) needs a series with zero constant term")
    out = TruncatedSeries.unit(series.ctx)
    power = TruncatedSeries.unit(series.ctx)
    j = 1
    while True:
        power = power * series
        if not power.terms or j > series.ctx.truncation:
            break
        out = out + power.scale(qfactorial_coeff(j))
        j += 1
    return out


# -- compatible pairs and quantum seeds ------------------------------------------------


@dataclass(frozen=True)
class CompatiblePair:
    ice: IceMatrix
    lam: tuple            # m x m skew-symmetric integer matrix

    def __post_init__(self):
        m = self.ice.m
        lam = tuple(tuple(int(x) for x in row) for row in self.lam)
        object.__setattr__(self, "lam", lam)
        if len(lam) != m or any(len(r) != m for r in lam):
            raise IncompatibleInputError("Lambda must be m x m")
        if any(lam[i][j] != -lam[j][i] for i in range(m) for j in range(m)):
            raise IncompatibleInputError("Lambda must be skew-symmetric")
        prod = mat_mul(transpose(self.ice.rows), lam)
        n = self.ice.n
        d = []
        for i in range(n):
            for j in range(m):
                if j == i:
                    if prod[i][j] <= 0:
                        raise IncompatibleInputError(
                            f"B~^T Lambda has non-positive diagonal entry {prod[i][j]}")
                    d.append(prod[i][j])
                elif prod[i][j] != 0:
                    raise IncompatibleInputError("B~^T Lambda is not of the form [D 0]")
        object.__setattr__(self, "d", tuple(d))

    @property
    def m(self) -> int:
        return self.ice.m

    @property
    def n(self) -> int:
        return self.ice.n

    def is_unital(self) -> bool:
        return all(x == 1 for x in self.d)

    @staticmethod
    def principal_framing(b: ExchangeMatrix) -> "CompatiblePair":
        """B~ = [B; I] with Lambda = [[0, -I], [I, B^T]]; unitally compatible."""
        if not b.is_skew_symmetric():
            raise IncompatibleInputError("principal framing needs a skew-symmetric matrix")
        n = b.n
        rows = list(b.rows) + list(identity(n))
        lam = [[0] * (2 * n) for _ in range(2 * n)]
        for i in range(n):
            lam[i][n + i] = -1
            lam[n + i][i] = 1
        for i in range(n):
            for j in range(n):
                lam[n + i][n + j] = b.rows[j][i]
        return CompatiblePair(IceMatrix(tuple(tuple(r) for r in rows), n),
                              tuple(tuple(r) for r in lam))

    def mutate(self, k: int) -> "CompatiblePair":
        """Mutation via B~' = E_eps B~ F_eps, Lambda' = E_eps^T Lambda E_eps.

        Both sign choices are computed; they must agree.
        """
        if not 1 <= k <= self.n:
            raise MutationRangeError(f"vertex {k} is not mutable (1..{self.n})")
        results = []
        for eps in (1, -1):
            pair = elementary_pair(self.ice, k, eps, size=self.m)
            b_new = mat_mul(mat_mul(pair.e, self.ice.rows), pair.f)
            lam_new = mat_mul(mat_mul(transpose(pair.e), self.lam), pair.e)
            results.append((b_new, lam_new))
        if results[0] != results[1]:
            raise QuantumError("compatible-pair mutation depends on the sign choice")
        b_new, lam_new = results[0]
        if b_new != self.ice.mutate(k).rows:
            raise QuantumError("E B F disagrees with matrix mutation")
        return CompatiblePair(IceMatrix(b_new, self.n), lam_new)


class TorusElement:
    """An element of the quantum torus T_Lambda, expanded in the initial basis."""

    __slots__ = ("lam", "terms")

    def __init__(self, lam: tuple, terms: dict):
        self.lam = lam
        self.terms = {a: c for a, c in terms.items() if not c.is_zero()}

    @staticmethod
    def monomial(lam: tuple, alpha: Sequence[int], coeff: Frac = None) -> "TorusElement":
        return TorusElement(lam, {tuple(alpha): coeff if coeff is not None else Frac.from_int(VRING, 1)})

    @staticmethod
    def unit(lam: tuple) -> "TorusElement":
        return TorusElement.monomial(lam, (0,) * len(lam))

    def twist(self, a: tuple, b: tuple) -> int:
        total = 0
        for i, ai in enumerate(a):
            if ai:
                row = self.lam[i]
                total += ai * sum(row[j] * bj for j, bj in enumerate(b) if bj)
        return total

    def __add__(self, other: "TorusElement") -> "TorusElement":
        out = dict(self.terms)
        for a, c in other.terms.items():
            s = out.get(a)
            ns = c if s is None else s + c
            if ns.is_zero():
                out.pop(a, None)
            else:
                out[a] = ns
        return TorusElement(self.lam, out)

    def __neg__(self):
        return TorusElement(self.lam, {a: -c for a, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "TorusElement") -> "TorusElement":
        out: dict = {}
        for a, ca in self.terms.items():
            for b, cb in other.terms.items():
                e = tuple(x + y for x, y in zip(a, b))
                c = ca * cb * vpow(self.twist(a, b))
                s = out.get(e)
                ns = c if s is None else s + c
                if ns.is_zero():
                    out.pop(e, None)
                else:
                    out[e] = ns
        return TorusElement(self.lam, out)

    def scale(self, c: Frac) -> "TorusElement":
        return TorusElement(self.lam, {a: x * c for a, x in self.terms.items()})

    def __pow__(self, k: int) -> "TorusElement":
        if k < 0:
            raise QuantumError("negative powers only via right_div on monomials")
        out = TorusElement.unit(self.lam)
        for _ in range(k):
            out = out * self
        return out

    def is_zero(self) -> bool:
        return not self.terms

    def right_div(self, divisor: "TorusElement") -> "TorusElement":
        """z with z * divisor = self; NonLaurentError when no such torus element."""
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero torus element")
        if self.is_zero():
            return TorusElement(self.lam, {})
        lead = max(divisor.terms)
        lead_c = divisor.terms[lead]
        # in an exact division the lex-least quotient exponent is forced
        low = tuple(a - b for a, b in zip(min(self.terms), min(divisor.terms)))
        rem = TorusElement(self.lam, dict(self.terms))
        out: dict = {}
        budget = 16 * (len(self.terms) + 2) * (len(divisor.terms) + 2)
        while rem.terms:
            budget -= 1
            top = max(rem.terms)
            ze = tuple(x - y for x, y in zip(top, lead))
            if ze < low or budget < 0:
                raise NonLaurentError("remainder is not divisible; not a torus element")
            zc = rem.terms[top] / (lead_c * vpow(self.twist(ze, lead)))
            out[ze] = zc
            rem = rem - TorusElement.monomial(self.lam, ze, zc) * divisor
        return TorusElement(self.lam, out)

    def __eq__(self, other):
        return (isinstance(other, TorusElement) and self.lam == other.lam
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.lam, tuple(sorted(self.terms.items(), key=lambda t: t[0]))))

    def specialize_v1(self, ring: Optional[PolyRing] = None) -> Frac:
        """Commutative specialization at v = 1, as a rational function in x's."""
        m = len(self.lam)
        ring = ring or xy_ring(m)
        out = Frac.from_int(ring, 0)
        for a, c in self.terms.items():
            den_at_1 = c.den.eval_int({0: 1})
            if den_at_1 == 0:
                raise PoleAtOneError(f"coefficient {c} has a pole at v = 1")
            num_at_1 = c.num.eval_int({0: 1})
            val = Fraction(num_at_1, den_at_1)
            mono = Frac.monomial(ring, a, val.numerator)
            out = out + mono / Frac.from_int(ring, val.denominator)
        return out

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda t: t[0], reverse=True)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for a, c in self.sorted_terms():
            mono = "*".join(f"x{i+1}^{k}" if k not in (0, 1) else f"x{i+1}"
                            for i, k in enumerate(a) if k)
            parts.append(f"({c})*x^{list(a)}" if not mono else f"({c})*{mono}")
        return " + ".join(parts)

    __repr__ = __str__


@dataclass(frozen=True)
class QuantumSeed:
    pair: CompatiblePair          # current (B~(t), Lambda(t))
    init_lam: tuple               # Lambda at t0: the torus the cluster lives in
    cluster: tuple                # m torus elements

    @staticmethod
    def initial(pair: CompatiblePair) -> "QuantumSeed":
        cluster = tuple(TorusElement.monomial(pair.lam, tuple(1 if j == i else 0 for j in range(pair.m)))
                        for i in range(pair.m))
        return QuantumSeed(pair, pair.lam, cluster)

    @property
    def n(self) -> int:
        return self.pair.n

    @property
    def m(self) -> int:
        return self.pair.m

    def twisted_monomial(self, beta: Sequence[int]) -> TorusElement:
        """x(t)^beta for beta >= 0: the bar-invariant ordered product."""
        lam_t = self.pair.lam
        s = 0
        beta = tuple(beta)
        for i in range(len(beta)):
            if beta[i]:
                for j in range(i + 1, len(beta)):
                    if beta[j]:
                        s += beta[i] * beta[j] * lam_t[i][j]
        out = TorusElement.monomial(self.init_lam, (0,) * self.m, vpow(-s))
        for i, k in enumerate(beta):
            if k:
                out = out * self.cluster[i] ** k
        return out

    def mutate(self, k: int) -> "QuantumSeed":
        """Quantum exchange relation x'_k = x^{E+ e_k} + x^{E- e_k}."""
        if not 1 <= k <= self.n:
            raise MutationRangeError(f"vertex {k} is not mutable (1..{self.n})")
        ice = self.pair.ice
        lam_t = self.pair.lam
        kk = k - 1
        parts = []
        for eps in (1, -1):
            beta = [0] * self.m
            for i in range(self.m):
                if i != kk:
                    beta[i] = max(0, -eps * ice.rows[i][kk])
            # x(t)^alpha with alpha = beta - e_k, rewritten over x_k(t)
            s = sum(beta[i] * lam_t[i][kk] for i in range(self.m))
            parts.append(self.twisted_monomial(beta).scale(vpow(s)))
        total = parts[0] + parts[1]
        new_xk = total.right_div(self.cluster[kk])
        new_cluster = tuple(new_xk if i == kk else x for i, x in enumerate(self.cluster))
        return QuantumSeed(self.pair.mutate(k), self.init_lam, new_cluster)

    def mutate_seq(self, seq: Iterable[int]) -> "QuantumSeed":
        out = self
        for k in seq:
            out = out.mutate(k)
        return out

    def specialize_v1(self, ring: Optional[PolyRing] = None) -> tuple:
        ring = ring or xy_ring(self.m)
        return tuple(x.specialize_v1(ring) for x in self.cluster)


def quantum_mutate_seed(seed: QuantumSeed, k: int) -> QuantumSeed:
    return seed.mutate(k)


def specialize_q1(elem: TorusElement, ring: Optional[PolyRing] = None) -> Frac:
    return elem.specialize_v1(ring)


# -- dilogarithm products and identities -------------------------------------------------


@dataclass
class DilogFactors:
    betas: list       # c-vectors beta_s = C(t_{s-1}) e_{i_s}
    signs: list       # their common signs eps_s


def _c_vector_walk(b: ExchangeMatrix, seq: Sequence[int]) -> DilogFactors:
    n = b.n
    c = identity(n)
    cur = b
    betas, signs = [], []
    for step, k in enumerate(seq, start=1):
        eps = _mutating_sign(c, k, step)
        col = tuple(c[i][k - 1] for i in range(n))
        betas.append(col)
        signs.append(eps)
        pair = elementary_pair(cur, k, eps)
        c = mat_mul(c, pair.f)
        cur = cur.mutate(k)
    return DilogFactors(betas, signs)


def dilog_product(b: ExchangeMatrix, seq: Sequence[int], truncation: int = 10) -> TruncatedSeries:
    """E(i) = E(eps_N beta_N)^{eps_N} ... E(eps_1 beta_1)^{eps_1} in A_B."""
    if not b.is_skew_symmetric():
        raise QuantumError("dilogarithm products need a skew-symmetric matrix")
    ctx = SeriesContext(b.rows, truncation)
    walk = _c_vector_walk(b, seq)
    out = TruncatedSeries.unit(ctx)
    for beta, eps in zip(reversed(walk.betas), reversed(walk.signs)):
        arg = tuple(eps * x for x in beta)
        factor = qdilog(ctx, arg)
        if eps < 0:
            factor = factor.inverse()
        out = out * factor
    return out


@dataclass
class IdentityReport:
    holds: bool
    permutation: Optional[tuple]
    series: Optional[TruncatedSeries]
    truncation: int


def _row_permutation(c1: tuple, c2: tuple) -> Optional[tuple]:
    """Permutation sigma with c2[i] == c1[sigma[i]], if any."""
    n = len(c1)
    used = [False] * n
    sigma = []
    for i in range(n):
        found = None
        for j in range(n):
            if not used[j] and c1[j] == c2[i]:
                found = j
                break
        if found is None:
            return None
        used[found] = True
        sigma.append(found)
    return tuple(sigma)


def verify_identity(b: ExchangeMatrix, seq1: Sequence[int], seq2: Sequence[int],
                    truncation: int = 10) -> IdentityReport:
    """Check E(seq1) = E(seq2) after confirming P C(end1) = C(end2)."""
    c1 = c_matrix_end(b, seq1)
    c2 = c_matrix_end(b, seq2)
    sigma = _row_permutation(c1, c2)
    if sigma is None:
        raise PreconditionFailedError(
            "no permutation relates the final c-matrices; the identity is not forced")
    e1 = dilog_product(b, seq1, truncation)
    e2 = dilog_product(b, seq2, truncation)
    holds = e1 == e2
    return IdentityReport(holds, sigma, e1 if holds else None, truncation)


def c_matrix_end(b: ExchangeMatrix, seq: Sequence[int]) -> tuple:
    n = b.n
    c = identity(n)
    cur = b
    for step, k in enumerate(seq, start=1):
        eps = _mutating_sign(c, k, step)
        pair = elementary_pair(cur, k, eps)
        c = mat_mul(c, pair.f)
        cur = cur.mutate(k)
    return c


def pentagon_check(truncation: int = 10) -> bool:
    """E(y1) E(y2) = E(y2) E(q^{-1/2} y1 y2) E(y1) on the standard rank-2 form."""
    ctx = SeriesContext(((0, 1), (-1, 0)), truncation)
    e1 = qdilog(ctx, (1, 0))
    e2 = qdilog(ctx, (0, 1))
    e12 = qdilog(ctx, (1, 1))  # q^{-1/2} y1 y2 = y^{(1,1)}
    return e1 * e2 == e2 * e12 * e1


def functional_equation_check(truncation: int = 10) -> bool:
    """(1 + q^{1/2} y) E(y) = E(q y) to the given order."""
    ctx = SeriesContext(((0,),), truncation)
    e = qdilog(ctx, (1,))
    lhs = (TruncatedSeries.unit(ctx)
           + TruncatedSeries.generator(ctx, (1,), QCoef.v_power(1))) * e
    rhs = TruncatedSeries(ctx, {a: c * QCoef.v_power(2 * sum(a)) for a, c in e.terms.items()})
    return lhs == rhs


@dataclass
class DTResult:
    sequence: Optional[tuple]
    series: Optional[TruncatedSeries]
    permutation: Optional[tuple]

    @property
    def found(self) -> bool:
        return self.sequence is not None


def combinatorial_dt(b: ExchangeMatrix, truncation: int = 10,
                     search_depth: int = 12) -> DTResult:
    """Search for a sequence whose final -C is a permutation; return E(i).

    Iterative deepening over sequences without immediate repeats; the result
    is independent of the found sequence by the identity theorem.
    """
    if not b.is_skew_symmetric():
        raise QuantumError("combinatorial DT invariants need a skew-symmetric matrix")
    n = b.n

    def dfs(c, cur, path, depth_left):
        if path and is_permutation(tuple(tuple(-x for x in row) for row in c)):
            return tuple(path)
        if depth_left == 0:
            return None
        for k in range(1, n + 1):
            if path and path[-1] == k:
                continue
            try:
                eps = _mutating_sign(c, k, len(path) + 1)
            except SignIncoherenceError:
                continue
            pair = elementary_pair(cur, k, eps)
            found = dfs(mat_mul(c, pair.f), cur.mutate(k), path + [k], depth_left - 1)
            if found is not None:
                return found
        return None

    for depth in range(1, search_depth + 1):
        seq = dfs(identity(n), b, [], depth)
        if seq is not None:
            series = dilog_product(b, seq, truncation)
            cend = c_matrix_end(b, seq)
            return DTResult(seq, series, _row_permutation(identity(n), cend))
    return DTResult(None, None, None)


# -- the Fock-Goncharov adjoint separation check ---------------------------------------------


@dataclass
class AdjointReport:
    holds: bool
    per_generator: dict


def adjoint_check(pair: CompatiblePair, k: int, truncation: int = 10) -> AdjointReport:
    """Verify mu_k^# = Ad'(E(y_k)) o phi_{k,+} on every torus generator.

    Conjugation of a monomial x^alpha by E(y_k) multiplies it on the left by
    an explicit product of (1 + q^{1/2 +- r} y_k)^{+-1} factors determined by
    the commutation exponent of y_k with x^alpha; rearranged, both sides
    become finite and the comparison is exact.  `truncation` caps the
    inverse-factor expansion used in the cross-check for positive exponents.
    """
    if not pair.is_unital():
        raise PreconditionFailedError("adjoint separation implemented for unital pairs only")
    if not 1 <= k <= pair.n:
        raise MutationRangeError(f"vertex {k} is not mutable (1..{pair.n})")
    m = pair.m
    lam = pair.lam
    kk = k - 1
    bcol = tuple(pair.ice.rows[i][kk] for i in range(m))
    y_k = TorusElement.monomial(lam, bcol)
    seed = QuantumSeed.initial(pair)
    mutated = seed.mutate(k)
    e_plus = elementary_pair(pair.ice, k, 1, size=m).e
    results = {}
    for j in range(m):
        alpha = tuple(e_plus[i][j] for i in range(m))
        phi_x = TorusElement.monomial(lam, alpha)
        c = sum(bcol[i] * sum(lam[i][t] * alpha[t] for t in range(m)) for i in range(m))
        lhs = mutated.cluster[j]
        if c >= 0:
            # prod_{r=1..c} (1 + q^{1/2 - r} y_k) * x'_j must equal x^alpha
            check = lhs
            for r in range(1, c + 1):
                factor = TorusElement.unit(lam) + y_k.scale(vpow(1 - 2 * r))
                check = factor * check
            results[j + 1] = check == phi_x
        else:
            rhs = phi_x
            for r in range(abs(c)):
                factor = TorusElement.unit(lam) + y_k.scale(vpow(1 + 2 * r))
                rhs = factor * rhs
            results[j + 1] = lhs == rhs
    return AdjointReport(all(results.values()), results)
