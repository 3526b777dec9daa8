"""Exact sparse multivariate polynomials and rational functions over the integers.

Polynomials are exponent-vector -> coefficient maps over a fixed, ordered
tuple of variable names.  Rational functions are kept reduced (gcd of
numerator and denominator is 1) and sign-normalized (the denominator's
graded-lex leading coefficient is positive), so equal values have equal
representations and canonical string forms.

The gcd is computed by primitive pseudo-remainder sequences, recursing on
the number of variables, with fast paths for the cases that dominate
cluster mutation (monomial denominators, exact cancellation of binomial
factors).
"""

from __future__ import annotations

from math import gcd as int_gcd
from typing import Iterable, Mapping


class RatFuncError(ValueError):
    pass


class PolyRing:
    """A polynomial ring Z[names].  Rings with equal names compare equal."""

    _cache: dict[tuple[str, ...], "PolyRing"] = {}

    def __new__(cls, names: Iterable[str]):
        names = tuple(names)
        ring = cls._cache.get(names)
        if ring is None:
            ring = super().__new__(cls)
            ring.names = names
            ring.nvars = len(names)
            ring._zero_exp = (0,) * len(names)
            ring.zero = object.__new__(Poly)
            ring.zero.ring = ring
            ring.zero.terms = {}
            ring.one = Poly(ring, {ring._zero_exp: 1})
            cls._cache[names] = ring
        return ring

    def __repr__(self):
        return f"PolyRing{self.names}"

    def gen(self, i: int) -> "Poly":
        exp = [0] * self.nvars
        exp[i] = 1
        return Poly(self, {tuple(exp): 1})

    def gens(self) -> tuple["Poly", ...]:
        return tuple(self.gen(i) for i in range(self.nvars))

    def var_index(self, name: str) -> int:
        return self.names.index(name)

    def from_int(self, c: int) -> "Poly":
        if c == 0:
            return self.zero
        return Poly(self, {self._zero_exp: c})

    def monomial(self, exp: Iterable[int], coeff: int = 1) -> "Poly":
        if coeff == 0:
            return self.zero
        return Poly(self, {tuple(exp): coeff})


def _grlex_key(exp: tuple) -> tuple:
    return (sum(exp), exp)


class Poly:
    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: Mapping[tuple, int]):
        self.ring = ring
        self.terms = {e: c for e, c in terms.items() if c != 0}

    # -- predicates ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        return self.terms == {self.ring._zero_exp: 1}

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and self.ring._zero_exp in self.terms)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def const(self) -> int:
        if not self.is_constant():
            raise RatFuncError(f"not a constant: {self}")
        return self.terms.get(self.ring._zero_exp, 0)

    def variables(self) -> set:
        used = set()
        for e in self.terms:
            for i, k in enumerate(e):
                if k:
                    used.add(i)
        return used

    def degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, i: int) -> int:
        if not self.terms:
            return -1
        return max(e[i] for e in self.terms)

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e, 0) + c
            if s:
                terms[e] = s
            elif e in terms:
                del terms[e]
        out = object.__new__(Poly)
        out.ring, out.terms = self.ring, terms
        return out

    __radd__ = __add__

    def __neg__(self):
        out = object.__new__(Poly)
        out.ring = self.ring
        out.terms = {e: -c for e, c in self.terms.items()}
        return out

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.terms, other.terms
        if not a or not b:
            return self.ring.zero
        if len(a) > len(b):
            a, b = b, a
        terms: dict = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                s = terms.get(e, 0) + ca * cb
                if s:
                    terms[e] = s
                elif e in terms:
                    del terms[e]
        out = object.__new__(Poly)
        out.ring, out.terms = self.ring, terms
        return out

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise RatFuncError("negative power of a polynomial; use Frac")
        result = self.ring.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.ring is not self.ring:
                raise RatFuncError("mixed polynomial rings")
            return other
        if isinstance(other, int):
            return self.ring.from_int(other)
        return NotImplemented

    # -- structure ----------------------------------------------------------

    def leading(self) -> tuple:
        """(exponent, coefficient) of the graded-lex leading term."""
        e = max(self.terms, key=_grlex_key)
        return e, self.terms[e]

    def content(self) -> int:
        """Positive gcd of the coefficients (0 for the zero polynomial)."""
        g = 0
        for c in self.terms.values():
            g = int_gcd(g, c)
            if g == 1:
                return 1
        return g

    def monomial_part(self) -> tuple:
        """Componentwise minimum of the exponent vectors."""
        it = iter(self.terms)
        m = list(next(it))
        for e in it:
            for i, k in enumerate(e):
                if k < m[i]:
                    m[i] = k
        return tuple(m)

    def shift(self, exp: tuple) -> "Poly":
        """Multiply by the (possibly negative-exponent) monomial x^exp.

        The result must be a genuine polynomial; raises otherwise.
        """
        terms = {}
        for e, c in self.terms.items():
            ne = tuple(x + y for x, y in zip(e, exp))
            if any(x < 0 for x in ne):
                raise RatFuncError("shift would create negative exponents")
            terms[ne] = c
        out = object.__new__(Poly)
        out.ring, out.terms = self.ring, terms
        return out

    def exact_div(self, other: "Poly") -> "Poly":
        """Exact polynomial division; raises RatFuncError if not exact."""
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        if self.is_zero():
            return self.ring.zero
        if other.is_one():
            return self
        if other.is_monomial():
            (de, dc), = other.terms.items()
            terms = {}
            for e, c in self.terms.items():
                q, r = divmod(c, dc)
                ne = tuple(x - y for x, y in zip(e, de))
                if r or any(x < 0 for x in ne):
                    raise RatFuncError("not divisible")
                terms[ne] = q
            return Poly(self.ring, terms)
        rem = dict(self.terms)
        qterms: dict = {}
        de, dc = other.leading()
        while rem:
            e = max(rem, key=_grlex_key)
            c = rem[e]
            q, r = divmod(c, dc)
            ne = tuple(x - y for x, y in zip(e, de))
            if r or any(x < 0 for x in ne):
                raise RatFuncError("not divisible")
            qterms[ne] = q
            for oe, oc in other.terms.items():
                se = tuple(x + y for x, y in zip(ne, oe))
                s = rem.get(se, 0) - q * oc
                if s:
                    rem[se] = s
                elif se in rem:
                    del rem[se]
        return Poly(self.ring, qterms)

    def divides(self, other: "Poly") -> bool:
        try:
            other.exact_div(self)
            return True
        except RatFuncError:
            return False

    # -- substitution -------------------------------------------------------

    def subs(self, values: Mapping[int, "Frac | Poly | int"]) -> "Frac":
        """Substitute values for variables (by index); others stay symbolic."""
        result = Frac.from_int(self.ring, 0)
        for e, c in self.terms.items():
            kept = [k if i not in values else 0 for i, k in enumerate(e)]
            term = Frac.from_poly(self.ring.monomial(kept, c))
            for i, k in enumerate(e):
                if k and i in values:
                    v = values[i]
                    if not isinstance(v, Frac):
                        v = Frac(self.ring, self._coerce(v), self.ring.one)
                    term = term * v ** k
            result = result + term
        return result

    def eval_int(self, values: Mapping[int, int]) -> int:
        total = 0
        for e, c in self.terms.items():
            v = c
            for i, k in enumerate(e):
                if k:
                    v *= values[i] ** k
            total += v
        return total

    def map_ring(self, ring: PolyRing, var_map: Mapping[int, int]) -> "Poly":
        """Reinterpret in another ring, sending variable i to var_map[i]."""
        terms: dict = {}
        for e, c in self.terms.items():
            ne = [0] * ring.nvars
            for i, k in enumerate(e):
                if k:
                    ne[var_map[i]] += k
            key = tuple(ne)
            terms[key] = terms.get(key, 0) + c
        return Poly(ring, terms)

    # -- hashing / output ---------------------------------------------------

    def key(self) -> tuple:
        return tuple(sorted(self.terms.items()))

    def __eq__(self, other):
        if isinstance(other, int):
            return self.is_constant() and self.terms.get(self.ring._zero_exp, 0) == other
        return isinstance(other, Poly) and self.ring is other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring.names, self.key()))

    def sorted_terms(self) -> list:
        """Terms ordered ascending: by total degree, then earlier variables first."""
        return sorted(self.terms.items(), key=lambda ec: (sum(ec[0]), tuple(-x for x in ec[0])))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            factors = []
            for i, k in enumerate(e):
                if k == 1:
                    factors.append(self.ring.names[i])
                elif k:
                    factors.append(f"{self.ring.names[i]}^{k}")
            if not factors:
                body = str(abs(c))
            elif abs(c) == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(abs(c))] + factors)
            if not parts:
                parts.append(body if c > 0 else "-" + body)
            else:
                parts.append(("+" if c > 0 else "-") + body)
        return "".join(parts)

    __repr__ = __str__


# -- gcd ---------------------------------------------------------------------


def _strip_monomial(f: Poly) -> tuple:
    m = f.monomial_part()
    if any(m):
        f = f.shift(tuple(-x for x in m))
    return m, f


def poly_gcd(f: Poly, g: Poly) -> Poly:
    """Positive-content gcd of two polynomials in the same ring."""
    if f.ring is not g.ring:
        raise RatFuncError("mixed polynomial rings")
    ring = f.ring
    if f.is_zero():
        return _positive(g)
    if g.is_zero():
        return _positive(f)
    cf, cg = f.content(), g.content()
    c = int_gcd(cf, cg)
    if f.is_constant() or g.is_constant():
        return ring.from_int(c)
    mf, f1 = _strip_monomial(f)
    mg, g1 = _strip_monomial(g)
    m = tuple(min(a, b) for a, b in zip(mf, mg))
    mono = ring.monomial(m, c)
    if f1.is_monomial() or g1.is_monomial():
        return mono
    common = f1.variables() & g1.variables()
    if not common:
        return mono
    f1 = f1.exact_div(ring.from_int(cf))
    g1 = g1.exact_div(ring.from_int(cg))
    # frequent in mutation: one factor cancels completely
    if len(f1.terms) == len(g1.terms):
        if f1 == g1 or f1 == -g1:
            return mono * _positive(f1)
    try:
        g1.exact_div(f1)
        return mono * _positive(f1)
    except RatFuncError:
        pass
    try:
        f1.exact_div(g1)
        return mono * _positive(g1)
    except RatFuncError:
        pass
    var = min(common, key=lambda i: max(f1.degree_in(i), g1.degree_in(i)))
    h = _gcd_recursive(f1, g1, var)
    return mono * _positive(h)


def _positive(f: Poly) -> Poly:
    if f.is_zero():
        return f
    _, lc = f.leading()
    return -f if lc < 0 else f


def _to_univ(f: Poly, var: int) -> dict:
    """View f as a univariate polynomial in `var` with Poly coefficients."""
    ring = f.ring
    coeffs: dict[int, dict] = {}
    for e, c in f.terms.items():
        d = e[var]
        rest = list(e)
        rest[var] = 0
        coeffs.setdefault(d, {})[tuple(rest)] = c
    return {d: Poly(ring, t) for d, t in coeffs.items()}


def _from_univ(coeffs: dict, var: int, ring: PolyRing) -> Poly:
    terms: dict = {}
    for d, p in coeffs.items():
        for e, c in p.terms.items():
            ne = list(e)
            ne[var] += d
            terms[tuple(ne)] = c
    return Poly(ring, terms)


def _univ_content(coeffs: dict, ring: PolyRing) -> Poly:
    g = ring.zero
    for p in coeffs.values():
        g = poly_gcd(g, p)
        if g.is_one():
            return g
    return g


def _univ_scale(coeffs: dict, p: Poly) -> dict:
    return {d: q * p for d, q in coeffs.items()}


def _univ_div(coeffs: dict, p: Poly) -> dict:
    return {d: q.exact_div(p) for d, q in coeffs.items()}


def _univ_sub(a: dict, b: dict) -> dict:
    out = dict(a)
    for d, p in b.items():
        s = out.get(d, p.ring.zero) - p
        if s.is_zero():
            out.pop(d, None)
        else:
            out[d] = s
    return out


def _pseudo_rem(f: dict, g: dict, ring: PolyRing) -> dict:
    """Pseudo-remainder of univariate-view polynomials (coefficients Poly)."""
    dg = max(g)
    lg = g[dg]
    r = dict(f)
    while r and max(r) >= dg:
        dr = max(r)
        lr = r[dr]
        r = _univ_scale(r, lg)
        shift_g = {d + dr - dg: p * lr for d, p in g.items()}
        r = _univ_sub(r, shift_g)
        r.pop(dr, None)
        r = {d: p for d, p in r.items() if not p.is_zero()}
    return r


def _gcd_recursive(f: Poly, g: Poly, var: int) -> Poly:
    ring = f.ring
    F, G = _to_univ(f, var), _to_univ(g, var)
    cF, cG = _univ_content(F, ring), _univ_content(G, ring)
    cont = poly_gcd(cF, cG)
    F, G = _univ_div(F, cF), _univ_div(G, cG)
    if max(F) < max(G):
        F, G = G, F
    while G:
        R = _pseudo_rem(F, G, ring)
        if not R:
            break
        cR = _univ_content(R, ring)
        F, G = G, _univ_div(R, cR)
    result = _from_univ(G if G else F, var, ring)
    return cont * result


# -- fractions ----------------------------------------------------------------


class Frac:
    """A reduced fraction of two polynomials in the same ring."""

    __slots__ = ("ring", "num", "den")

    def __init__(self, ring: PolyRing, num: Poly, den: Poly, reduce: bool = True):
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if reduce and not num.is_zero():
            g = poly_gcd(num, den)
            if not g.is_one():
                num = num.exact_div(g)
                den = den.exact_div(g)
        if num.is_zero():
            den = ring.one
        _, lc = den.leading()
        if lc < 0:
            num, den = -num, -den
        self.ring = ring
        self.num = num
        self.den = den

    # -- constructors --------------------------------------------------------

    @classmethod
    def from_int(cls, ring: PolyRing, c: int) -> "Frac":
        return cls(ring, ring.from_int(c), ring.one, reduce=False)

    @classmethod
    def from_poly(cls, p: Poly) -> "Frac":
        return cls(p.ring, p, p.ring.one, reduce=False)

    @classmethod
    def gen(cls, ring: PolyRing, i: int) -> "Frac":
        return cls(ring, ring.gen(i), ring.one, reduce=False)

    @classmethod
    def monomial(cls, ring: PolyRing, exp: Iterable[int], coeff: int = 1) -> "Frac":
        """Laurent monomial coeff * x^exp with integer (possibly negative) exponents."""
        pos, neg = [], []
        for x in exp:
            pos.append(x if x > 0 else 0)
            neg.append(-x if x < 0 else 0)
        return cls(ring, ring.monomial(pos, coeff), ring.monomial(neg), reduce=False)

    # -- predicates ----------------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.num.is_one() and self.den.is_one()

    def is_laurent(self, in_vars: Iterable[int] | None = None) -> bool:
        """True if the reduced denominator is a monomial (in the given variables)."""
        if not self.den.is_monomial():
            return False
        if in_vars is None:
            return True
        allowed = set(in_vars)
        return all(i in allowed for i in self.den.variables())

    # -- arithmetic ----------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Frac):
            if other.ring is not self.ring:
                raise RatFuncError("mixed rings")
            return other
        if isinstance(other, int):
            return Frac.from_int(self.ring, other)
        if isinstance(other, Poly):
            return Frac.from_poly(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den == other.den:
            return Frac(self.ring, self.num + other.num, self.den)
        g = poly_gcd(self.den, other.den)
        if g.is_one():
            return Frac(self.ring, self.num * other.den + other.num * self.den,
                        self.den * other.den)
        da = self.den.exact_div(g)
        db = other.den.exact_div(g)
        num = self.num * db + other.num * da
        return Frac(self.ring, num, da * other.den)

    __radd__ = __add__

    def __neg__(self):
        out = object.__new__(Frac)
        out.ring, out.num, out.den = self.ring, -self.num, self.den
        return out

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        # cross-reduce before multiplying to keep intermediates small
        a, d = _cross_reduce(self.num, other.den)
        b, c = _cross_reduce(other.num, self.den)
        return Frac(self.ring, a * b, c * d, reduce=False)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def inverse(self) -> "Frac":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return Frac(self.ring, self.den, self.num, reduce=False)

    def __pow__(self, n: int):
        if n == 0:
            return Frac.from_int(self.ring, 1)
        base = self if n > 0 else self.inverse()
        n = abs(n)
        out = object.__new__(Frac)
        out.ring = self.ring
        out.num = base.num ** n
        out.den = base.den ** n
        return out

    # -- structure -----------------------------------------------------------

    def subs(self, values: Mapping[int, "Frac | Poly | int"]) -> "Frac":
        return self.num.subs(values) / self.den.subs(values)

    def key(self) -> tuple:
        return (self.num.key(), self.den.key())

    def __eq__(self, other):
        if isinstance(other, int):
            return self.den.is_one() and self.num == other
        return (isinstance(other, Frac) and self.ring is other.ring
                and self.num == other.num and self.den == other.den)

    def __hash__(self):
        return hash((self.ring.names, self.num.key(), self.den.key()))

    def __str__(self):
        num = str(self.num)
        if self.den.is_one():
            return num
        if len(self.num.terms) > 1 or self.num.terms.get(self.ring._zero_exp, 0) < 0:
            num = f"({num})"
        den = str(self.den)
        # a lone variable power is the only denominator that binds correctly
        (de, dc), = self.den.terms.items() if self.den.is_monomial() else [((), 0)]
        if not (self.den.is_monomial() and dc == 1 and sum(1 for x in de if x) <= 1):
            den = f"({den})"
        return f"{num}/{den}"

    __repr__ = __str__


def _cross_reduce(a: Poly, b: Poly) -> tuple:
    if a.is_zero() or b.is_one():
        return a, b
    g = poly_gcd(a, b)
    if g.is_one():
        return a, b
    return a.exact_div(g), b.exact_div(g)


# -- parsing -------------------------------------------------------------------


class _Parser:
    """Recursive-descent parser for the rational-string grammar.

    Terms use integer coefficients, `*`, `/`, `^` (integer exponents, a
    leading `-` after `^` is accepted) and parentheses.
    """

    def __init__(self, text: str, ring: PolyRing):
        self.text = text
        self.pos = 0
        self.ring = ring

    def parse(self) -> Frac:
        value = self.expr()
        self.skip_ws()
        if self.pos != len(self.text):
            raise RatFuncError(f"trailing input at {self.pos}: {self.text[self.pos:]!r}")
        return value

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expr(self) -> Frac:
        sign = 1
        while self.peek() in ("+", "-"):
            if self.text[self.pos] == "-":
                sign = -sign
            self.pos += 1
        value = self.term() * sign
        while self.peek() in ("+", "-"):
            op = self.text[self.pos]
            self.pos += 1
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> Frac:
        value = self.factor()
        while self.peek() in ("*", "/"):
            op = self.text[self.pos]
            self.pos += 1
            rhs = self.factor()
            value = value * rhs if op == "*" else value / rhs
        return value

    def factor(self) -> Frac:
        base = self.atom()
        if self.peek() == "^":
            self.pos += 1
            self.skip_ws()
            neg = False
            if self.peek() == "-":
                neg = True
                self.pos += 1
            start = self.pos
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            if start == self.pos:
                raise RatFuncError(f"expected exponent at {start}")
            n = int(self.text[start:self.pos])
            base = base ** (-n if neg else n)
        return base

    def atom(self) -> Frac:
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            value = self.expr()
            if self.peek() != ")":
                raise RatFuncError("unbalanced parenthesis")
            self.pos += 1
            return value
        if ch == "-":
            self.pos += 1
            return -self.atom()
        if ch.isdigit():
            start = self.pos
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            return Frac.from_int(self.ring, int(self.text[start:self.pos]))
        if ch.isalpha() or ch == "_":
            start = self.pos
            while self.pos < len(self.text) and (self.text[self.pos].isalnum() or self.text[self.pos] == "_"):
                self.pos += 1
            name = self.text[start:self.pos]
            try:
                idx = self.ring.var_index(name)
            except ValueError:
                raise RatFuncError(f"unknown variable {name!r}") from None
            return Frac.gen(self.ring, idx)
        raise RatFuncError(f"unexpected character {ch!r} at {self.pos}")


def parse_rational(text: str, ring: PolyRing) -> Frac:
    return _Parser(text, ring).parse()


def xy_ring(n_x: int, n_y: int = 0) -> PolyRing:
    """The ambient ring Z[x1..x_{n_x}, y1..y_{n_y}]."""
    names = [f"x{i + 1}" for i in range(n_x)] + [f"y{j + 1}" for j in range(n_y)]
    return PolyRing(names)
