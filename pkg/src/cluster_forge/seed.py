"""Seeds: exact cluster variables with semifield coefficients.

A seed couples an ice matrix with a tuple of rational functions (the
cluster) and a tuple of coefficients living in a semifield.  Geometric
type uses the tropical semifield on the frozen variables; the universal
semifield realizes its elements inside the rational-function field with
oplus = ordinary addition.  Mutation follows the exchange relation
x'_k x_k (1 (+) y_k) = y_k prod x_i^[b_ik]+ + prod x_i^[-b_ik]+ together
with the Y-pattern rule, which reduces to the plain ice-quiver exchange
when the coefficients are the geometric ones.
"""

from __future__ import annotations

import hashlib
from collections import Counter, deque
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .quiver import ExchangeMatrix, IceMatrix, MutationRangeError, canonical_form
from .ratfunc import Frac, PolyRing, parse_rational, xy_ring


class SeedError(ValueError):
    pass


class NonLaurentError(SeedError):
    """A rational function expected to be Laurent has a non-monomial denominator."""


# -- semifields -------------------------------------------------------------------


class TropicalSemifield:
    """Trop(u_1, ..., u_p): elements are integer exponent vectors, oplus = min."""

    def __init__(self, names: Sequence[str]):
        self.names = tuple(names)
        self.p = len(self.names)

    kind = "tropical"

    def one(self) -> tuple:
        return (0,) * self.p

    def gen(self, i: int) -> tuple:
        return tuple(1 if j == i else 0 for j in range(self.p))

    def mul(self, a: tuple, b: tuple) -> tuple:
        return tuple(x + y for x, y in zip(a, b))

    def inv(self, a: tuple) -> tuple:
        return tuple(-x for x in a)

    def pow(self, a: tuple, k: int) -> tuple:
        return tuple(x * k for x in a)

    def oplus(self, a: tuple, b: tuple) -> tuple:
        return tuple(min(x, y) for x, y in zip(a, b))

    def eval_positive_poly(self, poly, values: Sequence[tuple]) -> tuple:
        """Evaluate an integer polynomial with positive coefficients tropically."""
        out = None
        for e, c in poly.terms.items():
            if c < 0:
                raise SeedError("polynomial is not subtraction-free")
            term = self.one()
            for i, k in enumerate(e):
                if k:
                    term = self.mul(term, self.pow(values[i], k))
            out = term if out is None else self.oplus(out, term)
        if out is None:
            raise SeedError("cannot evaluate the zero polynomial in a semifield")
        return out

    def to_field(self, a: tuple, ring: PolyRing, var_indices: Sequence[int]) -> Frac:
        exp = [0] * ring.nvars
        for i, k in enumerate(a):
            exp[var_indices[i]] = k
        return Frac.monomial(ring, exp)

    def elem_str(self, a: tuple) -> str:
        if not any(a):
            return "1"
        num = "*".join(f"{self.names[i]}^{k}" if k != 1 else self.names[i]
                       for i, k in enumerate(a) if k > 0)
        den = "*".join(f"{self.names[i]}^{-k}" if k != -1 else self.names[i]
                       for i, k in enumerate(a) if k < 0)
        if num and den:
            return f"{num}/({den})" if "*" in den else f"{num}/{den}"
        if num:
            return num
        return f"1/({den})" if "*" in den else f"1/{den}"

    def parse_elem(self, text: str):
        ring = PolyRing(self.names)
        f = parse_rational(text, ring)
        if not (f.num.is_monomial() and f.den.is_monomial()):
            raise SeedError(f"not a tropical monomial: {text!r}")
        (en, cn), = f.num.terms.items()
        (ed, cd), = f.den.terms.items()
        if cn != 1 or cd != 1:
            raise SeedError(f"tropical elements carry no coefficients: {text!r}")
        return tuple(a - b for a, b in zip(en, ed))

    def key(self, a: tuple) -> tuple:
        return a


class UniversalSemifield:
    """Q_sf(y_1, ..., y_p) realized inside the rational-function field."""

    def __init__(self, ring: PolyRing, var_indices: Sequence[int]):
        self.ring = ring
        self.var_indices = tuple(var_indices)
        self.p = len(self.var_indices)
        self.names = tuple(ring.names[i] for i in self.var_indices)

    kind = "universal"

    def one(self) -> Frac:
        return Frac.from_int(self.ring, 1)

    def gen(self, i: int) -> Frac:
        return Frac.gen(self.ring, self.var_indices[i])

    def mul(self, a: Frac, b: Frac) -> Frac:
        return a * b

    def inv(self, a: Frac) -> Frac:
        return a.inverse()

    def pow(self, a: Frac, k: int) -> Frac:
        return a ** k

    def oplus(self, a: Frac, b: Frac) -> Frac:
        return a + b

    def eval_positive_poly(self, poly, values: Sequence[Frac]) -> Frac:
        out = Frac.from_int(self.ring, 0)
        for e, c in poly.terms.items():
            term = Frac.from_int(self.ring, c)
            for i, k in enumerate(e):
                if k:
                    term = term * values[i] ** k
            out = out + term
        return out

    def to_field(self, a: Frac, ring: PolyRing, var_indices: Sequence[int]) -> Frac:
        if ring is not self.ring:
            raise SeedError("universal semifield is tied to its ambient ring")
        return a

    def elem_str(self, a: Frac) -> str:
        return str(a)

    def parse_elem(self, text: str) -> Frac:
        return parse_rational(text, self.ring)

    def key(self, a: Frac) -> tuple:
        return a.key()


# -- seeds ------------------------------------------------------------------------


@dataclass(frozen=True)
class Seed:
    ice: IceMatrix
    cluster: tuple            # n rational functions
    semifield: object
    coeffs: tuple             # n semifield elements
    ring: PolyRing            # ambient field Q(x_1..x_m [, y_1..y_n])

    @property
    def n(self) -> int:
        return self.ice.n

    @property
    def m(self) -> int:
        return self.ice.m

    @staticmethod
    def initial(ice: IceMatrix) -> "Seed":
        """Geometric-type initial seed; coefficients live in Trop(x_{n+1}..x_m)."""
        n, m = ice.n, ice.m
        ring = xy_ring(m)
        semifield = TropicalSemifield([f"x{i + 1}" for i in range(n, m)])
        coeffs = []
        for j in range(n):
            coeffs.append(tuple(ice.rows[i][j] for i in range(n, m)))
        cluster = tuple(Frac.gen(ring, i) for i in range(n))
        return Seed(ice, cluster, semifield, tuple(coeffs), ring)

    @staticmethod
    def initial_universal(b: ExchangeMatrix) -> "Seed":
        """Initial seed with universal coefficients y_1..y_n."""
        n = b.n
        ring = xy_ring(n, n)
        semifield = UniversalSemifield(ring, tuple(range(n, 2 * n)))
        cluster = tuple(Frac.gen(ring, i) for i in range(n))
        coeffs = tuple(semifield.gen(j) for j in range(n))
        return Seed(b, cluster, semifield, coeffs, ring)

    def frozen_indices(self) -> tuple:
        return tuple(range(self.n, self.m))

    def mutate(self, k: int) -> "Seed":
        """Seed mutation at the mutable vertex k (1-based)."""
        n = self.n
        if not 1 <= k <= n:
            raise MutationRangeError(f"vertex {k} is not mutable (1..{n})")
        sf = self.semifield
        ice = self.ice
        yk = self.coeffs[k - 1]
        one = sf.one()
        # Y-pattern
        new_coeffs = []
        for j in range(1, n + 1):
            if j == k:
                new_coeffs.append(sf.inv(yk))
                continue
            bkj = ice.entry(k, j)
            val = self.coeffs[j - 1]
            if bkj > 0:
                val = sf.mul(val, sf.pow(yk, bkj))
            val = sf.mul(val, sf.pow(sf.oplus(one, yk), -bkj))
            new_coeffs.append(val)
        # exchange relation
        frozen = self.frozen_indices()
        pos = sf.to_field(yk, self.ring, frozen)
        neg = Frac.from_int(self.ring, 1)
        for i in range(1, n + 1):
            bik = ice.entry(i, k)
            if bik > 0:
                pos = pos * self.cluster[i - 1] ** bik
            elif bik < 0:
                neg = neg * self.cluster[i - 1] ** (-bik)
        denom = sf.to_field(sf.oplus(one, yk), self.ring, frozen)
        new_xk = (pos + neg) / (self.cluster[k - 1] * denom)
        new_cluster = tuple(new_xk if i == k - 1 else x for i, x in enumerate(self.cluster))
        return Seed(ice.mutate(k), new_cluster, sf, tuple(new_coeffs), self.ring)

    def mutate_seq(self, seq: Iterable[int]) -> "Seed":
        out = self
        for k in seq:
            out = out.mutate(k)
        return out

    def cluster_strings(self) -> tuple:
        return tuple(str(x) for x in self.cluster)

    def coeff_strings(self) -> tuple:
        return tuple(self.semifield.elem_str(y) for y in self.coeffs)

    def same_labeled(self, other: "Seed") -> bool:
        """Equality on the nose, without relabeling."""
        return (self.ice.rows == other.ice.rows
                and self.cluster == other.cluster
                and tuple(map(self.semifield.key, self.coeffs))
                == tuple(map(other.semifield.key, other.coeffs)))

    def key(self) -> tuple:
        """Isomorphism-class key: simultaneous relabeling of vertices and positions."""
        cf = canonical_form(self.ice)
        best = None
        for perm in cf.perms:
            cl = [None] * self.n
            co = [None] * self.n
            for old in range(self.n):
                cl[perm[old]] = str(self.cluster[old])
                co[perm[old]] = self.semifield.elem_str(self.coeffs[old])
            cand = (tuple(cl), tuple(co))
            if best is None or cand < best:
                best = cand
        return (cf.digest, best)

    def digest(self) -> str:
        return hashlib.sha256(repr(self.key()).encode()).hexdigest()[:16]


def mutate_y_seed(b: ExchangeMatrix, semifield, coeffs: Sequence, k: int) -> tuple:
    """Mutate a Y-seed (B, (y_1..y_n)); returns (B', coeffs')."""
    n = b.n
    if not 1 <= k <= n:
        raise MutationRangeError(f"vertex {k} is not mutable (1..{n})")
    yk = coeffs[k - 1]
    one = semifield.one()
    out = []
    for j in range(1, n + 1):
        if j == k:
            out.append(semifield.inv(yk))
            continue
        bkj = b.entry(k, j)
        val = coeffs[j - 1]
        if bkj > 0:
            val = semifield.mul(val, semifield.pow(yk, bkj))
        val = semifield.mul(val, semifield.pow(semifield.oplus(one, yk), -bkj))
        out.append(val)
    return b.mutate(k), tuple(out)


def seed_at(initial: Seed, seq: Iterable[int]) -> Seed:
    return initial.mutate_seq(seq)


# -- exchange graphs ---------------------------------------------------------------


@dataclass
class ExchangeGraph:
    seeds: list                   # representative Seed per isomorphism class
    digests: list                 # digest per class, same order
    edges: list                   # (i, j, multiplicity), i <= j
    truncated: bool
    root: int = 0

    @property
    def num_vertices(self) -> int:
        return len(self.seeds)

    @property
    def num_edges(self) -> int:
        return sum(mult for _, _, mult in self.edges)

    def adjacency(self) -> dict:
        adj: dict = {i: [] for i in range(len(self.seeds))}
        for i, j, mult in self.edges:
            for _ in range(mult):
                adj[i].append(j)
                if i != j:
                    adj[j].append(i)
        return {i: sorted(v) for i, v in adj.items()}


def exchange_graph(initial: Seed, limit: int = 50000) -> ExchangeGraph:
    """Breadth-first closure of a seed under mutation modulo seed isomorphism."""
    if limit < 1:
        raise SeedError("limit must be >= 1")
    root_key = initial.key()
    index = {root_key: 0}
    seeds = [initial]
    digests = [initial.digest()]
    stubs: Counter = Counter()
    queue = deque([0])
    truncated = False
    while queue:
        i = queue.popleft()
        seed = seeds[i]
        for k in range(1, seed.n + 1):
            nb = seed.mutate(k)
            nb_key = nb.key()
            j = index.get(nb_key)
            if j is None:
                if len(seeds) >= limit:
                    truncated = True
                    continue
                j = len(seeds)
                index[nb_key] = j
                seeds.append(nb)
                digests.append(nb.digest())
                queue.append(j)
            stubs[(min(i, j), max(i, j))] += 1
    edges = []
    for (i, j), count in sorted(stubs.items()):
        mult = count if i == j else count // 2
        edges.append((i, j, mult))
    return ExchangeGraph(seeds, digests, edges, truncated)


# -- cluster variables ---------------------------------------------------------------


@dataclass
class ClusterVariableSet:
    variables: list               # distinct cluster variables, sorted by string form
    complete: bool                # exchange graph fully enumerated
    infinite: bool                # a rank-2 witness certifies infinitely many variables
    witness: Optional[tuple] = None
    seeds_seen: int = 0

    @property
    def count(self) -> int:
        return len(self.variables)


def cluster_variables(initial: Seed, limit: int = 50000) -> ClusterVariableSet:
    """All cluster variables reachable from the initial seed.

    Enumeration stops early when some reachable exchange matrix has
    |b_ij b_ji| >= 4: by the finite-type classification the cluster algebra
    then has infinitely many variables, which certifies `infinite` without
    materializing them.  Every collected variable is checked to be Laurent
    with monomial denominator in the mutable initial variables.
    """
    index = {initial.key(): 0}
    seeds = [initial]
    queue = deque([0])
    variables: dict = {}
    truncated = False
    witness = None

    def collect(seed: Seed):
        for x in seed.cluster:
            if not x.is_laurent(range(seed.n)):
                raise NonLaurentError(f"cluster variable {x} is not Laurent")
            variables.setdefault(x.key(), x)

    def rank2_witness(ice: IceMatrix) -> Optional[tuple]:
        rows = ice.principal_rows()
        for i in range(ice.n):
            for j in range(i + 1, ice.n):
                if abs(rows[i][j] * rows[j][i]) >= 4:
                    return (i + 1, j + 1, rows[i][j], rows[j][i])
        return None

    collect(initial)
    witness = rank2_witness(initial.ice)
    while queue and witness is None:
        i = queue.popleft()
        seed = seeds[i]
        for k in range(1, seed.n + 1):
            nb = seed.mutate(k)
            nb_key = nb.key()
            if nb_key in index:
                continue
            if len(seeds) >= limit:
                truncated = True
                continue
            index[nb_key] = len(seeds)
            seeds.append(nb)
            queue.append(len(seeds) - 1)
            collect(nb)
            witness = rank2_witness(nb.ice)
            if witness is not None:
                break
    ordered = sorted(variables.values(), key=str)
    return ClusterVariableSet(
        variables=ordered,
        complete=not truncated and witness is None,
        infinite=witness is not None,
        witness=witness,
        seeds_seen=len(seeds),
    )


def denominator_vector(v: Frac, n: int) -> tuple:
    """Exponents (d_1..d_n) with v = P / (x_1^d_1 ... x_n^d_n), P prime to each x_i."""
    if not v.den.is_monomial():
        raise NonLaurentError(f"{v} is not a Laurent polynomial")
    (de, _), = v.den.terms.items()
    if any(de[i] for i in range(n, len(de))):
        raise NonLaurentError(f"{v} has frozen variables in its denominator")
    num_min = v.num.monomial_part()
    return tuple(de[i] - num_min[i] for i in range(n))
