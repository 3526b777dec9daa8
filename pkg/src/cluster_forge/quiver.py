"""Exchange matrices, valued ice quivers, mutation and mutation classes.

Vertices are numbered 1..m; the mutable ones are 1..n.  An ice matrix is an
m x n integer matrix whose top n x n block (the principal part) is
skew-symmetrizable.  Mutation, canonical forms under relabeling of the
mutable vertices, breadth-first mutation-class enumeration and Dynkin
recognition of Cartan companions all live here.
"""

from __future__ import annotations

import hashlib
import itertools
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Optional, Sequence

from .linalg import mat, neg, transpose


class QuiverError(ValueError):
    pass


class MutationRangeError(QuiverError):
    """Mutation requested at a frozen or out-of-range vertex."""


def find_symmetrizer(b: Sequence[Sequence[int]]) -> Optional[tuple]:
    """Minimal positive integers d with diag(d) * b skew-symmetric, or None."""
    n = len(b)
    if any(len(row) != n for row in b):
        return None
    if any(b[i][i] != 0 for i in range(n)):
        return None
    for i in range(n):
        for j in range(n):
            if (b[i][j] == 0) != (b[j][i] == 0):
                return None
            if b[i][j] != 0 and (b[i][j] > 0) == (b[j][i] > 0):
                return None
    d: list = [None] * n
    for start in range(n):
        if d[start] is not None:
            continue
        comp = [start]
        d[start] = Fraction(1)
        queue = deque([start])
        while queue:
            i = queue.popleft()
            for j in range(n):
                if b[i][j] == 0:
                    continue
                # d_i * b_ij = -d_j * b_ji
                val = d[i] * Fraction(-b[i][j], b[j][i])
                if d[j] is None:
                    d[j] = val
                    comp.append(j)
                    queue.append(j)
                elif d[j] != val:
                    return None
        scale = lcm(*(d[i].denominator for i in comp))
        scaled = [int(d[i] * scale) for i in comp]
        shrink = 0
        for v in scaled:
            shrink = gcd(shrink, v)
        for i, v in zip(comp, scaled):
            d[i] = v // shrink
    return tuple(d)


@dataclass(frozen=True)
class IceMatrix:
    """An m x n exchange matrix with frozen rows n+1..m."""

    rows: tuple
    n: int
    symmetrizer: Optional[tuple] = None

    def __post_init__(self):
        rows = mat(self.rows)
        object.__setattr__(self, "rows", rows)
        if any(len(r) != self.n for r in rows):
            raise QuiverError("all rows must have length n")
        if len(rows) < self.n:
            raise QuiverError("fewer rows than mutable columns")
        for i in range(self.n):
            if rows[i][i] != 0:
                raise QuiverError("nonzero diagonal entry (loop)")
        d = self.symmetrizer
        if d is None:
            d = find_symmetrizer(self.principal_rows())
            if d is None:
                raise QuiverError("principal part is not skew-symmetrizable")
        else:
            d = tuple(int(x) for x in d)
            if len(d) != self.n or any(x <= 0 for x in d):
                raise QuiverError("symmetrizer must be n strictly positive integers")
            for i in range(self.n):
                for j in range(self.n):
                    if d[i] * rows[i][j] != -d[j] * rows[j][i]:
                        raise QuiverError("symmetrizer does not skew-symmetrize the principal part")
        object.__setattr__(self, "symmetrizer", tuple(d))

    @property
    def m(self) -> int:
        return len(self.rows)

    def principal_rows(self) -> tuple:
        return self.rows[: self.n]

    def principal(self) -> "ExchangeMatrix":
        return ExchangeMatrix(self.principal_rows(), symmetrizer=self.symmetrizer)

    def entry(self, i: int, j: int) -> int:
        """b_ij with 1-based vertex indices (i <= m, j <= n)."""
        return self.rows[i - 1][j - 1]

    def mutate(self, k: int) -> "IceMatrix":
        """Fomin-Zelevinsky mutation at the mutable vertex k (1-based)."""
        if not 1 <= k <= self.n:
            raise MutationRangeError(f"vertex {k} is not mutable (1..{self.n})")
        k -= 1
        b = self.rows
        new_rows = []
        for i in range(self.m):
            row = []
            bik = b[i][k]
            for j in range(self.n):
                if i == k or j == k:
                    row.append(-b[i][j])
                elif bik > 0:
                    row.append(b[i][j] + max(0, bik * b[k][j]))
                elif bik < 0:
                    row.append(b[i][j] - max(0, bik * b[k][j]))
                else:
                    row.append(b[i][j])
            new_rows.append(tuple(row))
        if isinstance(self, ExchangeMatrix):
            return ExchangeMatrix(tuple(new_rows), self.symmetrizer)
        return IceMatrix(tuple(new_rows), self.n, self.symmetrizer)

    def mutate_seq(self, seq: Iterable[int]) -> "IceMatrix":
        out = self
        for k in seq:
            out = out.mutate(k)
        return out

    def is_skew_symmetric(self) -> bool:
        b = self.principal_rows()
        return all(b[i][j] == -b[j][i] for i in range(self.n) for j in range(self.n))

    def key(self) -> tuple:
        return (self.rows, self.n)

    def __hash__(self):
        return hash(self.key())


class ExchangeMatrix(IceMatrix):
    """A square skew-symmetrizable matrix (no frozen vertices)."""

    def __init__(self, rows, symmetrizer=None):
        rows = mat(rows)
        super().__init__(rows, len(rows), symmetrizer)

    def opposite(self) -> "ExchangeMatrix":
        return ExchangeMatrix(neg(self.rows), self.symmetrizer)

    def langlands_dual(self) -> "ExchangeMatrix":
        return ExchangeMatrix(neg(transpose(self.rows)))


def opposite(mtx: IceMatrix) -> IceMatrix:
    if isinstance(mtx, ExchangeMatrix):
        return mtx.opposite()
    return IceMatrix(neg(mtx.rows), mtx.n, mtx.symmetrizer)


def langlands_dual(b: ExchangeMatrix) -> ExchangeMatrix:
    return b.langlands_dual()


def cartan_companion(b: IceMatrix) -> tuple:
    """The Cartan companion: 2 on the diagonal, -|b_ij| off it."""
    n = b.n
    rows = b.principal_rows()
    return tuple(tuple(2 if i == j else -abs(rows[i][j]) for j in range(n)) for i in range(n))


# -- quiver presentations -------------------------------------------------------


@dataclass(frozen=True)
class Arrow:
    source: int
    target: int
    valuation: tuple = (1, 1)


@dataclass(frozen=True)
class QuiverPresentation:
    """A valued quiver: at most one arrow per vertex pair, no loops or 2-cycles."""

    num_vertices: int
    arrows: tuple

    def __post_init__(self):
        seen = set()
        for a in self.arrows:
            if a.source == a.target:
                raise QuiverError(f"loop at vertex {a.source}")
            if not (1 <= a.source <= self.num_vertices and 1 <= a.target <= self.num_vertices):
                raise QuiverError("arrow endpoint out of range")
            pair = frozenset((a.source, a.target))
            if pair in seen:
                raise QuiverError(f"parallel arrows or 2-cycle between {a.source} and {a.target}")
            seen.add(pair)
            if a.valuation[0] <= 0 or a.valuation[1] <= 0:
                raise QuiverError("valuations must be strictly positive")


def quiver_to_matrix(q: QuiverPresentation) -> ExchangeMatrix:
    n = q.num_vertices
    rows = [[0] * n for _ in range(n)]
    for a in q.arrows:
        i, j = a.source - 1, a.target - 1
        v1, v2 = a.valuation
        rows[i][j] = v1
        rows[j][i] = -v2
    d = find_symmetrizer(rows)
    if d is None:
        raise QuiverError("valuation is not compatible with any symmetrizer")
    return ExchangeMatrix(rows, symmetrizer=d)


def matrix_to_quiver(b: IceMatrix) -> QuiverPresentation:
    """Valued-quiver presentation; frozen arrows are equally valued."""
    arrows = []
    for i in range(b.n):
        for j in range(i + 1, b.n):
            bij = b.rows[i][j]
            if bij > 0:
                arrows.append(Arrow(i + 1, j + 1, (bij, -b.rows[j][i])))
            elif bij < 0:
                arrows.append(Arrow(j + 1, i + 1, (b.rows[j][i], -bij)))
    for i in range(b.n, b.m):
        for j in range(b.n):
            bij = b.rows[i][j]
            if bij > 0:
                arrows.append(Arrow(i + 1, j + 1, (bij, bij)))
            elif bij < 0:
                arrows.append(Arrow(j + 1, i + 1, (-bij, -bij)))
    return QuiverPresentation(b.m, tuple(arrows))


# -- canonical forms -------------------------------------------------------------


@dataclass(frozen=True)
class CanonicalForm:
    """Lexicographically minimal relabeling of an ice matrix.

    Only mutable vertices are permuted; frozen rows keep their positions and
    have their columns relabeled along.  `perms` holds the permutations
    (old index -> new index, 0-based) that realize the minimum among the
    leaves of the refinement search; they are what seed isomorphism needs to
    transport cluster data.
    """

    rows: tuple
    n: int
    digest: str
    perms: tuple = field(compare=False, repr=False)

    def __hash__(self):
        return hash((self.rows, self.n))


def _apply_perm(rows: tuple, n: int, perm: Sequence[int]) -> tuple:
    m = len(rows)
    out = [[0] * n for _ in range(m)]
    for i in range(m):
        ti = perm[i] if i < n else i
        row = rows[i]
        orow = out[ti]
        for j in range(n):
            orow[perm[j]] = row[j]
    return tuple(tuple(r) for r in out)


def _refine_colors(rows: tuple, n: int, m: int, colors: list) -> list:
    """Refine vertex colors by valued neighborhoods until stable.

    Signatures are built from matrix entries and current colors only, never
    from vertex numbering, so the refinement is relabeling-invariant.
    Frozen rows keep their identity (they are never permuted).
    """
    while True:
        sigs = []
        for v in range(n):
            nbr = tuple(sorted((rows[v][j], rows[j][v], colors[j]) for j in range(n) if j != v))
            frozen = tuple(rows[f][v] for f in range(n, m))
            sigs.append((colors[v], nbr, frozen))
        order = sorted(set(sigs))
        new_colors = [order.index(s) for s in sigs]
        if new_colors == colors:
            return colors
        colors = new_colors


def canonical_form(mtx: IceMatrix) -> CanonicalForm:
    """Canonical representative by individualization-refinement search."""
    rows, n, m = mtx.rows, mtx.n, mtx.m
    best_rows: list = [None]
    best_flat: list = [None]
    best_perms: list = []

    def emit(colors: list):
        perm = colors  # discrete coloring: color == position
        cand = _apply_perm(rows, n, perm)
        flat = tuple(x for row in cand for x in row)
        if best_flat[0] is None or flat < best_flat[0]:
            best_flat[0] = flat
            best_rows[0] = cand
            best_perms.clear()
            best_perms.append(tuple(perm))
        elif flat == best_flat[0]:
            best_perms.append(tuple(perm))

    def search(colors: list):
        colors = _refine_colors(rows, n, m, colors)
        cells: dict = {}
        for v in range(n):
            cells.setdefault(colors[v], []).append(v)
        target = next((c for c in sorted(cells) if len(cells[c]) > 1), None)
        if target is None:
            emit(colors)
            return
        for v in cells[target]:
            branched = [c + (1 if c > target or (c == target and w != v) else 0)
                        for w, c in enumerate(colors)]
            search(branched)

    search([0] * n)
    canon = best_rows[0]
    digest = hashlib.sha256(repr((canon, n)).encode()).hexdigest()[:16]
    return CanonicalForm(canon, n, digest, tuple(best_perms))


# -- mutation classes -------------------------------------------------------------


@dataclass
class MutationClass:
    representatives: dict          # digest -> CanonicalForm
    adjacency: dict                # digest -> sorted tuple of neighboring digests
    truncated: bool
    initial: str                   # digest of the initial form

    @property
    def size(self) -> int:
        return len(self.representatives)


def mutation_class(mtx: IceMatrix, limit: int = 100000) -> MutationClass:
    """Breadth-first closure of a quiver under mutation, up to isomorphism."""
    if limit < 1:
        raise QuiverError("limit must be >= 1")
    start = canonical_form(mtx)
    reps = {start.digest: start}
    mats = {start.digest: IceMatrix(start.rows, mtx.n)}
    adjacency: dict = {start.digest: set()}
    queue = deque([start.digest])
    truncated = False
    while queue:
        dig = queue.popleft()
        cur = mats[dig]
        for k in range(1, mtx.n + 1):
            nb = canonical_form(cur.mutate(k))
            if nb.digest not in reps:
                if len(reps) >= limit:
                    truncated = True
                    continue
                reps[nb.digest] = nb
                mats[nb.digest] = IceMatrix(nb.rows, mtx.n)
                adjacency[nb.digest] = set()
                queue.append(nb.digest)
            if nb.digest != dig:
                adjacency[dig].add(nb.digest)
                adjacency[nb.digest].add(dig)
    return MutationClass(
        representatives=reps,
        adjacency={d: tuple(sorted(s)) for d, s in adjacency.items()},
        truncated=truncated,
        initial=start.digest,
    )


# -- Dynkin recognition -----------------------------------------------------------


def dynkin_label(b: ExchangeMatrix) -> Optional[str]:
    """Dynkin label of the Cartan companion if it is of finite type."""
    c = cartan_companion(b)
    labels = []
    for comp in _components(c, b.n):
        label = _classify_component(c, comp)
        if label is None:
            return None
        labels.append(label)
    labels.sort()
    return " x ".join(labels)


def _components(c: tuple, n: int) -> list:
    seen = [False] * n
    comps = []
    for s in range(n):
        if seen[s]:
            continue
        comp = []
        queue = deque([s])
        seen[s] = True
        while queue:
            v = queue.popleft()
            comp.append(v)
            for w in range(n):
                if w != v and not seen[w] and c[v][w] != 0:
                    seen[w] = True
                    queue.append(w)
        comps.append(sorted(comp))
    return comps


def _classify_component(c: tuple, comp: list) -> Optional[str]:
    r = len(comp)
    if r == 1:
        return "A1"
    edges = []
    for a, b_ in itertools.combinations(comp, 2):
        if c[a][b_] != 0:
            edges.append((a, b_, c[a][b_] * c[b_][a]))
    if len(edges) != r - 1:
        return None  # finite Dynkin diagrams are trees
    deg = {v: 0 for v in comp}
    for a, b_, _ in edges:
        deg[a] += 1
        deg[b_] += 1
    if any(w > 3 for _, _, w in edges):
        return None
    heavy = [e for e in edges if e[2] > 1]
    if not heavy:
        return _classify_simply_laced(comp, edges, deg)
    if len(heavy) > 1 or max(deg.values()) > 2:
        return None  # valued finite diagrams are paths with one heavy edge
    a, b_, w = heavy[0]
    if w == 3:
        return "G2" if r == 2 else None
    if r == 2:
        return "B2"
    if deg[a] == 1 or deg[b_] == 1:
        term = a if deg[a] == 1 else b_
        other = b_ if term == a else a
        # |c_term,other| = 2 exactly when the terminal root is short
        return f"B{r}" if abs(c[term][other]) == 2 else f"C{r}"
    if r == 4:
        return "F4"
    return None


def _classify_simply_laced(comp: list, edges: list, deg: dict) -> Optional[str]:
    r = len(comp)
    branch = [v for v in comp if deg[v] >= 3]
    if not branch:
        return f"A{r}"
    if len(branch) > 1 or deg[branch[0]] > 3:
        return None
    adj: dict = {v: [] for v in comp}
    for a, b_, _ in edges:
        adj[a].append(b_)
        adj[b_].append(a)
    center = branch[0]
    arms = []
    for start in adj[center]:
        length = 1
        prev, cur = center, start
        while deg[cur] == 2:
            nxt = next(w for w in adj[cur] if w != prev)
            prev, cur = cur, nxt
            length += 1
        arms.append(length)
    arms.sort()
    if arms[0] == 1 and arms[1] == 1:
        return f"D{r}"
    if arms == [1, 2, 2]:
        return "E6"
    if arms == [1, 2, 3]:
        return "E7"
    if arms == [1, 2, 4]:
        return "E8"
    return None


@dataclass
class ClusterTypeResult:
    label: Optional[str]
    class_size: int
    exhausted: bool      # True when the whole mutation class was enumerated

    @property
    def verdict(self) -> str:
        if self.label is not None:
            return self.label
        return "infinite" if self.exhausted else "inconclusive"


def cluster_type(b: ExchangeMatrix, limit: int = 100000) -> ClusterTypeResult:
    """Search the mutation class for a member with finite-type Cartan companion."""
    label = dynkin_label(b)
    if label is not None:
        return ClusterTypeResult(label, 1, False)
    start = canonical_form(b)
    seen = {start.digest}
    queue = deque([ExchangeMatrix(start.rows)])
    truncated = False
    while queue:
        cur = queue.popleft()
        for k in range(1, b.n + 1):
            nxt = cur.mutate(k)
            nb = canonical_form(nxt)
            if nb.digest in seen:
                continue
            if len(seen) >= limit:
                truncated = True
                continue
            label = dynkin_label(nxt)
            if label is not None:
                return ClusterTypeResult(label, len(seen) + 1, False)
            seen.add(nb.digest)
            queue.append(ExchangeMatrix(nb.rows))
    return ClusterTypeResult(None, len(seen), not truncated)


# -- named examples ----------------------------------------------------------------


def linear_quiver(n: int) -> ExchangeMatrix:
    """The A_n quiver 1 -> 2 -> ... -> n."""
    rows = [[0] * n for _ in range(n)]
    for i in range(n - 1):
        rows[i][i + 1] = 1
        rows[i + 1][i] = -1
    return ExchangeMatrix(rows)


def cyclic_quiver() -> ExchangeMatrix:
    """The oriented 3-cycle 1 -> 3 -> 2 -> 1."""
    return ExchangeMatrix([[0, -1, 1], [1, 0, -1], [-1, 1, 0]])


def rank2_quiver(b: int, c: int) -> ExchangeMatrix:
    """The valued quiver 1 -> 2 with matrix [[0, b], [-c, 0]]."""
    return ExchangeMatrix([[0, b], [-c, 0]])


def b3_quiver() -> ExchangeMatrix:
    """1 -> 2 -> 3 with the second arrow valued (1, 2)."""
    return ExchangeMatrix([[0, 1, 0], [-1, 0, 1], [0, -2, 0]])


def c3_quiver() -> ExchangeMatrix:
    """1 -> 2 -> 3 with the second arrow valued (2, 1)."""
    return ExchangeMatrix([[0, 1, 0], [-1, 0, 2], [0, -1, 0]])


def markov_quiver() -> ExchangeMatrix:
    """Double arrows 1 => 2 => 3 => 1; invariant under mutation up to isomorphism."""
    return ExchangeMatrix([[0, 2, -2], [-2, 0, 2], [2, -2, 0]])
