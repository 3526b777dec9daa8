"""Quivers with potential: cyclic derivatives, premutation, reduction, mutation.

Paths are words of arrow names in morphism order: the word (a, b, c) means
a o b o c with c applied first, so consecutive letters must satisfy
source(w[i]) == target(w[i+1]).  A cycle is a closed word stored as its
lexicographically minimal rotation.  Coefficients are exact rationals and
every operation truncates paths beyond the ambient degree bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Optional, Sequence, Tuple


class QPError(ValueError):
    pass


class UnknownArrowError(QPError):
    pass


class LoopPresentError(QPError):
    pass


class VertexOnTwoCycleError(QPError):
    pass


# mutation at a vertex on a 2-cycle is the same obstruction, surfaced later
TwoCycleAtVertexError = VertexOnTwoCycleError


class DegenerateQuadraticPartError(QPError):
    pass


@dataclass(frozen=True)
class QPQuiver:
    """Vertices 1..m with named arrows; loops forbidden, 2-cycles allowed."""

    num_vertices: int
    arrows: tuple      # tuple of (name, source, target)

    def __post_init__(self):
        seen = set()
        for name, s, t in self.arrows:
            if name in seen:
                raise QPError(f"duplicate arrow name {name!r}")
            seen.add(name)
            if s == t:
                raise LoopPresentError(f"loop {name!r} at vertex {s}")
            if not (1 <= s <= self.num_vertices and 1 <= t <= self.num_vertices):
                raise QPError(f"arrow {name!r} endpoint out of range")

    def arrow_map(self) -> dict:
        return {name: (s, t) for name, s, t in self.arrows}

    def source(self, name: str) -> int:
        return self.arrow_map()[name][0]

    def target(self, name: str) -> int:
        return self.arrow_map()[name][1]

    def has_two_cycle_at(self, k: int) -> bool:
        am = self.arrow_map()
        for _, (s, t) in am.items():
            if s == k:
                for _, (s2, t2) in am.items():
                    if s2 == t and t2 == k:
                        return True
        return False


def _word_endpoints(word: tuple, arrow_map: dict) -> tuple:
    """(source, target) of a composable word; raises on bad composition."""
    for name in word:
        if name not in arrow_map:
            raise UnknownArrowError(f"unknown arrow {name!r}")
    for i in range(len(word) - 1):
        if arrow_map[word[i]][0] != arrow_map[word[i + 1]][1]:
            raise QPError(f"word {word} is not composable at position {i}")
    return arrow_map[word[-1]][0], arrow_map[word[0]][1]


def _is_cycle(word: tuple, arrow_map: dict) -> bool:
    s, t = _word_endpoints(word, arrow_map)
    return s == t


def canonical_rotation(word: tuple) -> tuple:
    return min(word[i:] + word[:i] for i in range(len(word)))


class PathElement:
    """A finite rational combination of paths, truncated in length."""

    __slots__ = ("quiver", "truncation", "lazy", "words")

    def __init__(self, quiver: QPQuiver, truncation: int,
                 lazy: Optional[dict] = None, words: Optional[dict] = None):
        self.quiver = quiver
        self.truncation = truncation
        self.lazy = {v: Fraction(c) for v, c in (lazy or {}).items() if c}
        self.words = {w: Fraction(c) for w, c in (words or {}).items()
                      if c and len(w) <= truncation}

    @staticmethod
    def zero(quiver: QPQuiver, truncation: int) -> "PathElement":
        return PathElement(quiver, truncation)

    @staticmethod
    def lazy_path(quiver: QPQuiver, truncation: int, vertex: int) -> "PathElement":
        return PathElement(quiver, truncation, lazy={vertex: 1})

    @staticmethod
    def arrow(quiver: QPQuiver, truncation: int, name: str) -> "PathElement":
        if name not in quiver.arrow_map():
            raise UnknownArrowError(f"unknown arrow {name!r}")
        return PathElement(quiver, truncation, words={(name,): 1})

    def is_zero(self) -> bool:
        return not self.lazy and not self.words

    def __add__(self, other: "PathElement") -> "PathElement":
        lazy = dict(self.lazy)
        for v, c in other.lazy.items():
            lazy[v] = lazy.get(v, Fraction(0)) + c
        words = dict(self.words)
        for w, c in other.words.items():
            words[w] = words.get(w, Fraction(0)) + c
        return PathElement(self.quiver, self.truncation, lazy, words)

    def __neg__(self):
        return PathElement(self.quiver, self.truncation,
                           {v: -c for v, c in self.lazy.items()},
                           {w: -c for w, c in self.words.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "PathElement":
        c = Fraction(c)
        return PathElement(self.quiver, self.truncation,
                           {v: x * c for v, x in self.lazy.items()},
                           {w: x * c for w, x in self.words.items()})

    def __mul__(self, other: "PathElement") -> "PathElement":
        """Concatenation in morphism order: (self * other) applies other first."""
        am = self.quiver.arrow_map()
        out = PathElement.zero(self.quiver, self.truncation)
        lazy: dict = {}
        words: dict = {}
        for v, c in self.lazy.items():
            for v2, c2 in other.lazy.items():
                if v == v2:
                    lazy[v] = lazy.get(v, Fraction(0)) + c * c2
            for w, c2 in other.words.items():
                if am[w[0]][1] == v:
                    words[w] = words.get(w, Fraction(0)) + c * c2
        for w, c in self.words.items():
            src = am[w[-1]][0]
            for v2, c2 in other.lazy.items():
                if v2 == src:
                    words[w] = words.get(w, Fraction(0)) + c * c2
            for w2, c2 in other.words.items():
                if am[w2[0]][1] == src and len(w) + len(w2) <= self.truncation:
                    key = w + w2
                    words[key] = words.get(key, Fraction(0)) + c * c2
        return PathElement(self.quiver, self.truncation, lazy, words)

    def restrict(self, max_len: int) -> "PathElement":
        return PathElement(self.quiver, max_len, self.lazy, self.words)

    def min_word_length(self) -> Optional[int]:
        if self.lazy:
            return 0
        if not self.words:
            return None
        return min(len(w) for w in self.words)

    def __eq__(self, other):
        return (isinstance(other, PathElement) and self.lazy == other.lazy
                and self.words == other.words)

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = [f"{c}*e{v}" if c != 1 else f"e{v}" for v, c in sorted(self.lazy.items())]
        for w, c in sorted(self.words.items(), key=lambda t: (len(t[0]), t[0])):
            body = "".join(w) if all(len(x) == 1 for x in w) else "*".join(w)
            parts.append(body if c == 1 else f"{c}*{body}")
        return " + ".join(parts)

    __repr__ = __str__


class Potential:
    """A rational combination of cycles of length >= 2, rotation-canonical keys."""

    __slots__ = ("quiver", "truncation", "cycles")

    def __init__(self, quiver: QPQuiver, truncation: int, cycles: Optional[dict] = None):
        self.quiver = quiver
        self.truncation = truncation
        out: dict = {}
        am = quiver.arrow_map()
        for word, coeff in (cycles or {}).items():
            coeff = Fraction(coeff)
            if not coeff:
                continue
            word = tuple(word)
            if len(word) < 2:
                raise QPError("potential cycles must have length >= 2")
            if len(word) > truncation:
                continue
            if not _is_cycle(word, am):
                raise QPError(f"{word} is not a cycle")
            key = canonical_rotation(word)
            out[key] = out.get(key, Fraction(0)) + coeff
        self.cycles = {w: c for w, c in out.items() if c}

    def is_zero(self) -> bool:
        return not self.cycles

    def is_reduced(self) -> bool:
        return all(len(w) > 2 for w in self.cycles)

    def __add__(self, other: "Potential") -> "Potential":
        cycles = dict(self.cycles)
        for w, c in other.cycles.items():
            cycles[w] = cycles.get(w, Fraction(0)) + c
        return Potential(self.quiver, self.truncation, cycles)

    def scale(self, c) -> "Potential":
        c = Fraction(c)
        return Potential(self.quiver, self.truncation,
                         {w: x * c for w, x in self.cycles.items()})

    def __eq__(self, other):
        return isinstance(other, Potential) and self.cycles == other.cycles

    def __str__(self):
        if not self.cycles:
            return "0"
        parts = []
        for w, c in sorted(self.cycles.items(), key=lambda t: (len(t[0]), t[0])):
            body = "".join(w) if all(len(x) == 1 for x in w) else "*".join(w)
            parts.append(body if c == 1 else f"{c}*{body}")
        return " + ".join(parts)

    __repr__ = __str__


@dataclass(frozen=True)
class QuiverWithPotential:
    quiver: QPQuiver
    potential: Potential
    truncation: int = 12

    def __post_init__(self):
        if self.potential.quiver is not self.quiver:
            # rebuild against this quiver so arrow checks run
            object.__setattr__(self, "potential",
                               Potential(self.quiver, self.truncation, self.potential.cycles))

    @staticmethod
    def build(num_vertices: int, arrows: Iterable[tuple], cycles: dict,
              truncation: int = 12) -> "QuiverWithPotential":
        quiver = QPQuiver(num_vertices, tuple(arrows))
        return QuiverWithPotential(quiver, Potential(quiver, truncation, cycles), truncation)


def cyclic_derivative(potential: Potential, arrow: str) -> PathElement:
    """d_a of the potential: sum of v u over decompositions p = u a v."""
    quiver = potential.quiver
    if arrow not in quiver.arrow_map():
        raise UnknownArrowError(f"unknown arrow {arrow!r}")
    out = PathElement.zero(quiver, potential.truncation)
    words: dict = {}
    lazy: dict = {}
    am = quiver.arrow_map()
    for cycle, coeff in potential.cycles.items():
        for p, name in enumerate(cycle):
            if name != arrow:
                continue
            rest = cycle[p + 1:] + cycle[:p]
            if rest:
                words[rest] = words.get(rest, Fraction(0)) + coeff
            else:
                v = am[arrow][0]
                lazy[v] = lazy.get(v, Fraction(0)) + coeff
    return PathElement(quiver, potential.truncation, lazy, words)


# -- premutation -----------------------------------------------------------------------


def premutation(qp: QuiverWithPotential, k: int) -> QuiverWithPotential:
    """Step (a)+(b) of quiver-with-potential mutation, before reduction."""
    quiver = qp.quiver
    if not 1 <= k <= quiver.num_vertices:
        raise QPError(f"vertex {k} out of range")
    if quiver.has_two_cycle_at(k):
        raise VertexOnTwoCycleError(f"vertex {k} lies on a 2-cycle")
    am = quiver.arrow_map()
    incoming = [name for name, (s, t) in am.items() if t == k]
    outgoing = [name for name, (s, t) in am.items() if s == k]
    new_arrows = []
    rename = {}
    for name, (s, t) in am.items():
        if s == k or t == k:
            rename[name] = f"{name}*"
            new_arrows.append((f"{name}*", t, s))
        else:
            new_arrows.append((name, s, t))
    composite = {}
    for alpha in sorted(outgoing):
        for beta in sorted(incoming):
            cname = f"[{alpha}{beta}]"
            composite[(alpha, beta)] = cname
            new_arrows.append((cname, am[beta][0], am[alpha][1]))
    new_quiver = QPQuiver(quiver.num_vertices, tuple(new_arrows))

    # [W]: rotate each cycle to a base vertex != k, then collapse passages
    # through k into composite arrows
    new_cycles: dict = {}
    for cycle, coeff in qp.potential.cycles.items():
        rep = None
        for i in range(len(cycle)):
            rot = cycle[i:] + cycle[:i]
            base = am[rot[-1]][0]  # source of the first applied arrow
            if base != k:
                rep = rot
                break
        if rep is None:
            raise QPError(f"cycle {cycle} passes through {k} at every position")
        word = []
        i = 0
        while i < len(rep):
            name = rep[i]
            if am[name][0] == k:
                nxt = rep[i + 1]  # exists: base != k so the pair is interior
                word.append(composite[(name, nxt)])
                i += 2
            else:
                word.append(rename.get(name, name))
                i += 1
        key = tuple(word)
        new_cycles[key] = new_cycles.get(key, Fraction(0)) + coeff

    delta: dict = {}
    for alpha in outgoing:
        for beta in incoming:
            word = (composite[(alpha, beta)], f"{beta}*", f"{alpha}*")
            delta[word] = delta.get(word, Fraction(0)) + 1

    merged: dict = {}
    for w, c in list(new_cycles.items()) + list(delta.items()):
        key = canonical_rotation(w)
        merged[key] = merged.get(key, Fraction(0)) + c
    return QuiverWithPotential(new_quiver,
                               Potential(new_quiver, qp.truncation, merged),
                               qp.truncation)


# -- reduction ------------------------------------------------------------------------


def _substitute(potential: Potential, arrow: str, replacement: PathElement) -> Potential:
    """Apply the algebra endomorphism sending `arrow` to `replacement`."""
    quiver = potential.quiver
    trunc = potential.truncation
    out: dict = {}
    for cycle, coeff in potential.cycles.items():
        if arrow not in cycle:
            out[cycle] = out.get(cycle, Fraction(0)) + coeff
            continue
        elem = PathElement.lazy_path(quiver, trunc, quiver.arrow_map()[cycle[0]][1])
        for name in cycle:
            factor = replacement if name == arrow else PathElement.arrow(quiver, trunc, name)
            elem = elem * factor
        for w, c in elem.words.items():
            if len(w) < 2:
                raise DegenerateQuadraticPartError(
                    f"substitution created a cycle of length {len(w)}")
            key = canonical_rotation(w)
            out[key] = out.get(key, Fraction(0)) + coeff * c
        if elem.lazy:
            raise DegenerateQuadraticPartError("substitution created a lazy cycle")
    return Potential(quiver, trunc, out)


def _offending_complements(work: Potential, pivot: tuple, arrow: str) -> PathElement:
    """Sum of coeff * complement over cycles != pivot through `arrow`.

    Each offending cycle is rotated once to isolate a single occurrence of
    the arrow; the remaining word is the path that, multiplied back through
    the quadratic pivot term, cancels the cycle exactly once.
    """
    quiver = work.quiver
    out = PathElement.zero(quiver, work.truncation)
    for cycle, coeff in work.cycles.items():
        if cycle == pivot or arrow not in cycle:
            continue
        p = cycle.index(arrow)
        complement = cycle[p + 1:] + cycle[:p]
        out = out + PathElement(quiver, work.truncation, words={complement: coeff})
    return out


def reduce_qp(qp: QuiverWithPotential) -> tuple:
    """Split into (trivial, reduced) parts per the splitting theorem.

    Arrows paired by an invertible quadratic block are eliminated by an
    iterative change of variables (the offending cycles of least degree are
    cancelled through the quadratic term, pushing the obstruction one degree
    higher each pass); the reduced part keeps the remaining arrows and a
    potential free of cycles of length <= 2.
    """
    quiver = qp.quiver
    trunc = qp.truncation
    work = qp.potential
    trivial_pairs = []
    guard = 20 * (trunc + 2) * (len(quiver.arrows) + 2)
    while True:
        quad = sorted(w for w in work.cycles if len(w) == 2)
        if not quad:
            break
        pivot = quad[0]
        a, b = pivot
        # clean the pair: after convergence a and b appear only in c0 * a b
        while True:
            guard -= 1
            if guard < 0:
                raise DegenerateQuadraticPartError("reduction did not converge")
            c0 = work.cycles.get(pivot)
            if not c0:
                raise DegenerateQuadraticPartError("quadratic pivot vanished mid-elimination")
            s_a = _offending_complements(work, pivot, a)
            if not s_a.is_zero():
                replacement = PathElement.arrow(quiver, trunc, b) - s_a.scale(Fraction(1, c0))
                work = _substitute(work, b, replacement)
                continue
            s_b = _offending_complements(work, pivot, b)
            if not s_b.is_zero():
                replacement = PathElement.arrow(quiver, trunc, a) - s_b.scale(Fraction(1, c0))
                work = _substitute(work, a, replacement)
                continue
            break
        trivial_pairs.append((pivot, work.cycles[pivot]))
        remaining = {w: c for w, c in work.cycles.items() if w != pivot}
        for w in remaining:
            if a in w or b in w:
                raise DegenerateQuadraticPartError(
                    f"arrows {a!r}, {b!r} survive outside their quadratic term")
        keep = tuple(ar for ar in quiver.arrows if ar[0] not in (a, b))
        quiver = QPQuiver(quiver.num_vertices, keep)
        work = Potential(quiver, trunc, remaining)

    if any(len(w) <= 2 for w in work.cycles):
        raise DegenerateQuadraticPartError("quadratic terms survived reduction")

    triv_arrow_names = [name for pair, _ in trivial_pairs for name in pair]
    am = qp.quiver.arrow_map()
    triv_quiver = QPQuiver(qp.quiver.num_vertices,
                           tuple((n,) + am[n] for n in triv_arrow_names))
    triv_potential = Potential(triv_quiver, trunc,
                               {pair: c for pair, c in trivial_pairs})
    trivial = QuiverWithPotential(triv_quiver, triv_potential, trunc)
    reduced = QuiverWithPotential(quiver, work, trunc)
    return trivial, reduced


def mutate_qp(qp: QuiverWithPotential, k: int) -> QuiverWithPotential:
    """DWZ mutation: the reduced part of the premutation."""
    return reduce_qp(premutation(qp, k))[1]


# -- Jacobian dimensions ----------------------------------------------------------------


def _all_paths(quiver: QPQuiver, max_len: int) -> list:
    """Every composable word up to max_len, plus the lazy paths (as ints)."""
    am = quiver.arrow_map()
    by_target: dict = {}
    for name, (s, t) in am.items():
        by_target.setdefault(s, []).append(name)
    paths = [(v,) for v in range(1, quiver.num_vertices + 1)]
    frontier = [(name,) for name in sorted(am)]
    while frontier:
        paths.extend(frontier)
        new_frontier = []
        for w in frontier:
            if len(w) >= max_len:
                continue
            tgt = am[w[0]][1]
            for name in sorted(by_target.get(tgt, [])):
                new_frontier.append((name,) + w)
        frontier = new_frontier
    return paths


@dataclass
class JacobianDimension:
    dimension: int
    saturated: bool      # stable when the cutoff is raised by one

    def __str__(self):
        return str(self.dimension) if self.saturated else f">= {self.dimension}"


def jacobian_dimension(qp: QuiverWithPotential, cutoff: int) -> JacobianDimension:
    """Dimension of paths of length < cutoff modulo the Jacobian ideal.

    Computed by exact linear algebra on the span of u (dW/da) v; saturation
    compares the dimensions at cutoffs `cutoff` and `cutoff + 1`.
    """
    if cutoff < 1:
        raise QPError("cutoff must be >= 1")
    d1 = _dimension_at(qp, cutoff - 1)
    d2 = _dimension_at(qp, cutoff)
    return JacobianDimension(d1, d1 == d2)


def _dimension_at(qp: QuiverWithPotential, max_len: int) -> int:
    quiver = qp.quiver
    am = quiver.arrow_map()
    paths = _all_paths(quiver, max_len)
    index = {p: i for i, p in enumerate(paths)}
    derivs = []
    for name in sorted(am):
        d = cyclic_derivative(qp.potential, name)
        if not d.is_zero():
            derivs.append(d.restrict(max_len))
    rows = []
    lazy_elems = [PathElement.lazy_path(quiver, max_len, v)
                  for v in range(1, quiver.num_vertices + 1)]
    word_elems = {p: PathElement(quiver, max_len, words={p: 1})
                  for p in paths if isinstance(p[0], str)}
    units = lazy_elems + list(word_elems.values())
    for d in derivs:
        dmin = d.min_word_length() or 0
        for u in units:
            ulen = 0 if u.lazy else len(next(iter(u.words)))
            if ulen + dmin > max_len:
                continue
            ud = u * d
            for v in units:
                vlen = 0 if v.lazy else len(next(iter(v.words)))
                if ulen + dmin + vlen > max_len:
                    continue
                elem = ud * v
                if elem.is_zero():
                    continue
                row = {}
                for w, c in elem.words.items():
                    row[index[w]] = c
                for vx, c in elem.lazy.items():
                    row[index[(vx,)]] = c
                if row:
                    rows.append(row)
    rank = _rank(rows)
    return len(paths) - rank


def _rank(rows: list) -> int:
    pivots: dict = {}
    rank = 0
    for row in rows:
        row = dict(row)
        while row:
            col = min(row)
            if col in pivots:
                pivot = pivots[col]
                factor = row[col] / pivot[col]
                for c2, v2 in pivot.items():
                    nv = row.get(c2, Fraction(0)) - factor * v2
                    if nv:
                        row[c2] = nv
                    else:
                        row.pop(c2, None)
            else:
                pivots[col] = row
                rank += 1
                break
    return rank


# -- ready-made examples -------------------------------------------------------------------


def three_cycle_qp(squared: bool = False, truncation: int = 12) -> QuiverWithPotential:
    """The 3-cycle b: 1->2, a: 2->3, c: 3->1 with potential abc (or (abc)^2)."""
    arrows = [("a", 2, 3), ("b", 1, 2), ("c", 3, 1)]
    word = ("a", "b", "c") * (2 if squared else 1)
    return QuiverWithPotential.build(3, arrows, {word: 1}, truncation)
