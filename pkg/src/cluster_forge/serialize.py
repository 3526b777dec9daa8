"""JSON and DOT wire formats.

Quiver JSON: {"m": int, "n": int, "matrix": [[int; n]; m], "symmetrizer"?}
with rows indexed 1..m (frozen rows last) and columns 1..n.  Seed JSON adds
"cluster" (rational strings) and "coefficients" ({"kind", "values"}).  All
emitters produce canonical output: sorted keys, minimal separators, so that
re-serializing a parsed value is byte-stable.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Optional

from .quiver import ExchangeMatrix, IceMatrix, QuiverError, matrix_to_quiver
from .ratfunc import Frac, parse_rational, xy_ring
from .seed import Seed, SeedError, TropicalSemifield, UniversalSemifield
from .qp import Potential, QPError, QPQuiver, QuiverWithPotential
from .quantum import (CompatiblePair, QuantumSeed, TorusElement,
                      TruncatedSeries, VRING)


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


# -- quivers -----------------------------------------------------------------------


def ice_to_json(mtx: IceMatrix) -> dict:
    out = {"m": mtx.m, "n": mtx.n, "matrix": [list(row) for row in mtx.rows]}
    if mtx.symmetrizer and any(d != 1 for d in mtx.symmetrizer):
        out["symmetrizer"] = list(mtx.symmetrizer)
    return out


def ice_from_json(data: dict) -> IceMatrix:
    try:
        m, n = int(data["m"]), int(data["n"])
        rows = tuple(tuple(int(x) for x in row) for row in data["matrix"])
    except (KeyError, TypeError, ValueError) as exc:
        raise QuiverError(f"malformed quiver JSON: {exc}") from None
    if len(rows) != m:
        raise QuiverError(f"expected {m} rows, found {len(rows)}")
    sym = data.get("symmetrizer")
    if sym is not None:
        sym = tuple(int(x) for x in sym)
    if m == n:
        return ExchangeMatrix(rows, symmetrizer=sym)
    return IceMatrix(rows, n, sym)


def quiver_dot(mtx: IceMatrix) -> str:
    """DOT digraph; frozen vertices boxed, valuations labeled when != (1,1)."""
    pres = matrix_to_quiver(mtx)
    lines = ["digraph quiver {"]
    for v in range(1, mtx.m + 1):
        shape = "box" if v > mtx.n else "circle"
        lines.append(f'  {v} [shape={shape}];')
    for a in sorted(pres.arrows, key=lambda a: (a.source, a.target)):
        if a.valuation == (1, 1):
            lines.append(f"  {a.source} -> {a.target};")
        else:
            v1, v2 = a.valuation
            lines.append(f'  {a.source} -> {a.target} [label="({v1},{v2})"];')
    lines.append("}")
    return "\n".join(lines)


# -- seeds -------------------------------------------------------------------------


def seed_to_json(seed: Seed) -> dict:
    out = ice_to_json(seed.ice)
    out["cluster"] = list(seed.cluster_strings())
    out["coefficients"] = {
        "kind": seed.semifield.kind,
        "values": list(seed.coeff_strings()),
    }
    return out


def seed_from_json(data: dict) -> Seed:
    ice = ice_from_json(data)
    coeffs = data.get("coefficients")
    kind = (coeffs or {}).get("kind", "tropical")
    if kind == "tropical":
        base = Seed.initial(ice)
        if coeffs is not None and "values" in coeffs:
            sf = base.semifield
            values = tuple(sf.parse_elem(s) for s in coeffs["values"])
            if len(values) != ice.n:
                raise SeedError("coefficient tuple must have length n")
            base = Seed(ice, base.cluster, sf, values, base.ring)
    elif kind == "universal":
        if ice.m != ice.n:
            raise SeedError("universal coefficients require a square matrix")
        base = Seed.initial_universal(ExchangeMatrix(ice.rows, ice.symmetrizer))
        if coeffs is not None and "values" in coeffs:
            sf = base.semifield
            values = tuple(sf.parse_elem(s) for s in coeffs["values"])
            if len(values) != ice.n:
                raise SeedError("coefficient tuple must have length n")
            base = Seed(base.ice, base.cluster, sf, values, base.ring)
    else:
        raise SeedError(f"unknown coefficient kind {kind!r}")
    cluster = data.get("cluster")
    if cluster is not None:
        if len(cluster) != ice.n:
            raise SeedError("cluster must have length n")
        parsed = tuple(parse_rational(s, base.ring) for s in cluster)
        base = Seed(base.ice, parsed, base.semifield, base.coeffs, base.ring)
    return base


def looks_like_seed(data: dict) -> bool:
    return "cluster" in data or "coefficients" in data


# -- exchange graphs ----------------------------------------------------------------


def exchange_graph_to_json(graph) -> dict:
    return {
        "vertices": [
            {"digest": graph.digests[i], "cluster": list(graph.seeds[i].cluster_strings())}
            for i in range(graph.num_vertices)
        ],
        "edges": [[i, j, mult] for i, j, mult in graph.edges],
        "root": graph.root,
        "truncated": graph.truncated,
    }


def exchange_graph_dot(graph) -> str:
    lines = ["graph exchange {"]
    order = sorted(range(graph.num_vertices), key=lambda i: graph.digests[i])
    for i in order:
        label = graph.digests[i][:8]
        shape = ' shape=doublecircle' if i == graph.root else ""
        lines.append(f'  v{i} [label="{label}"{shape}];')
    for i, j, mult in sorted(graph.edges, key=lambda e: (graph.digests[e[0]], graph.digests[e[1]])):
        for _ in range(mult):
            lines.append(f"  v{i} -- v{j};")
    lines.append("}")
    return "\n".join(lines)


def mutation_class_to_json(cls) -> dict:
    return {
        "size": cls.size,
        "truncated": cls.truncated,
    }


# -- tropical data -------------------------------------------------------------------


def tropical_to_json(c, g, fs) -> dict:
    return {
        "c": [list(row) for row in c],
        "g": [list(row) for row in g],
        "f": [str(f) for f in fs],
    }


# -- quantum -------------------------------------------------------------------------


def series_to_json(series: TruncatedSeries) -> dict:
    return {
        "N": series.ctx.truncation,
        "terms": [
            {"alpha": list(a), "coeff": str(c)}
            for a, c in series.sorted_terms()
        ],
    }


def torus_element_to_json(elem: TorusElement) -> list:
    return [{"alpha": list(a), "coeff": str(c)} for a, c in elem.sorted_terms()]


def torus_element_from_json(data: list, lam: tuple) -> TorusElement:
    terms = {}
    for item in data:
        alpha = tuple(int(x) for x in item["alpha"])
        terms[alpha] = parse_rational(item["coeff"], VRING)
    return TorusElement(lam, terms)


def quantum_seed_to_json(seed: QuantumSeed) -> dict:
    return {
        "m": seed.m,
        "n": seed.n,
        "matrix": [list(row) for row in seed.pair.ice.rows],
        "lambda": [list(row) for row in seed.pair.lam],
        "initial_lambda": [list(row) for row in seed.init_lam],
        "cluster": [torus_element_to_json(x) for x in seed.cluster],
    }


def quantum_seed_from_json(data: dict) -> QuantumSeed:
    n = int(data["n"])
    rows = tuple(tuple(int(x) for x in row) for row in data["matrix"])
    lam = tuple(tuple(int(x) for x in row) for row in data["lambda"])
    init_lam = tuple(tuple(int(x) for x in row) for row in data.get("initial_lambda", data["lambda"]))
    pair = CompatiblePair(IceMatrix(rows, n), lam)
    cluster = tuple(torus_element_from_json(item, init_lam) for item in data["cluster"])
    return QuantumSeed(pair, init_lam, cluster)


# -- quivers with potential -------------------------------------------------------------


def qp_to_json(qp: QuiverWithPotential) -> dict:
    return {
        "vertices": qp.quiver.num_vertices,
        "arrows": [
            {"name": name, "source": s, "target": t}
            for name, s, t in sorted(qp.quiver.arrows)
        ],
        "potential": [
            {"cycle": list(w), "coeff": str(c)}
            for w, c in sorted(qp.potential.cycles.items(), key=lambda t: (len(t[0]), t[0]))
        ],
        "truncation": qp.truncation,
    }


def qp_from_json(data: dict) -> QuiverWithPotential:
    try:
        num = int(data["vertices"])
        arrows = tuple((a["name"], int(a["source"]), int(a["target"]))
                       for a in data["arrows"])
    except (KeyError, TypeError, ValueError) as exc:
        raise QPError(f"malformed QP JSON: {exc}") from None
    truncation = int(data.get("truncation", 12))
    cycles = {}
    for item in data.get("potential", []):
        word = tuple(item["cycle"])
        cycles[word] = cycles.get(word, Fraction(0)) + Fraction(item["coeff"])
    return QuiverWithPotential.build(num, arrows, cycles, truncation)
