"""Command-line surface: parse inputs, run the kernel, emit JSON/DOT/tables.

Exit codes: 0 on success, 1 on domain errors (reported with the module
error name), 2 on usage errors.  CLUSTER_FORGE_TRUNCATION overrides the
default truncation depth of the quantum and potential commands.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import qp as qp_mod
from . import quantum as quantum_mod
from . import quiver as quiver_mod
from . import seed as seed_mod
from . import serialize, tropical
from .quiver import ExchangeMatrix, QuiverError
from .ratfunc import RatFuncError
from .seed import Seed, SeedError


class UsageError(ValueError):
    pass


DOMAIN_ERRORS = (QuiverError, SeedError, tropical.TropicalError,
                 quantum_mod.QuantumError, qp_mod.QPError, RatFuncError,
                 json.JSONDecodeError, KeyError, OSError)


def default_truncation(fallback: int) -> int:
    env = os.environ.get("CLUSTER_FORGE_TRUNCATION")
    if env is None:
        return fallback
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"CLUSTER_FORGE_TRUNCATION must be an integer, got {env!r}")


def read_json(path: str) -> dict:
    if path == "-":
        return json.load(sys.stdin)
    with open(path) as fh:
        return json.load(fh)


def parse_seq(text: str) -> list:
    if not text:
        return []
    try:
        return [int(tok) for tok in text.replace(",", " ").split()]
    except ValueError:
        raise UsageError(f"bad mutation sequence {text!r}")


def load_seed(path: str) -> Seed:
    data = read_json(path)
    if serialize.looks_like_seed(data):
        return serialize.seed_from_json(data)
    return Seed.initial(serialize.ice_from_json(data))


def load_matrix(path: str):
    data = read_json(path)
    return serialize.ice_from_json(data)


def load_exchange_matrix(path: str) -> ExchangeMatrix:
    mtx = load_matrix(path)
    return mtx.principal() if mtx.m != mtx.n else ExchangeMatrix(mtx.rows, mtx.symmetrizer)


def emit(args, payload: dict, table: str = None, dot: str = None):
    fmt = getattr(args, "format", "json")
    if fmt == "json":
        print(serialize.dumps(payload))
    elif fmt == "table":
        print(table if table is not None else _default_table(payload))
    elif fmt == "dot":
        if dot is None:
            raise UsageError("this command has no DOT output")
        print(dot)


def _default_table(payload, indent: str = "") -> str:
    lines = []
    if isinstance(payload, dict):
        for key in sorted(payload):
            value = payload[key]
            if isinstance(value, (dict, list)):
                lines.append(f"{indent}{key}:")
                lines.append(_default_table(value, indent + "  "))
            else:
                lines.append(f"{indent}{key}: {value}")
    elif isinstance(payload, list):
        if payload and all(isinstance(row, list) for row in payload):
            width = max(len(str(x)) for row in payload for x in row) if payload else 1
            for row in payload:
                lines.append(indent + " ".join(str(x).rjust(width) for x in row))
        else:
            for item in payload:
                lines.append(f"{indent}- {item}" if not isinstance(item, (dict, list))
                             else _default_table(item, indent + "  "))
    else:
        lines.append(f"{indent}{payload}")
    return "\n".join(line for line in lines if line)


def matrix_table(mat) -> str:
    width = max((len(str(x)) for row in mat for x in row), default=1)
    return "\n".join(" ".join(str(x).rjust(width) for x in row) for row in mat)


# -- commands ---------------------------------------------------------------------------


def cmd_mutate(args):
    data = read_json(args.input)
    seq = parse_seq(args.seq) if args.seq else []
    if args.at:
        seq = seq + args.at
    if not seq:
        raise UsageError("mutate needs --at or --seq")
    if serialize.looks_like_seed(data):
        out = serialize.seed_to_json(serialize.seed_from_json(data).mutate_seq(seq))
        dot = serialize.quiver_dot(serialize.seed_from_json(data).mutate_seq(seq).ice)
    else:
        mtx = serialize.ice_from_json(data).mutate_seq(seq)
        out = serialize.ice_to_json(mtx)
        dot = serialize.quiver_dot(mtx)
    emit(args, out, dot=dot)


def cmd_class(args):
    mtx = load_matrix(args.input)
    cls = quiver_mod.mutation_class(mtx, limit=args.limit)
    emit(args, serialize.mutation_class_to_json(cls))


def cmd_type(args):
    mtx = load_exchange_matrix(args.input)
    result = quiver_mod.cluster_type(mtx, limit=args.limit)
    emit(args, {"label": result.label, "verdict": result.verdict,
                "class_size": result.class_size, "exhausted": result.exhausted})


def cmd_exchange_graph(args):
    seed = load_seed(args.input)
    graph = seed_mod.exchange_graph(seed, limit=args.limit)
    emit(args, serialize.exchange_graph_to_json(graph),
         dot=serialize.exchange_graph_dot(graph),
         table=f"vertices: {graph.num_vertices}\nedges: {graph.num_edges}\ntruncated: {graph.truncated}")


def cmd_variables(args):
    seed = load_seed(args.input)
    result = seed_mod.cluster_variables(seed, limit=args.limit)
    payload = {
        "count": result.count,
        "complete": result.complete,
        "infinite": result.infinite,
        "variables": [str(v) for v in result.variables],
    }
    if result.infinite:
        payload["witness"] = list(result.witness)
    emit(args, payload, table="\n".join(str(v) for v in result.variables))


def _tropical_payload(args):
    b = load_exchange_matrix(args.input)
    seq = parse_seq(args.seq)
    c, g = tropical.c_and_g(b, seq)
    fs = tropical.f_polynomials(b, seq)
    return b, seq, serialize.tropical_to_json(c, g, fs)


def cmd_cmatrix(args):
    _, _, payload = _tropical_payload(args)
    emit(args, payload, table=matrix_table(payload["c"]))


def cmd_gmatrix(args):
    _, _, payload = _tropical_payload(args)
    emit(args, payload, table=matrix_table(payload["g"]))


def cmd_fpoly(args):
    _, _, payload = _tropical_payload(args)
    emit(args, payload, table="\n".join(payload["f"]))


def cmd_duality(args):
    b = load_exchange_matrix(args.input)
    seq = parse_seq(args.seq)
    trop = tropical.check_tropical_duality(b, seq)
    lang = tropical.check_langlands_duality(b, seq)
    emit(args, {
        "tropical": {"holds": trop.holds, "checks": {k: bool(v) for k, v in trop.checks.items()}},
        "langlands": {"holds": lang.holds},
        "holds": trop.holds and lang.holds,
    })


def cmd_quantum_mutate(args):
    data = read_json(args.input)
    if "lambda" in data:
        qseed = serialize.quantum_seed_from_json(data)
    else:
        mtx = serialize.ice_from_json(data)
        b = mtx.principal() if mtx.m != mtx.n else ExchangeMatrix(mtx.rows, mtx.symmetrizer)
        pair = quantum_mod.CompatiblePair.principal_framing(b)
        qseed = quantum_mod.QuantumSeed.initial(pair)
    seq = parse_seq(args.seq) if args.seq else []
    if args.at:
        seq = seq + args.at
    if not seq:
        raise UsageError("quantum-mutate needs --at or --seq")
    emit(args, serialize.quantum_seed_to_json(qseed.mutate_seq(seq)))


def cmd_pentagon(args):
    n = args.N if args.N is not None else default_truncation(10)
    holds = quantum_mod.pentagon_check(n) and quantum_mod.functional_equation_check(n)
    emit(args, {"holds": holds, "N": n})


def cmd_dt(args):
    b = load_exchange_matrix(args.input)
    n = args.N if args.N is not None else default_truncation(10)
    result = quantum_mod.combinatorial_dt(b, n, args.depth)
    if not result.found:
        emit(args, {"found": False, "depth": args.depth})
        return
    payload = {
        "found": True,
        "sequence": list(result.sequence),
        "series": serialize.series_to_json(result.series),
    }
    emit(args, payload)


def cmd_identity(args):
    b = load_exchange_matrix(args.input)
    n = args.N if args.N is not None else default_truncation(10)
    report = quantum_mod.verify_identity(b, parse_seq(args.i), parse_seq(args.iprime), n)
    payload = {"holds": report.holds, "N": n}
    if report.series is not None:
        payload["series"] = serialize.series_to_json(report.series)
    emit(args, payload)


def cmd_qp_mutate(args):
    qp = serialize.qp_from_json(read_json(args.input))
    if args.truncation is not None:
        qp = qp_mod.QuiverWithPotential(qp.quiver, qp.potential, args.truncation)
    out = qp
    for k in args.at:
        out = qp_mod.mutate_qp(out, k)
    emit(args, serialize.qp_to_json(out))


def cmd_jacobian(args):
    qp = serialize.qp_from_json(read_json(args.input))
    n = args.N if args.N is not None else default_truncation(8)
    result = qp_mod.jacobian_dimension(qp, n)
    emit(args, {"dimension": result.dimension, "saturated": result.saturated,
                "display": str(result)})


def cmd_serve(args):
    from . import server as server_mod
    initial = load_seed(args.input) if args.input else Seed.initial(quiver_mod.linear_quiver(3))
    httpd = server_mod.serve(initial, args.port, state_file=args.state_file, host=args.host)
    print(f"serving on http://{args.host}:{httpd.server_address[1]}", file=sys.stderr)
    try:
        httpd.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        httpd.server_close()


def cmd_report(args):
    from . import plotting
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    seed = load_seed(args.input)
    seq = parse_seq(args.seq) if args.seq else []
    current = seed.mutate_seq(seq)
    b = seed.ice.principal()

    plotting.draw_quiver(current.ice, str(out_dir / "quiver.png"),
                         title=f"quiver after {seq}" if seq else "initial quiver")
    graph = seed_mod.exchange_graph(seed, limit=args.limit)
    plotting.draw_exchange_graph(graph, str(out_dir / "exchange_graph.png"))

    c, g = tropical.c_and_g(b, seq)
    fs = tropical.f_polynomials(b, seq)
    with open(out_dir / "tropical.tsv", "w") as fh:
        fh.write("kind\trow\tvalues\n")
        for i, row in enumerate(c):
            fh.write(f"c\t{i + 1}\t" + "\t".join(map(str, row)) + "\n")
        for i, row in enumerate(g):
            fh.write(f"g\t{i + 1}\t" + "\t".join(map(str, row)) + "\n")
        for j, f in enumerate(fs):
            fh.write(f"F\t{j + 1}\t{f}\n")
    with open(out_dir / "seeds.tsv", "w") as fh:
        fh.write("seed\tdigest\tcluster\n")
        for i in range(graph.num_vertices):
            cluster = "\t".join(graph.seeds[i].cluster_strings())
            fh.write(f"{i}\t{graph.digests[i]}\t{cluster}\n")
    summary = {
        "input": str(args.input),
        "sequence": seq,
        "exchange_graph": {"vertices": graph.num_vertices, "edges": graph.num_edges,
                           "truncated": graph.truncated},
        "files": ["quiver.png", "exchange_graph.png", "tropical.tsv", "seeds.tsv"],
    }
    with open(out_dir / "summary.json", "w") as fh:
        fh.write(serialize.dumps(summary))
    emit(args, summary)


# -- parser -----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cluster-forge",
        description="Exact cluster-algebra kernel: mutation, exchange graphs, "
                    "c/g-vectors, quantum dilogarithms, quivers with potential.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.set_defaults(fn=fn)
        return p

    def fmt(p, *, dot=False):
        choices = ["json", "table"] + (["dot"] if dot else [])
        p.add_argument("--format", choices=choices, default="json")

    p = add("mutate", cmd_mutate, help="mutate a quiver or seed")
    p.add_argument("input")
    p.add_argument("--at", type=int, action="append", default=[],
                   help="vertex to mutate (repeatable)")
    p.add_argument("--seq", help="comma-separated mutation sequence")
    fmt(p, dot=True)

    p = add("class", cmd_class, help="enumerate the mutation class up to isomorphism")
    p.add_argument("input")
    p.add_argument("--limit", type=int, default=100000)
    fmt(p)

    p = add("type", cmd_type, help="detect the cluster type (Dynkin label)")
    p.add_argument("input")
    p.add_argument("--limit", type=int, default=100000)
    fmt(p)

    p = add("exchange-graph", cmd_exchange_graph, help="enumerate seeds up to isomorphism")
    p.add_argument("input")
    p.add_argument("--limit", type=int, default=50000)
    fmt(p, dot=True)

    p = add("variables", cmd_variables, help="enumerate cluster variables")
    p.add_argument("input")
    p.add_argument("--limit", type=int, default=50000)
    fmt(p)

    for name, fn in [("cmatrix", cmd_cmatrix), ("gmatrix", cmd_gmatrix), ("fpoly", cmd_fpoly)]:
        p = add(name, fn, help=f"principal-coefficient data along a sequence ({name})")
        p.add_argument("input")
        p.add_argument("--seq", default="", help="comma-separated mutation sequence")
        fmt(p)

    p = add("duality", cmd_duality, help="verify tropical and Langlands dualities")
    p.add_argument("input")
    p.add_argument("--seq", default="")
    fmt(p)

    p = add("quantum-mutate", cmd_quantum_mutate, help="mutate a quantum seed (principal framing)")
    p.add_argument("input")
    p.add_argument("--at", type=int, action="append", default=[])
    p.add_argument("--seq")
    fmt(p)

    p = add("pentagon", cmd_pentagon, help="check the pentagon identity and functional equation")
    p.add_argument("--N", type=int, default=None, help="truncation order (default 10)")
    fmt(p)

    p = add("dt", cmd_dt, help="combinatorial Donaldson-Thomas series")
    p.add_argument("input")
    p.add_argument("--N", type=int, default=None)
    p.add_argument("--depth", type=int, default=12)
    fmt(p)

    p = add("identity", cmd_identity, help="verify a dilogarithm identity E(i) = E(i')")
    p.add_argument("input")
    p.add_argument("--i", required=True)
    p.add_argument("--iprime", required=True, help="second sequence; may be empty")
    p.add_argument("--N", type=int, default=None)
    fmt(p)

    p = add("qp-mutate", cmd_qp_mutate, help="mutate a quiver with potential")
    p.add_argument("input")
    p.add_argument("--at", type=int, action="append", required=True)
    p.add_argument("--truncation", type=int, default=None)
    fmt(p)

    p = add("jacobian", cmd_jacobian, help="Jacobian algebra dimension")
    p.add_argument("input")
    p.add_argument("--N", type=int, default=None, help="path-length cutoff")
    fmt(p)

    p = add("serve", cmd_serve, help="serve the interactive JSON API")
    p.add_argument("input", nargs="?", help="initial seed or quiver JSON")
    p.add_argument("--port", type=int, default=8642)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--state-file", help="JSON snapshot for session persistence")

    p = add("report", cmd_report, help="render figures and tables for a seed")
    p.add_argument("input")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--seq", default="")
    p.add_argument("--limit", type=int, default=200)
    fmt(p)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.fn(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except DOMAIN_ERRORS as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
