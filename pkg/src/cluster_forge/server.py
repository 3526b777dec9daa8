"""JSON API serving interactive mutation sessions.

A session is a cursor into the mutation tree of an initial seed: POST
/mutate walks an edge of the n-regular tree (creating it if new), POST
/undo steps back toward the root, POST /reset replaces the initial seed.
GET /session renders the current seed together with its tropical data;
GET /neighborhood returns the local exchange graph.  Mutations on a
session are serialized: a second writer in flight gets 409, as does a
stale "version" field in the request body.
"""

from __future__ import annotations

import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import Optional
from urllib.parse import parse_qs, urlparse

from .quiver import ExchangeMatrix, QuiverError
from .ratfunc import RatFuncError
from .seed import Seed, SeedError
from .serialize import dumps, exchange_graph_to_json, ice_to_json, seed_from_json, seed_to_json
from .tropical import SignIncoherenceError, TropicalError, c_matrix, f_polynomials, g_matrix


class SessionError(ValueError):
    def __init__(self, status: int, message: str):
        self.status = status
        super().__init__(message)


class Session:
    """Mutation history tree with a cursor; all transitions hold the lock."""

    def __init__(self, initial: Seed):
        self.lock = threading.Lock()
        self._load(initial)

    def _load(self, initial: Seed):
        self.initial = initial
        self.nodes = [{"parent": None, "vertex": None, "children": {}, "seed": initial}]
        self.cursor = 0
        self.version = 0

    def seed(self) -> Seed:
        return self.nodes[self.cursor]["seed"]

    def path(self, node: Optional[int] = None) -> list:
        node = self.cursor if node is None else node
        out = []
        while self.nodes[node]["parent"] is not None:
            out.append(self.nodes[node]["vertex"])
            node = self.nodes[node]["parent"]
        return out[::-1]

    def mutate(self, vertex: int):
        seed = self.seed()
        if not isinstance(vertex, int) or not 1 <= vertex <= seed.n:
            raise SessionError(400, f"vertex must be an integer in 1..{seed.n}")
        node = self.nodes[self.cursor]
        if node["parent"] is not None and node["vertex"] == vertex:
            self.cursor = node["parent"]
        elif vertex in node["children"]:
            self.cursor = node["children"][vertex]
        else:
            new_seed = seed.mutate(vertex)
            self.nodes.append({"parent": self.cursor, "vertex": vertex,
                               "children": {}, "seed": new_seed})
            node["children"][vertex] = len(self.nodes) - 1
            self.cursor = len(self.nodes) - 1
        self.version += 1

    def undo(self):
        node = self.nodes[self.cursor]
        if node["parent"] is None:
            raise SessionError(400, "already at the initial seed")
        self.cursor = node["parent"]
        self.version += 1

    def reset(self, seed: Seed):
        self._load(seed)
        self.version += 1

    def view(self) -> dict:
        seed = self.seed()
        path = self.path()
        out = {
            "version": self.version,
            "initial": seed_to_json(self.initial),
            "quiver": ice_to_json(seed.ice),
            "cluster": list(seed.cluster_strings()),
            "coefficients": {
                "kind": seed.semifield.kind,
                "values": list(seed.coeff_strings()),
            },
            "sequence": path,
            "history": {
                "cursor": self.cursor,
                "nodes": [
                    {"id": i, "parent": n["parent"], "vertex": n["vertex"]}
                    for i, n in enumerate(self.nodes)
                ],
            },
        }
        principal = self.initial.ice.principal()
        try:
            c = c_matrix(principal, path)
            g = g_matrix(principal, path)
            fs = f_polynomials(principal, path)
            out["c"] = [list(row) for row in c]
            out["g"] = [list(row) for row in g]
            out["f"] = [str(f) for f in fs]
        except SignIncoherenceError as exc:
            out["tropical_error"] = str(exc)
        return out

    def neighborhood(self, depth: int) -> dict:
        from .seed import exchange_graph  # local import to avoid cycles
        seed = self.seed()
        # depth-bounded BFS over isomorphism classes
        index = {seed.key(): 0}
        seeds = [seed]
        dist = [0]
        frontier = [0]
        while frontier:
            nxt = []
            for i in frontier:
                if dist[i] >= depth:
                    continue
                for k in range(1, seed.n + 1):
                    nb = seeds[i].mutate(k)
                    key = nb.key()
                    if key not in index:
                        index[key] = len(seeds)
                        seeds.append(nb)
                        dist.append(dist[i] + 1)
                        nxt.append(index[key])
            frontier = nxt
        # collect every edge between discovered classes, including those
        # joining two boundary vertices
        edges = set()
        for i in range(len(seeds)):
            for k in range(1, seed.n + 1):
                j = index.get(seeds[i].mutate(k).key())
                if j is not None:
                    edges.add((min(i, j), max(i, j)))
        return {
            "center": 0,
            "depth": depth,
            "vertices": [
                {"id": i, "distance": dist[i], "digest": seeds[i].digest(),
                 "cluster": list(seeds[i].cluster_strings())}
                for i in range(len(seeds))
            ],
            "edges": sorted([i, j] for i, j in edges),
        }


class SessionStore:
    def __init__(self, initial: Seed, state_file: Optional[str] = None):
        self.sessions = {"default": Session(initial)}
        self.default_initial = initial
        self.state_file = state_file
        self.store_lock = threading.Lock()

    def get(self, name: str) -> Session:
        with self.store_lock:
            if name not in self.sessions:
                self.sessions[name] = Session(self.default_initial)
            return self.sessions[name]

    def snapshot(self):
        if not self.state_file:
            return
        with self.store_lock:
            data = {
                name: {
                    "initial": seed_to_json(s.initial),
                    "sequence": s.path(),
                }
                for name, s in self.sessions.items()
            }
        with open(self.state_file, "w") as fh:
            fh.write(dumps(data))

    def restore(self):
        if not self.state_file:
            return
        try:
            with open(self.state_file) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError):
            return
        for name, entry in data.items():
            session = Session(seed_from_json(entry["initial"]))
            for k in entry["sequence"]:
                session.mutate(k)
            self.sessions[name] = session


def make_handler(store: SessionStore):
    class Handler(BaseHTTPRequestHandler):
        def log_message(self, fmt, *args):
            pass

        def _send(self, status: int, payload: dict):
            body = dumps(payload).encode()
            self.send_response(status)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(body)))
            self.send_header("Access-Control-Allow-Origin", "*")
            self.end_headers()
            self.wfile.write(body)

        def _body(self) -> dict:
            length = int(self.headers.get("Content-Length") or 0)
            if not length:
                return {}
            raw = self.rfile.read(length)
            try:
                data = json.loads(raw)
            except json.JSONDecodeError:
                raise SessionError(400, "request body is not valid JSON")
            if not isinstance(data, dict):
                raise SessionError(400, "request body must be a JSON object")
            return data

        def _session(self, query: dict) -> Session:
            name = (query.get("session") or ["default"])[0]
            return store.get(name)

        def do_OPTIONS(self):
            self.send_response(204)
            self.send_header("Access-Control-Allow-Origin", "*")
            self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
            self.send_header("Access-Control-Allow-Headers", "Content-Type")
            self.end_headers()

        def do_GET(self):
            url = urlparse(self.path)
            query = parse_qs(url.query)
            try:
                session = self._session(query)
                if url.path == "/session":
                    with session.lock:
                        self._send(200, session.view())
                elif url.path == "/neighborhood":
                    depth = int((query.get("depth") or ["1"])[0])
                    if depth < 0 or depth > 6:
                        raise SessionError(400, "depth must be between 0 and 6")
                    with session.lock:
                        self._send(200, session.neighborhood(depth))
                else:
                    self._send(404, {"error": f"unknown path {url.path}"})
            except SessionError as exc:
                self._send(exc.status, {"error": str(exc)})
            except (QuiverError, SeedError, TropicalError, RatFuncError, ValueError) as exc:
                self._send(400, {"error": f"{type(exc).__name__}: {exc}"})

        def do_POST(self):
            url = urlparse(self.path)
            query = parse_qs(url.query)
            try:
                session = self._session(query)
                body = self._body()
                if not session.lock.acquire(blocking=False):
                    self._send(409, {"error": "a conflicting mutation is in flight"})
                    return
                try:
                    expected = body.get("version")
                    if expected is not None and expected != session.version:
                        self._send(409, {"error": "stale version",
                                         "version": session.version})
                        return
                    if url.path == "/mutate":
                        session.mutate(body.get("vertex"))
                    elif url.path == "/undo":
                        session.undo()
                    elif url.path == "/reset":
                        seed_data = body.get("seed")
                        if seed_data is None:
                            session.reset(store.default_initial)
                        else:
                            session.reset(seed_from_json(seed_data))
                    else:
                        self._send(404, {"error": f"unknown path {url.path}"})
                        return
                    view = session.view()
                finally:
                    if session.lock.locked():
                        session.lock.release()
                store.snapshot()
                self._send(200, view)
            except SessionError as exc:
                self._send(exc.status, {"error": str(exc)})
            except (QuiverError, SeedError, TropicalError, RatFuncError, ValueError) as exc:
                self._send(400, {"error": f"{type(exc).__name__}: {exc}"})

    return Handler


def serve(initial: Seed, port: int, state_file: Optional[str] = None,
          host: str = "127.0.0.1") -> ThreadingHTTPServer:
    """Build the HTTP server (caller decides whether to block on serve_forever)."""
    store = SessionStore(initial, state_file)
    store.restore()
    server = ThreadingHTTPServer((host, port), make_handler(store))
    return server
