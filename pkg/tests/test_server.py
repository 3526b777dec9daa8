import json
import threading
import time
import urllib.error
import urllib.request

import pytest

from cluster_forge.quiver import linear_quiver, rank2_quiver
from cluster_forge.seed import Seed
from cluster_forge.serialize import seed_to_json
from cluster_forge.server import serve


@pytest.fixture
def a3_server():
    httpd = serve(Seed.initial(linear_quiver(3)), port=0)
    thread = threading.Thread(target=httpd.serve_forever, daemon=True)
    thread.start()
    base = f"http://127.0.0.1:{httpd.server_address[1]}"
    yield base
    httpd.shutdown()
    httpd.server_close()


def get(base, path):
    with urllib.request.urlopen(base + path) as resp:
        return resp.status, json.loads(resp.read())


def post(base, path, payload=None):
    data = json.dumps(payload or {}).encode()
    req = urllib.request.Request(base + path, data=data,
                                 headers={"Content-Type": "application/json"})
    try:
        with urllib.request.urlopen(req) as resp:
            return resp.status, json.loads(resp.read())
    except urllib.error.HTTPError as exc:
        return exc.code, json.loads(exc.read())


class TestSessionFlow:
    def test_initial_session_view(self, a3_server):
        status, view = get(a3_server, "/session")
        assert status == 200
        assert view["cluster"] == ["x1", "x2", "x3"]
        assert view["c"] == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
        assert view["f"] == ["1", "1", "1"]
        assert view["sequence"] == []

    def test_mutate_golden(self, a3_server):
        status, view = post(a3_server, "/mutate", {"vertex": 1})
        assert status == 200
        assert view["cluster"] == ["(1+x2)/x1", "x2", "x3"]
        assert view["sequence"] == [1]

    def test_undo_restores_initial(self, a3_server):
        post(a3_server, "/mutate", {"vertex": 1})
        status, view = post(a3_server, "/undo")
        assert status == 200
        assert view["cluster"] == ["x1", "x2", "x3"]
        assert view["sequence"] == []

    def test_same_vertex_twice_returns_to_parent(self, a3_server):
        post(a3_server, "/mutate", {"vertex": 2})
        status, view = post(a3_server, "/mutate", {"vertex": 2})
        assert view["cluster"] == ["x1", "x2", "x3"]
        assert view["sequence"] == []

    def test_replay_equals_batch(self, a3_server):
        seq = [1, 2, 3, 1]
        for k in seq:
            status, view = post(a3_server, "/mutate", {"vertex": k})
            assert status == 200
        batch = Seed.initial(linear_quiver(3)).mutate_seq(seq)
        assert tuple(view["cluster"]) == batch.cluster_strings()

    def test_reset_with_new_seed(self, a3_server):
        post(a3_server, "/mutate", {"vertex": 1})
        payload = {"seed": seed_to_json(Seed.initial(rank2_quiver(1, 1)))}
        status, view = post(a3_server, "/reset", payload)
        assert status == 200
        assert view["cluster"] == ["x1", "x2"]
        assert view["sequence"] == []

    def test_undo_at_root_is_400(self, a3_server):
        status, body = post(a3_server, "/undo")
        assert status == 400 and "error" in body

    def test_invalid_vertex_400(self, a3_server):
        status, body = post(a3_server, "/mutate", {"vertex": 9})
        assert status == 400
        status, body = post(a3_server, "/mutate", {})
        assert status == 400

    def test_stale_version_409(self, a3_server):
        _, view = get(a3_server, "/session")
        post(a3_server, "/mutate", {"vertex": 1})
        status, body = post(a3_server, "/mutate",
                            {"vertex": 2, "version": view["version"]})
        assert status == 409

    def test_history_tree_branches(self, a3_server):
        post(a3_server, "/mutate", {"vertex": 1})
        post(a3_server, "/undo")
        post(a3_server, "/mutate", {"vertex": 2})
        _, view = get(a3_server, "/session")
        nodes = view["history"]["nodes"]
        assert len(nodes) == 3  # root plus two branches
        vertices = sorted(n["vertex"] for n in nodes if n["vertex"] is not None)
        assert vertices == [1, 2]


class TestNeighborhood:
    def test_a2_depth2_pentagon(self):
        httpd = serve(Seed.initial(rank2_quiver(1, 1)), port=0)
        thread = threading.Thread(target=httpd.serve_forever, daemon=True)
        thread.start()
        base = f"http://127.0.0.1:{httpd.server_address[1]}"
        try:
            status, data = get(base, "/neighborhood?depth=2")
            assert status == 200
            assert len(data["vertices"]) == 5
            assert len(data["edges"]) == 5
        finally:
            httpd.shutdown()
            httpd.server_close()

    def test_depth_zero(self, a3_server):
        status, data = get(a3_server, "/neighborhood?depth=0")
        assert status == 200 and len(data["vertices"]) == 1


class TestPersistence:
    def test_state_file_round_trip(self, tmp_path):
        state = tmp_path / "state.json"
        httpd = serve(Seed.initial(linear_quiver(3)), port=0, state_file=str(state))
        thread = threading.Thread(target=httpd.serve_forever, daemon=True)
        thread.start()
        base = f"http://127.0.0.1:{httpd.server_address[1]}"
        post(base, "/mutate", {"vertex": 1})
        post(base, "/mutate", {"vertex": 2})
        httpd.shutdown()
        httpd.server_close()

        httpd2 = serve(Seed.initial(linear_quiver(3)), port=0, state_file=str(state))
        thread2 = threading.Thread(target=httpd2.serve_forever, daemon=True)
        thread2.start()
        base2 = f"http://127.0.0.1:{httpd2.server_address[1]}"
        try:
            _, view = get(base2, "/session")
            assert view["sequence"] == [1, 2]
        finally:
            httpd2.shutdown()
            httpd2.server_close()
