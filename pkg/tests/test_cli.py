import json
import subprocess
import sys
from pathlib import Path

import pytest

from cluster_forge.cli import main
from cluster_forge.serialize import dumps


def run_cli(args, capsys):
    code = main(args)
    out = capsys.readouterr().out
    return code, out


def run_json(args, capsys):
    code, out = run_cli(args, capsys)
    assert code == 0, out
    return json.loads(out)


class TestMutate:
    def test_quiver_mutation(self, fixture_path, capsys):
        data = run_json(["mutate", fixture_path("cycle3"), "--at", "1"], capsys)
        assert data["matrix"] == [[0, 1, -1], [-1, 0, 0], [1, 0, 0]]

    def test_double_mutation_byte_identical(self, fixture_path, capsys, tmp_path):
        src = Path(fixture_path("a2")).read_text().strip()
        code, once = run_cli(["mutate", fixture_path("a2"), "--at", "1"], capsys)
        intermediate = tmp_path / "step.json"
        intermediate.write_text(once)
        code, twice = run_cli(["mutate", str(intermediate), "--at", "1"], capsys)
        assert twice.strip() == src

    def test_seed_mutation(self, fixture_path, capsys, tmp_path):
        seed_file = tmp_path / "seed.json"
        quiver = json.loads(Path(fixture_path("a3")).read_text())
        quiver["cluster"] = ["x1", "x2", "x3"]
        seed_file.write_text(dumps(quiver))
        data = run_json(["mutate", str(seed_file), "--at", "1"], capsys)
        assert data["cluster"] == ["(1+x2)/x1", "x2", "x3"]

    def test_usage_error_without_vertex(self, fixture_path, capsys):
        code, _ = run_cli(["mutate", fixture_path("a2")], capsys)
        assert code == 2

    def test_domain_error_bad_vertex(self, fixture_path, capsys):
        code, _ = run_cli(["mutate", fixture_path("a2"), "--at", "7"], capsys)
        assert code == 1

    def test_dot_output(self, fixture_path, capsys):
        code, out = run_cli(["mutate", fixture_path("b3"), "--at", "1",
                             "--format", "dot"], capsys)
        assert code == 0
        assert "digraph" in out and "(1,2)" in out


class TestEnumeration:
    def test_class_a3(self, fixture_path, capsys):
        data = run_json(["class", fixture_path("a3"), "--limit", "100"], capsys)
        assert data == {"size": 4, "truncated": False}

    def test_type_gr36_shape(self, fixture_path, capsys):
        data = run_json(["type", fixture_path("gr36")], capsys)
        assert data["label"] == "D4"

    def test_exchange_graph_a2(self, fixture_path, capsys):
        data = run_json(["exchange-graph", fixture_path("a2")], capsys)
        assert len(data["vertices"]) == 5
        assert sum(e[2] for e in data["edges"]) == 5
        assert not data["truncated"]

    def test_exchange_graph_dot(self, fixture_path, capsys):
        code, out = run_cli(["exchange-graph", fixture_path("a2"), "--format", "dot"], capsys)
        assert code == 0 and out.startswith("graph exchange")

    def test_variables(self, fixture_path, capsys):
        data = run_json(["variables", fixture_path("a2")], capsys)
        assert data["count"] == 5 and data["complete"]

    def test_variables_infinite(self, fixture_path, capsys):
        data = run_json(["variables", fixture_path("kronecker"), "--limit", "1000"], capsys)
        assert data["infinite"] and not data["complete"]


class TestTropicalCommands:
    def test_cmatrix(self, fixture_path, capsys):
        data = run_json(["cmatrix", fixture_path("c3"), "--seq", "1,2,3,1,2,3"], capsys)
        assert data["c"] == [[1, -1, 0], [1, 0, -2], [1, 0, -1]]

    def test_gmatrix(self, fixture_path, capsys):
        data = run_json(["gmatrix", fixture_path("b3"), "--seq", "1,2,3,1,2,3"], capsys)
        assert data["g"] == [[0, -1, 0], [-1, -1, -1], [2, 2, 1]]

    def test_fpoly(self, fixture_path, capsys):
        data = run_json(["fpoly", fixture_path("a2"), "--seq", "1,2"], capsys)
        assert data["f"] == ["1+y1", "1+y1+y1*y2"]

    def test_duality(self, fixture_path, capsys):
        data = run_json(["duality", fixture_path("b3"), "--seq", "1,2,3,1,2,3"], capsys)
        assert data["holds"] and data["tropical"]["holds"] and data["langlands"]["holds"]

    def test_table_format(self, fixture_path, capsys):
        code, out = run_cli(["cmatrix", fixture_path("a2"), "--seq", "1",
                             "--format", "table"], capsys)
        assert code == 0
        assert out.splitlines() == ["-1  1", " 0  1"]


class TestQuantumCommands:
    def test_pentagon(self, capsys):
        data = run_json(["pentagon", "--N", "8"], capsys)
        assert data == {"N": 8, "holds": True}

    def test_quantum_mutate_round_trip(self, fixture_path, capsys, tmp_path):
        data = run_json(["quantum-mutate", fixture_path("a2"), "--at", "1"], capsys)
        assert data["n"] == 2 and data["m"] == 4
        step = tmp_path / "q.json"
        step.write_text(dumps(data))
        back = run_json(["quantum-mutate", str(step), "--at", "1"], capsys)
        for j, entry in enumerate(back["cluster"]):
            alpha = [1 if i == j else 0 for i in range(4)]
            assert entry == [{"alpha": alpha, "coeff": "1"}]

    def test_dt(self, fixture_path, capsys):
        data = run_json(["dt", fixture_path("a2"), "--N", "6", "--depth", "4"], capsys)
        assert data["found"]
        assert {"alpha": [0, 0], "coeff": "1"} in data["series"]["terms"]

    def test_identity(self, fixture_path, capsys):
        data = run_json(["identity", fixture_path("a2"), "--i", "1,2,1",
                         "--iprime", "2,1", "--N", "8"], capsys)
        assert data["holds"]

    def test_identity_precondition_domain_error(self, fixture_path, capsys):
        code, _ = run_cli(["identity", fixture_path("a2"), "--i", "1",
                           "--iprime", "2", "--N", "4"], capsys)
        assert code == 1


class TestQPCommands:
    def test_qp_mutate(self, fixture_path, capsys):
        data = run_json(["qp-mutate", fixture_path("qp_3cycle"), "--at", "2"], capsys)
        assert data["potential"] == []
        shapes = sorted((a["source"], a["target"]) for a in data["arrows"])
        assert shapes == [(2, 1), (3, 2)]

    def test_qp_mutate_squared(self, fixture_path, capsys):
        data = run_json(["qp-mutate", fixture_path("qp_3cycle_sq"), "--at", "2"], capsys)
        cycles = {tuple(p["cycle"]) for p in data["potential"]}
        assert ("[ab]", "b*", "a*") in cycles
        assert ("[ab]", "c", "[ab]", "c") in cycles

    def test_jacobian(self, fixture_path, capsys):
        data = run_json(["jacobian", fixture_path("qp_3cycle"), "--N", "5"], capsys)
        assert data == {"dimension": 6, "display": "6", "saturated": True}

    def test_qp_domain_error_on_two_cycle(self, fixture_path, capsys, tmp_path):
        first = run_json(["qp-mutate", fixture_path("qp_3cycle_sq"), "--at", "2"], capsys)
        step = tmp_path / "qp.json"
        step.write_text(dumps(first))
        code, _ = run_cli(["qp-mutate", str(step), "--at", "1"], capsys)
        assert code == 1


class TestReport:
    def test_report_renders_files(self, fixture_path, capsys, tmp_path):
        out_dir = tmp_path / "report"
        data = run_json(["report", fixture_path("a2"), "--out-dir", str(out_dir),
                         "--seq", "1"], capsys)
        assert data["exchange_graph"]["vertices"] == 5
        for name in ["quiver.png", "exchange_graph.png", "tropical.tsv",
                     "seeds.tsv", "summary.json"]:
            assert (out_dir / name).exists(), name
        lines = (out_dir / "tropical.tsv").read_text().splitlines()
        assert lines[0] == "kind\trow\tvalues"
        assert any(line.startswith("F\t1\t1+y1") for line in lines)


class TestProcessLevel:
    def test_console_script_round_trip(self, fixture_path, tmp_path):
        result = subprocess.run(
            [sys.executable, "-m", "cluster_forge.cli", "class",
             fixture_path("markov"), "--limit", "10"],
            capture_output=True, text=True)
        assert result.returncode == 0
        assert json.loads(result.stdout) == {"size": 1, "truncated": False}

    def test_usage_exit_code(self):
        result = subprocess.run(
            [sys.executable, "-m", "cluster_forge.cli", "no-such-command"],
            capture_output=True, text=True)
        assert result.returncode == 2

    def test_truncation_env_var(self, fixture_path):
        result = subprocess.run(
            [sys.executable, "-m", "cluster_forge.cli", "pentagon"],
            capture_output=True, text=True,
            env={"PATH": "/usr/bin:/bin", "CLUSTER_FORGE_TRUNCATION": "4"})
        assert result.returncode == 0
        assert json.loads(result.stdout)["N"] == 4


class TestSerializeRoundTrips:
    def test_seed_json_round_trip(self):
        from cluster_forge.quiver import b3_quiver
        from cluster_forge.seed import Seed
        from cluster_forge.serialize import seed_from_json, seed_to_json
        seed = Seed.initial(b3_quiver()).mutate_seq([1, 2])
        data = seed_to_json(seed)
        back = seed_from_json(data)
        assert back.same_labeled(seed)
        assert seed_to_json(back) == data

    def test_universal_seed_round_trip(self):
        from cluster_forge.quiver import rank2_quiver
        from cluster_forge.seed import Seed
        from cluster_forge.serialize import seed_from_json, seed_to_json
        seed = Seed.initial_universal(rank2_quiver(1, 1)).mutate_seq([1, 2, 1])
        data = seed_to_json(seed)
        back = seed_from_json(data)
        assert back.same_labeled(seed)

    def test_qp_json_round_trip(self):
        from cluster_forge.qp import mutate_qp, three_cycle_qp
        from cluster_forge.serialize import qp_from_json, qp_to_json
        qp = mutate_qp(three_cycle_qp(squared=True), 2)
        data = qp_to_json(qp)
        back = qp_from_json(data)
        assert sorted(back.quiver.arrows) == sorted(qp.quiver.arrows)
        assert back.potential == qp.potential
        assert qp_to_json(back) == data
