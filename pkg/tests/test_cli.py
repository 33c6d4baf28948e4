"""Tests for graphalg.cli – command-line interface."""

import json

import pytest
from click.testing import CliRunner

from graphalg.cli import main
from graphalg.io.fixtures import load_fixture


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def files(tmp_path):
    """Write a fixture's graph and unitary to JSON files."""
    def write(name):
        model = load_fixture(name).model
        graph_file = tmp_path / f"{name}_graph.json"
        unitary_file = tmp_path / f"{name}_unitary.json"
        graph_file.write_text(model.graph.model_dump_json(), encoding="utf-8")
        unitary_file.write_text(model.unitary.model_dump_json(), encoding="utf-8")
        return str(graph_file), str(unitary_file)
    return write


def write_json(path, payload):
    path.write_text(json.dumps(payload), encoding="utf-8")
    return str(path)


class TestCLIVersion:
    def test_version(self, runner):
        result = runner.invoke(main, ["--version"])
        assert result.exit_code == 0
        assert "0.1.0" in result.output


class TestCLILogLevel:
    def test_from_environment(self, runner):
        result = runner.invoke(main, ["examples", "list"], env={"GRAPHALG_LOG_LEVEL": "debug"})
        assert result.exit_code == 0

    def test_bad_environment(self, runner):
        result = runner.invoke(main, ["examples", "list"], env={"GRAPHALG_LOG_LEVEL": "chatty"})
        assert result.exit_code == 2

    def test_flag_wins(self, runner):
        args = ["--log-level", "info", "examples", "list"]
        assert runner.invoke(main, args, env={"GRAPHALG_LOG_LEVEL": "chatty"}).exit_code == 0


class TestCLIValidate:
    def test_accepted(self, runner, files):
        graph, _ = files("intro")
        result = runner.invoke(main, ["validate", graph])
        assert result.exit_code == 0

    def test_cycle_without_exit(self, runner, tmp_path):
        graph = write_json(tmp_path / "loop.json", {
            "vertices": ["v"], "edges": [{"id": "e", "src": "v", "dst": "v"}],
        })
        result = runner.invoke(main, ["validate", graph])
        assert result.exit_code == 1

    def test_malformed_graph(self, runner, tmp_path):
        graph = write_json(tmp_path / "bad.json", {"vertices": ["v"]})
        result = runner.invoke(main, ["validate", graph])
        assert result.exit_code == 2

    def test_missing_file(self, runner, tmp_path):
        result = runner.invoke(main, ["validate", str(tmp_path / "nope.json")])
        assert result.exit_code == 2


class TestCLIUnitary:
    def test_check(self, runner, files):
        graph, unitary = files("intro")
        result = runner.invoke(main, ["unitary", "check", graph, unitary])
        assert result.exit_code == 0
        payload = json.loads(result.stdout)
        assert payload["unitary"] is True
        assert payload["pairs"] == 3
        assert payload["permutative"] is False

    def test_not_a_partition(self, runner, files, tmp_path):
        graph, _ = files("intro")
        unitary = write_json(tmp_path / "u.json", {"pairs": [{"mu": "1", "nu": "1"}]})
        result = runner.invoke(main, ["unitary", "check", graph, unitary])
        assert result.exit_code == 1
        assert json.loads(result.stdout)["unitary"] is False

    def test_expand_vertex(self, runner, files, tmp_path):
        graph, _ = files("intro")
        unitary = write_json(tmp_path / "u.json", {"pairs": [{"mu": "v", "nu": "v"}]})
        assert runner.invoke(main, ["unitary", "check", graph, unitary]).exit_code == 1
        result = runner.invoke(main, ["unitary", "check", "--expand-vertex", graph, unitary])
        assert result.exit_code == 0
        assert json.loads(result.stdout)["pairs"] == 2

    def test_random(self, runner, files):
        graph, _ = files("intro")
        first = runner.invoke(main, ["unitary", "random", "--seed", "5", graph])
        second = runner.invoke(main, ["unitary", "random", "--seed", "5", graph])
        assert first.exit_code == 0
        assert first.stdout == second.stdout
        assert json.loads(first.stdout)["pairs"]


class TestCLICoding:
    def test_build_with_dot(self, runner, files, tmp_path):
        graph, unitary = files("ex2")
        dot = tmp_path / "coding.dot"
        result = runner.invoke(main, ["coding", "build", graph, unitary, "--dot", str(dot)])
        assert result.exit_code == 0
        payload = json.loads(result.stdout)
        assert (payload["vertices"], payload["edges"], payload["negative_edges"]) == (4, 9, 2)
        assert payload["classification"] == "has_negative_edges"
        assert dot.read_text(encoding="utf-8").startswith("digraph coding {")

    def test_split_with_trace(self, runner, files, tmp_path):
        graph, unitary = files("ex2")
        trace = tmp_path / "trace.jsonl"
        result = runner.invoke(main, ["split", "run", graph, unitary, "--trace", str(trace)])
        assert result.exit_code == 0
        payload = json.loads(result.stdout)
        assert payload["rounds"] == 1
        assert len(payload["unitary"]["pairs"]) == 5
        (line,) = trace.read_text(encoding="utf-8").splitlines()
        assert json.loads(line)["vertex"] == "(2,2)"

    def test_fuel_env_rejected(self, runner, files):
        graph, unitary = files("ex2")
        result = runner.invoke(main, ["split", "run", graph, unitary], env={"GRAPHALG_FUEL": "0"})
        assert result.exit_code == 2


class TestCLIVerdict:
    def test_auto(self, runner, files):
        graph, unitary = files("ex2")
        result = runner.invoke(main, ["verdict", graph, unitary])
        assert result.exit_code == 0
        payload = json.loads(result.stdout)
        assert (payload["outcome"], payload["delay"]) == ("auto", 2)
        assert "not_in_image" not in payload

    def test_non_positive_cycle(self, runner, files):
        graph, unitary = files("nonpos")
        result = runner.invoke(main, ["verdict", graph, unitary])
        assert result.exit_code == 1
        payload = json.loads(result.stdout)
        assert payload["outcome"] == "not_auto_nonpositive_cycle"
        assert payload["not_in_image"] == "P_11"

    def test_not_synchronizing(self, runner, files):
        graph, unitary = files("intro")
        result = runner.invoke(main, ["verdict", graph, unitary])
        assert result.exit_code == 1
        assert json.loads(result.stdout)["outcome"] == "not_auto_not_synchronizing"


class TestCLIEndo:
    def test_image(self, runner, files):
        graph, unitary = files("intro")
        result = runner.invoke(main, ["endo", "image", graph, unitary, "--path", "1"])
        assert result.exit_code == 0
        payload = json.loads(result.stdout)
        assert payload["image"] == "S_22"
        assert payload["terms"] == [{"coeff": 1, "mu": "22", "nu": "v"}]

    def test_onto_negative(self, runner, files):
        graph, unitary = files("nonpos")
        result = runner.invoke(main, ["endo", "onto", graph, unitary, "--path", "11", "--depth", "3"])
        assert result.exit_code == 1
        payload = json.loads(result.stdout)
        assert (payload["in_image"], payload["depth"]) == (False, 3)

    def test_bad_path(self, runner, files):
        graph, unitary = files("intro")
        result = runner.invoke(main, ["endo", "image", graph, unitary, "--path", "13"])
        assert result.exit_code == 2


class TestCLIPsi:
    def test_eval(self, runner, files):
        graph, unitary = files("ex2")
        result = runner.invoke(main, ["psi", "eval", graph, unitary, "--period", "112"])
        assert result.exit_code == 0
        payload = json.loads(result.stdout)
        assert payload["output"] == "(121)^∞"
        assert payload["word"] == {"prefix": [], "period": ["1", "2", "1"]}

    def test_not_auto(self, runner, files):
        graph, unitary = files("intro")
        result = runner.invoke(main, ["psi", "eval", graph, unitary, "--period", "1"])
        assert result.exit_code == 2

    def test_transducer_build(self, runner, files, tmp_path):
        graph, unitary = files("ex2")
        table = tmp_path / "phi.csv"
        dot = tmp_path / "psi.dot"
        result = runner.invoke(main, ["transducer", "build", graph, unitary, "--table", str(table), "--dot", str(dot)])
        assert result.exit_code == 0
        payload = json.loads(result.stdout)
        assert (payload["delay"], payload["window"]) == (2, 4)
        assert set(payload["transducers"]) == {"sliding-block", "output", "output∘sliding-block"}
        assert len(table.read_text(encoding="utf-8").splitlines()) == 17
        assert dot.exists()


class TestCLIExamples:
    def test_list(self, runner):
        result = runner.invoke(main, ["examples", "list"])
        assert result.exit_code == 0
        assert set(json.loads(result.stdout)) == {"ex1", "ex2", "ex3", "intro", "nonpos"}

    def test_run(self, runner):
        result = runner.invoke(main, ["examples", "run", "ex2"])
        assert result.exit_code == 0
        assert json.loads(result.stdout)["passed"] is True

    def test_unknown(self, runner):
        assert runner.invoke(main, ["examples", "run", "ex9"]).exit_code == 2


class TestCLICorpus:
    def test_run(self, runner, tmp_path):
        csv = tmp_path / "corpus.csv"
        result = runner.invoke(main, ["corpus", "run", "--seeds", "3", "--csv", str(csv)])
        assert result.exit_code == 0
        payload = json.loads(result.stdout)
        assert payload["entries"] == 3
        assert sum(payload["outcomes"].values()) == 3
        assert len(csv.read_text(encoding="utf-8").splitlines()) == 4
