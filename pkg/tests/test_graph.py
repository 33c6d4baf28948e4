"""Tests for graphalg.graph – graphs, paths, partitions and standing assumptions."""

import numpy as np
import pytest

from graphalg.errors import GraphStructureError, InputError, PathError
from graphalg.graph import (
    Edge,
    Graph,
    Path,
    all_paths,
    concat,
    cylinders,
    is_partition,
    is_partition_of_unity,
    is_prefix,
    paths_from,
    random_graph,
    remainder,
    validate_standing_assumptions,
)


@pytest.fixture
def o2():
    return Graph.build(["v"], [Edge("1", "v", "v"), Edge("2", "v", "v")])


@pytest.fixture
def f_graph():
    return Graph.build(["v", "w"], [Edge("e1", "v", "v"), Edge("e2", "v", "w"), Edge("e3", "w", "v")])


# ── Construction ──────────────────────────────────────────────────────

class TestGraphBuild:
    def test_sorted_and_equal(self):
        a = Graph.build(["w", "v"], [Edge("b", "w", "v"), Edge("a", "v", "w")])
        b = Graph.build(["v", "w"], [Edge("a", "v", "w"), Edge("b", "w", "v")])
        assert a == b
        assert a.vertices == ("v", "w")
        assert hash(a) == hash(b)

    def test_undeclared_vertex(self):
        with pytest.raises(GraphStructureError) as info:
            Graph.build(["v"], [Edge("1", "v", "x")])
        assert info.value.edge_id == "1"

    def test_duplicate_edge(self):
        with pytest.raises(GraphStructureError):
            Graph.build(["v"], [Edge("1", "v", "v"), Edge("1", "v", "v")])

    def test_edge_and_vertex_ids_collide(self):
        with pytest.raises(GraphStructureError):
            Graph.build(["v"], [Edge("v", "v", "v")])

    def test_out_and_in_edges(self, f_graph):
        assert f_graph.out_edges("v") == ("e1", "e2")
        assert f_graph.in_edges("v") == ("e1", "e3")
        assert f_graph.special_edge("w") == "e3"

    def test_adjacency_matrix(self, f_graph):
        np.testing.assert_array_equal(f_graph.adjacency_matrix(), [[1, 1], [1, 0]])

    def test_to_networkx(self, o2):
        G = o2.to_networkx()
        assert G.number_of_edges() == 2
        assert set(G["v"]["v"]) == {"1", "2"}


# ── Paths ─────────────────────────────────────────────────────────────

class TestPaths:
    def test_parse_string(self, o2):
        p = o2.path("121")
        assert p.edges == ("1", "2", "1")
        assert p.anchor == "v" and p.end == "v"
        assert str(p) == "121"

    def test_parse_multichar_ids(self, f_graph):
        assert f_graph.path("e2e3e1").edges == ("e2", "e3", "e1")
        assert f_graph.path("e2.e3").edges == ("e2", "e3")
        assert f_graph.path(["e1", "e2"]).end == "w"

    def test_parse_prefix_ids(self):
        g = Graph.build(["v"], [Edge(eid, "v", "v") for eid in ["a", "ab", "b", "bc"]])
        with pytest.raises(PathError, match="separate"):
            g.path("ab")
        assert g.path("a.b").edges == ("a", "b")
        assert g.path("ab.a").edges == ("ab", "a")
        assert g.path("ba").edges == ("b", "a")
        # longest match would take "ab" and then fail on "c"
        assert g.path("abc").edges == ("a", "bc")

    def test_vertex_path(self, f_graph):
        p = f_graph.path("w")
        assert p.is_vertex
        assert p.length == 0
        assert str(p) == "w"

    def test_not_composable(self, f_graph):
        with pytest.raises(PathError):
            f_graph.path("e3e3")

    def test_unknown_edge(self, o2):
        with pytest.raises(PathError):
            o2.path("13")

    def test_path_needs_range(self):
        with pytest.raises(PathError):
            Path("v", ("1",))

    def test_prefix_concat_remainder(self, o2):
        a, b = o2.path("12"), o2.path("1221")
        assert is_prefix(a, b)
        assert not is_prefix(b, a)
        assert is_prefix(o2.path("v"), a)
        assert concat(a, o2.path("21")) == b
        assert remainder(a, b) == o2.path("21")
        with pytest.raises(PathError):
            remainder(o2.path("2"), b)

    def test_initial(self, o2):
        p = o2.path("1221")
        assert o2.initial(p, 2) == o2.path("12")
        assert o2.initial(p, 0).is_vertex
        assert o2.initial(p, 9) == p

    def test_paths_from(self, o2):
        assert [str(p) for p in paths_from(o2, "v", 2)] == ["11", "12", "21", "22"]
        with pytest.raises(InputError):
            paths_from(o2, "v", -1)

    def test_all_paths_count(self, f_graph):
        # entries of A^3 count the length-3 paths
        A = f_graph.adjacency_matrix()
        assert len(all_paths(f_graph, 3)) == int(np.linalg.matrix_power(A, 3).sum())

    def test_cylinders(self, o2):
        cyl = cylinders(o2, [o2.path("1")], 2)
        assert {str(p) for p in cyl} == {"11", "12"}


# ── Partitions ────────────────────────────────────────────────────────

class TestPartitions:
    def test_partition(self, o2):
        assert is_partition(o2, "v", [o2.path(w) for w in ["1", "21", "22"]])

    def test_overlap(self, o2):
        assert not is_partition(o2, "v", [o2.path(w) for w in ["1", "12", "2"]])

    def test_gap(self, o2):
        assert not is_partition(o2, "v", [o2.path(w) for w in ["1", "21"]])

    def test_vertex_alone(self, o2):
        assert is_partition(o2, "v", [o2.path("v")])

    def test_empty(self, o2):
        assert not is_partition(o2, "v", [])

    def test_wrong_anchor(self, f_graph):
        with pytest.raises(PathError):
            is_partition(f_graph, "v", [f_graph.path("e3")])

    def test_partition_of_unity(self, f_graph):
        family = [f_graph.path(w) for w in ["e1", "e2", "e3"]]
        assert is_partition_of_unity(f_graph, family)
        assert not is_partition_of_unity(f_graph, family[:2])


# ── Standing assumptions ──────────────────────────────────────────────

class TestStandingAssumptions:
    def test_accepts_o2(self, o2):
        report = validate_standing_assumptions(o2)
        assert report.accepted

    def test_single_loop(self):
        g = Graph.build(["v"], [Edge("e", "v", "v")])
        report = validate_standing_assumptions(g)
        assert report.cycle_without_exit
        assert not report.accepted
        assert report.to_dict()["witness"] == ["e"]

    def test_sink_and_source(self):
        g = Graph.build(["a", "b"], [Edge("x", "a", "b"), Edge("y", "a", "a")])
        report = validate_standing_assumptions(g)
        assert report.sinks == ("b",)
        assert not report.has_source
        assert not report.accepted

    def test_cycle_with_exit(self, f_graph):
        assert validate_standing_assumptions(f_graph).accepted


class TestRandomGraph:
    @pytest.mark.parametrize("seed", range(20))
    def test_accepted(self, seed):
        g = random_graph(np.random.default_rng(seed))
        assert validate_standing_assumptions(g).accepted
        assert 1 <= len(g.vertices) <= 4

    def test_seed_stable(self):
        a = random_graph(np.random.default_rng(5))
        b = random_graph(np.random.default_rng(5))
        assert a == b
