"""Tests for graphalg.coding.graph – coding graphs, ℰ-labels and images of paths."""

from collections import Counter

import pytest

from graphalg.algebra.elements import multiply, partial_isometry, projection, zero
from graphalg.algebra.unitary import build_unitary, lambda_apply
from graphalg.coding.graph import (
    CodingEdge,
    CodingGraph,
    CodingLabel,
    CodingPath,
    all_coding_paths,
    build,
    check_resolving,
    classify,
    e_label,
    edge_degree,
    image_of_path,
    non_positive_emitters_are_lonely,
    out_path_labels_partition,
    paths_with_label,
    project_image,
    range_label_orthogonality,
)
from graphalg.defs import Classification, LabelKind
from graphalg.errors import InputError, PathError, PreconditionError
from graphalg.graph import Edge, Graph, all_paths
from graphalg.io.fixtures import load_fixture


@pytest.fixture
def o2():
    return Graph.build(["v"], [Edge("1", "v", "v"), Edge("2", "v", "v")])


@pytest.fixture
def intro():
    return load_fixture("intro").pairset


@pytest.fixture
def ex2():
    return load_fixture("ex2").pairset


@pytest.fixture
def nonpos():
    return load_fixture("nonpos").pairset


def edge_table(cg):
    return {(str(e.src), str(e.dst), str(e.label)) for e in cg.edges}


# ── build ─────────────────────────────────────────────────────────────

class TestBuild:
    def test_intro(self, intro):
        cg = build(intro)
        assert len(cg.vertices) == 3
        assert edge_table(cg) == {
            ("(1,22)", "(21,21)", "S_1"),
            ("(1,22)", "(22,1)", "S_2"),
            ("(21,21)", "(1,22)", "P_v"),
            ("(22,1)", "(1,22)", "S_1"),
            ("(22,1)", "(21,21)", "S_21"),
            ("(22,1)", "(22,1)", "S_22"),
        }

    def test_intro_label_multiset(self, intro):
        labels = Counter(str(e.label) for e in build(intro).edges)
        assert labels == Counter({"S_1": 2, "S_2": 1, "P_v": 1, "S_21": 1, "S_22": 1})

    def test_ex2_negative_edges(self, ex2):
        cg = build(ex2)
        assert (len(cg.vertices), len(cg.edges)) == (4, 9)
        negatives = {(str(e.src), str(e.dst), str(e.label)) for e in cg.negative_edges()}
        assert negatives == {("(11,121)", "(2,2)", "S_1^*"), ("(122,122)", "(2,2)", "S_2^*")}
        assert all(e.degree == -1 for e in cg.negative_edges())

    def test_identity(self, o2):
        cg = build(build_unitary(o2, [("1", "1"), ("2", "2")]))
        assert len(cg.edges) == 4
        assert all(e.label.kind is LabelKind.POSITIVE for e in cg.edges)
        assert sorted(str(e.label) for e in cg.edges) == ["S_1", "S_1", "S_2", "S_2"]

    def test_vertices_sorted(self, ex2):
        assert [str(v.mu) for v in build(ex2).vertices] == ["11", "121", "122", "2"]

    def test_vertex_for(self, ex2, o2):
        cg = build(ex2)
        v = cg.vertex_for(o2.path("121"))
        assert (v.e, str(v.kappa)) == ("1", "1")
        with pytest.raises(PreconditionError):
            cg.vertex_for(o2.path("12"))

    def test_summary_and_dataframe(self, intro):
        cg = build(intro)
        summary = cg.summary()
        assert summary["vertices"] == 3 and summary["edges"] == 6
        assert summary["degrees"] == {0: 1, 1: 3, 2: 2}
        df = cg.to_dataframe()
        assert len(df) == 6
        assert list(df.columns) == ["src", "dst", "label", "kind", "degree"]

    def test_to_networkx(self, intro):
        G = build(intro).to_networkx()
        assert G.number_of_nodes() == 3
        assert G.number_of_edges() == 6


class TestLabels:
    def test_degrees(self, o2):
        assert CodingLabel(LabelKind.POSITIVE, o2.path("21")).degree == 2
        assert CodingLabel(LabelKind.ZERO, o2.path("v")).degree == 0
        assert CodingLabel(LabelKind.NEGATIVE, o2.path("1")).degree == -1

    def test_edge_degree(self, ex2):
        degrees = sorted(edge_degree(e) for e in build(ex2).edges)
        assert degrees == [-1, -1, 1, 1, 2, 2, 2, 3, 3]

    def test_label_elements(self, o2):
        neg = CodingLabel(LabelKind.NEGATIVE, o2.path("1"))
        assert str(neg) == "S_1^*"
        assert multiply(neg.element(o2), partial_isometry(o2, o2.path("1"))) == CodingLabel(
            LabelKind.ZERO, o2.path("v")
        ).element(o2)


# ── classify ──────────────────────────────────────────────────────────

class TestClassify:
    def test_intro(self, intro):
        assert classify(build(intro)).classification is Classification.ALL_NON_NEGATIVE

    def test_ex2(self, ex2):
        assert classify(build(ex2)).classification is Classification.HAS_NEGATIVE_EDGES

    def test_nonpos(self, nonpos):
        result = classify(build(nonpos))
        assert result.classification is Classification.HAS_NON_POSITIVE_CYCLE
        (loop,) = result.witness
        assert str(loop.src) == str(loop.dst) == "(1,21)"
        assert str(loop.label) == "P_v"


# ── coding paths ──────────────────────────────────────────────────────

class TestCodingPaths:
    def test_e_label_vertex(self, intro, o2):
        cg = build(intro)
        v = cg.vertex_for(o2.path("21"))
        assert str(e_label(cg, CodingPath(v))) == "2"

    def test_e_label_edge(self, intro, o2):
        cg = build(intro)
        src, dst = cg.vertex_for(o2.path("22")), cg.vertex_for(o2.path("21"))
        (edge,) = [e for e in cg.out_edges(src) if e.dst == dst]
        assert str(e_label(cg, CodingPath(src, (edge,)))) == "12"

    def test_e_label_not_concatenative(self, intro):
        cg = build(intro)
        for omega in all_coding_paths(cg, 2):
            head = CodingPath(omega.start, omega.edges[:1])
            tail = CodingPath(omega.edges[0].dst, omega.edges[1:])
            assert e_label(cg, omega).length == e_label(cg, head).length + e_label(cg, tail).length - 1

    def test_broken_path(self, intro):
        cg = build(intro)
        a, b = cg.vertices[0], cg.vertices[1]
        with pytest.raises(PathError):
            CodingPath(b, (cg.out_edges(a)[0],))

    def test_label_path(self, intro, o2):
        cg = build(intro)
        start = cg.vertex_for(o2.path("22"))
        (to_b,) = [e for e in cg.out_edges(start) if str(e.label) == "S_21"]
        (back,) = cg.out_edges(to_b.dst)
        omega = CodingPath(start, (to_b, back))
        assert str(omega.label_path()) == "21"
        assert omega.lj(o2) == partial_isometry(o2, o2.path("21"))

    def test_label_path_rejects_negative(self, ex2):
        cg = build(ex2)
        neg = cg.negative_edges()[0]
        with pytest.raises(PreconditionError):
            CodingPath(neg.src, (neg,)).label_path()

    def test_paths_with_label_needs_letter(self, intro, o2):
        with pytest.raises(InputError):
            paths_with_label(build(intro), o2.path("v"))


# ── images of paths ───────────────────────────────────────────────────

class TestImageOfPath:
    def test_intro_first_edge(self, intro, o2):
        assert image_of_path(intro, o2.path("1")) == partial_isometry(o2, o2.path("22"))

    def test_ex2_first_edge(self, ex2, o2):
        assert image_of_path(ex2, o2.path("1")) == multiply(ex2.element, partial_isometry(o2, o2.path("1")))

    @pytest.mark.parametrize("name", ["intro", "ex2", "nonpos"])
    def test_matches_lambda(self, name):
        j = load_fixture(name).pairset
        g = j.graph
        cg = build(j)
        for k in range(1, 5):
            for alpha in all_paths(g, k):
                assert image_of_path(j, alpha, cg) == lambda_apply(j, partial_isometry(g, alpha))

    def test_project_image_zero(self, ex2, o2):
        assert project_image(ex2, o2.path("2"), o2.path("1")) == zero(o2)

    def test_project_image_matches(self, ex2, o2):
        cg = build(ex2)
        for mu in ex2.first_components:
            for k in range(1, 4):
                for delta in all_paths(o2, k):
                    expected = multiply(projection(o2, mu), lambda_apply(ex2, partial_isometry(o2, delta)))
                    assert project_image(ex2, mu, delta, cg) == expected

    def test_project_image_needs_first_component(self, ex2, o2):
        with pytest.raises(PreconditionError):
            project_image(ex2, o2.path("1"), o2.path("1"))


# ── structural checks ────────────────────────────────────────────────

class TestStructure:
    def test_resolving_intro(self, intro):
        report = check_resolving(build(intro))
        assert report.right_resolving
        assert report.left_checked and report.left_resolving
        assert report.passed

    def test_resolving_skips_left_with_negatives(self, ex2):
        report = check_resolving(build(ex2))
        assert report.right_resolving
        assert not report.left_checked
        assert report.left_resolving is None

    def test_duplicate_label_fails(self, intro, o2):
        cg = build(intro)
        src = cg.vertex_for(o2.path("22"))
        dst = cg.vertex_for(o2.path("1"))
        fake = CodingEdge(src, dst, CodingLabel(LabelKind.POSITIVE, o2.path("21")))
        mutated = CodingGraph(cg.pairset, cg.vertices, cg.edges + (fake,))
        report = check_resolving(mutated)
        assert not report.right_resolving
        assert not report.passed
        assert fake in report.right_witness

    @pytest.mark.parametrize("name", ["intro", "ex2", "nonpos"])
    def test_non_positive_emitters_are_lonely(self, name):
        assert non_positive_emitters_are_lonely(build(load_fixture(name).pairset))

    @pytest.mark.parametrize("length", [1, 2, 3, 4])
    def test_out_path_labels_partition(self, intro, length):
        cg = build(intro)
        assert all(out_path_labels_partition(cg, v, length) for v in cg.vertices)

    def test_range_labels_orthogonal(self, intro):
        assert range_label_orthogonality(build(intro), 4) == []
