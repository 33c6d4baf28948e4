"""The labeled coding graph of a pair set.

Each pair (μ, eκ) of J becomes a vertex whose letter is ``e``. There is an
edge from (μ₁, e₁κ₁) to (μ₂, e₂κ₂) exactly when S_{κ₁}* S_{μ₂} is nonzero,
and that product is the edge label: S_γ, P_v or S_γ*.

Usage:
    from graphalg.coding.graph import build, classify

    cg = build(j)
    for edge in cg.edges:
        print(edge.src, edge.dst, edge.label, edge.degree)
    classify(cg).classification
"""

from __future__ import annotations

import logging
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

import networkx as nx
import pandas as pd

from graphalg.algebra.elements import (
    AlgebraElement,
    adjoint,
    multiply,
    partial_isometry,
    reduce_star_product,
    vertex_projection,
)
from graphalg.algebra.unitary import PairSet
from graphalg.defs import Classification, LabelKind
from graphalg.errors import InputError, PathError, PreconditionError
from graphalg.graph import Graph, Path, concat, is_partition, remainder

logger = logging.getLogger(__name__)


# ── vertices, labels, edges ──────────────────────────────────────────

@dataclass(frozen=True)
class CodingVertex:
    """The pair (μ, eκ) viewed as a vertex; its letter is ``e``."""
    mu: Path
    e: str
    kappa: Path

    @property
    def nu(self) -> Path:
        return Path(self.mu.anchor, (self.e,) + self.kappa.edges, self.kappa.end)

    @property
    def key(self) -> tuple:
        return (self.mu.sort_key, self.nu.sort_key)

    def __str__(self) -> str:
        return f"({self.mu},{self.nu})"


@dataclass(frozen=True)
class CodingLabel:
    """A tagged edge label: S_path, P_vertex or S_path*."""
    kind: LabelKind
    path: Path

    @property
    def degree(self) -> int:
        return int(self.kind) * self.path.length

    def element(self, g: Graph) -> AlgebraElement:
        if self.kind is LabelKind.ZERO:
            return vertex_projection(g, self.path.anchor)
        s = partial_isometry(g, self.path)
        return s if self.kind is LabelKind.POSITIVE else adjoint(s)

    def __str__(self) -> str:
        if self.kind is LabelKind.ZERO:
            return f"P_{self.path.anchor}"
        star = "^*" if self.kind is LabelKind.NEGATIVE else ""
        return f"S_{self.path}{star}"


@dataclass(frozen=True)
class CodingEdge:
    src: CodingVertex
    dst: CodingVertex
    label: CodingLabel

    @property
    def degree(self) -> int:
        return self.label.degree

    @property
    def key(self) -> tuple:
        return (self.src.key, self.dst.key)

    def __str__(self) -> str:
        return f"{self.src} -> {self.dst} [{self.label}]"


def edge_label(src: CodingVertex, dst: CodingVertex) -> Optional[CodingLabel]:
    """S_{κ₁}* S_{μ₂} as a tagged label, or None when it vanishes."""
    product = reduce_star_product(src.kappa, dst.mu)
    if product is None:
        return None
    sign, gamma = product
    if gamma.is_vertex:
        return CodingLabel(LabelKind.ZERO, gamma)
    return CodingLabel(LabelKind.POSITIVE if sign > 0 else LabelKind.NEGATIVE, gamma)


def edge_degree(edge: CodingEdge) -> int:
    return edge.degree


# ── the graph ─────────────────────────────────────────────────────────

@dataclass(frozen=True)
class CodingGraph:
    pairset: PairSet
    vertices: tuple[CodingVertex, ...]
    edges: tuple[CodingEdge, ...]
    _out: dict = field(init=False, repr=False, compare=False)
    _in: dict = field(init=False, repr=False, compare=False)
    _by_letter: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        out: dict[CodingVertex, list[CodingEdge]] = {v: [] for v in self.vertices}
        inn: dict[CodingVertex, list[CodingEdge]] = {v: [] for v in self.vertices}
        by_letter: dict[tuple[CodingVertex, str], list[CodingEdge]] = defaultdict(list)
        for edge in self.edges:
            out[edge.src].append(edge)
            inn[edge.dst].append(edge)
            by_letter[(edge.src, edge.dst.e)].append(edge)
        object.__setattr__(self, "_out", {v: tuple(es) for v, es in out.items()})
        object.__setattr__(self, "_in", {v: tuple(es) for v, es in inn.items()})
        object.__setattr__(self, "_by_letter", {k: tuple(es) for k, es in by_letter.items()})

    @property
    def graph(self) -> Graph:
        return self.pairset.graph

    def out_edges(self, v: CodingVertex) -> tuple[CodingEdge, ...]:
        return self._out[v]

    def in_edges(self, v: CodingVertex) -> tuple[CodingEdge, ...]:
        return self._in[v]

    def out_edges_to_letter(self, v: CodingVertex, letter: str) -> tuple[CodingEdge, ...]:
        return self._by_letter.get((v, letter), ())

    def vertex_for(self, mu: Path) -> CodingVertex:
        """The vertex J_μ."""
        for v in self.vertices:
            if v.mu == mu:
                return v
        raise PreconditionError(f"{mu} is not a first component")

    def negative_edges(self) -> list[CodingEdge]:
        return [e for e in self.edges if e.label.kind is LabelKind.NEGATIVE]

    def to_networkx(self) -> nx.DiGraph:
        G = nx.DiGraph()
        G.add_nodes_from(self.vertices)
        for e in self.edges:
            G.add_edge(e.src, e.dst, label=str(e.label), degree=e.degree, edge=e)
        return G

    def summary(self) -> dict:
        return {
            "vertices": len(self.vertices),
            "edges": len(self.edges),
            "labels": dict(sorted(Counter(str(e.label) for e in self.edges).items())),
            "degrees": dict(sorted(Counter(e.degree for e in self.edges).items())),
        }

    def to_dataframe(self) -> pd.DataFrame:
        return pd.DataFrame(
            [
                {
                    "src": str(e.src),
                    "dst": str(e.dst),
                    "label": str(e.label),
                    "kind": e.label.kind.name.lower(),
                    "degree": e.degree,
                }
                for e in self.edges
            ],
            columns=["src", "dst", "label", "kind", "degree"],
        )


def build(j: PairSet) -> CodingGraph:
    g = j.graph
    vertices = sorted(
        (CodingVertex(mu, nu.first, remainder(g.edge_path(nu.first), nu)) for mu, nu in j.pairs),
        key=lambda v: v.key,
    )
    edges = []
    for src in vertices:
        for dst in vertices:
            label = edge_label(src, dst)
            if label is not None:
                edges.append(CodingEdge(src, dst, label))
    logger.debug("coding graph: %d vertices, %d edges", len(vertices), len(edges))
    return CodingGraph(j, tuple(vertices), tuple(edges))


# ── classification ────────────────────────────────────────────────────

@dataclass(frozen=True)
class ClassifyResult:
    classification: Classification
    witness: tuple[CodingEdge, ...] = ()


def non_positive_cycle(cg: CodingGraph) -> tuple[CodingEdge, ...]:
    """A cycle of edges of degree ≤ 0, or ``()`` when there is none."""
    G = nx.DiGraph()
    for e in cg.edges:
        if e.degree <= 0:
            G.add_edge(e.src, e.dst, edge=e)
    try:
        cycle = nx.find_cycle(G)
    except nx.NetworkXNoCycle:
        return ()
    return tuple(G.edges[u, v]["edge"] for u, v in cycle)


def classify(cg: CodingGraph) -> ClassifyResult:
    witness = non_positive_cycle(cg)
    if witness:
        return ClassifyResult(Classification.HAS_NON_POSITIVE_CYCLE, witness)
    if cg.negative_edges():
        return ClassifyResult(Classification.HAS_NEGATIVE_EDGES)
    return ClassifyResult(Classification.ALL_NON_NEGATIVE)


# ── coding paths ──────────────────────────────────────────────────────

@dataclass(frozen=True)
class CodingPath:
    """A path in a coding graph: a start vertex and a run of edges."""
    start: CodingVertex
    edges: tuple[CodingEdge, ...] = ()

    def __post_init__(self) -> None:
        current = self.start
        for e in self.edges:
            if e.src != current:
                raise PathError(f"coding edges do not compose at {current}")
            current = e.dst

    @property
    def end(self) -> CodingVertex:
        return self.edges[-1].dst if self.edges else self.start

    @property
    def length(self) -> int:
        return len(self.edges)

    @property
    def vertices(self) -> list[CodingVertex]:
        return [self.start] + [e.dst for e in self.edges]

    def extend(self, e: CodingEdge) -> CodingPath:
        return CodingPath(self.start, self.edges + (e,))

    def ls(self, g: Graph) -> AlgebraElement:
        """ℒ_s: S_μ of the start vertex."""
        return partial_isometry(g, self.start.mu)

    def lr(self, g: Graph) -> AlgebraElement:
        """ℒ_r: S_κ of the end vertex."""
        return partial_isometry(g, self.end.kappa)

    def lj(self, g: Graph) -> AlgebraElement:
        """ℒ_J: the product of the edge labels."""
        result = vertex_projection(g, self.start.mu.end)
        for e in self.edges:
            result = multiply(result, e.label.element(g))
        return result

    def label_path(self) -> Path:
        """The path γ with ℒ_J = S_γ, for paths with no negative edge."""
        gamma = Path(self.start.mu.end)
        for e in self.edges:
            if e.label.kind is LabelKind.NEGATIVE:
                raise PreconditionError(f"{e} is a negative edge")
            if e.label.kind is LabelKind.POSITIVE:
                gamma = concat(gamma, e.label.path)
        return gamma

    def summand(self, g: Graph) -> AlgebraElement:
        """ℒ_s ℒ_J ℒ_r*."""
        return multiply(multiply(self.ls(g), self.lj(g)), adjoint(self.lr(g)))

    def __str__(self) -> str:
        return " -> ".join(str(v) for v in self.vertices)


def e_label(cg: CodingGraph, omega: CodingPath) -> Path:
    """ℰ(ω): the letters of the visited vertices, a path in E of length |ω| + 1."""
    for v in omega.vertices:
        if v not in cg._out:
            raise InputError(f"{v} is not a vertex of this coding graph")
    return cg.graph.make_path([v.e for v in omega.vertices])


def paths_from(cg: CodingGraph, v: CodingVertex, k: int) -> list[CodingPath]:
    frontier = [CodingPath(v)]
    for _ in range(k):
        frontier = [p.extend(e) for p in frontier for e in cg.out_edges(p.end)]
    return frontier


def all_coding_paths(cg: CodingGraph, k: int) -> Iterator[CodingPath]:
    for v in cg.vertices:
        yield from paths_from(cg, v, k)


def paths_with_label(
    cg: CodingGraph, alpha: Path, start: Optional[CodingVertex] = None
) -> list[CodingPath]:
    """Coding paths ω with ℰ(ω) = α, optionally from a fixed start vertex."""
    if alpha.is_vertex:
        raise InputError("an ℰ-label has at least one letter")
    starts = [start] if start is not None else cg.vertices
    frontier = [CodingPath(v) for v in starts if v.e == alpha.first]
    for letter in alpha.edges[1:]:
        frontier = [p.extend(e) for p in frontier for e in cg.out_edges_to_letter(p.end, letter)]
    return frontier


def image_of_path(j: PairSet, alpha: Path, cg: Optional[CodingGraph] = None) -> AlgebraElement:
    """Λ_J(S_α) as the sum of ℒ_s ℒ_J ℒ_r* over coding paths with ℰ-label α."""
    cg = cg or build(j)
    result = AlgebraElement(j.graph)
    for omega in paths_with_label(cg, alpha):
        result = result + omega.summand(j.graph)
    return result


def project_image(
    j: PairSet, mu: Path, delta: Path, cg: Optional[CodingGraph] = None
) -> AlgebraElement:
    """P_μ Λ_J(S_δ) for μ ∈ J₁, from the coding paths leaving J_μ."""
    cg = cg or build(j)
    start = cg.vertex_for(mu)
    g = j.graph
    result = AlgebraElement(g)
    for omega in paths_with_label(cg, delta, start=start):
        term = multiply(partial_isometry(g, mu), multiply(omega.lj(g), adjoint(omega.lr(g))))
        result = result + term
    return result


# ── structural checks ────────────────────────────────────────────────

@dataclass(frozen=True)
class ResolvingReport:
    right_resolving: bool
    right_witness: tuple[CodingEdge, ...] = ()
    left_checked: bool = False
    left_resolving: Optional[bool] = None
    left_witness: tuple[CodingEdge, ...] = ()

    @property
    def passed(self) -> bool:
        return self.right_resolving and self.left_resolving is not False


def check_resolving(cg: CodingGraph) -> ResolvingReport:
    """Right-resolving in ℒ_J always; left-resolving in ℰ when all edges are non-negative."""
    right_witness: tuple[CodingEdge, ...] = ()
    for v in cg.vertices:
        seen: dict[CodingLabel, CodingEdge] = {}
        for e in cg.out_edges(v):
            if e.label in seen:
                right_witness = (seen[e.label], e)
                break
            seen[e.label] = e
        if right_witness:
            break

    if classify(cg).classification is not Classification.ALL_NON_NEGATIVE:
        return ResolvingReport(not right_witness, right_witness)

    left_witness: tuple[CodingEdge, ...] = ()
    for v in cg.vertices:
        seen_letters: dict[str, CodingEdge] = {}
        for e in cg.in_edges(v):
            if e.src.e in seen_letters:
                left_witness = (seen_letters[e.src.e], e)
                break
            seen_letters[e.src.e] = e
        if left_witness:
            break
    return ResolvingReport(not right_witness, right_witness, True, not left_witness, left_witness)


def non_positive_emitters_are_lonely(cg: CodingGraph) -> bool:
    """A vertex that emits a non-positive edge emits nothing else."""
    return all(
        len(cg.out_edges(v)) == 1
        for v in cg.vertices
        if any(e.degree <= 0 for e in cg.out_edges(v))
    )


def out_path_labels_partition(cg: CodingGraph, v: CodingVertex, length: int) -> bool:
    """The ℒ_J-labels of the length-``length`` paths leaving ``v`` partition r(μ)."""
    labels = [p.label_path() for p in paths_from(cg, v, length)]
    return is_partition(cg.graph, v.mu.end, labels)


def range_label_orthogonality(cg: CodingGraph, max_len: int) -> list[tuple[CodingPath, CodingPath]]:
    """Pairs of ℰ-equal coding paths violating ℒ_r(ω)*ℒ_r(ξ) ≠ 0 ⇔ ω = ξ.

    Meaningful on graphs with only non-negative edges and no non-positive cycle.
    """
    g = cg.graph
    violations: list[tuple[CodingPath, CodingPath]] = []
    for k in range(max_len + 1):
        groups: dict[Path, list[CodingPath]] = defaultdict(list)
        for omega in all_coding_paths(cg, k):
            groups[e_label(cg, omega)].append(omega)
        for members in groups.values():
            for a in members:
                for b in members:
                    overlap = bool(multiply(adjoint(a.lr(g)), b.lr(g)))
                    if overlap != (a == b):
                        violations.append((a, b))
    return violations


def group_by_e_label(paths: Sequence[CodingPath], cg: CodingGraph) -> dict[Path, list[CodingPath]]:
    groups: dict[Path, list[CodingPath]] = defaultdict(list)
    for p in paths:
        groups[e_label(cg, p)].append(p)
    return dict(groups)
