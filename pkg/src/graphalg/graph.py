"""Finite directed multigraphs and path combinatorics.

Usage:
    from graphalg.graph import Graph, Edge, paths_from, is_partition

    o2 = Graph.build(["v"], [Edge("1", "v", "v"), Edge("2", "v", "v")])
    paths_from(o2, "v", 2)        # 11, 12, 21, 22
    is_partition(o2, "v", [o2.path("1"), o2.path("21"), o2.path("22")])

Vertex and edge ids are opaque strings. Every deterministic ordering in the
package is lexicographic on ids; a path sorts by its edge sequence first and
its anchor second.
"""

from __future__ import annotations

import logging
import string
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Union

import networkx as nx
import numpy as np

from graphalg.defs import RANDOM_GRAPH_ATTEMPTS, WORD_SEPARATORS
from graphalg.errors import GraphStructureError, InputError, PathError

logger = logging.getLogger(__name__)


# ── data structures ───────────────────────────────────────────────────

@dataclass(frozen=True)
class Edge:
    """One edge of a graph: id, source vertex, range vertex."""
    id: str
    src: str
    dst: str


@dataclass(frozen=True)
class Path:
    """A finite path anchored at its source vertex.

    A path with no edges is the vertex ``anchor`` itself; ``end`` is the
    range vertex and equals ``anchor`` in that case.
    """
    anchor: str
    edges: tuple[str, ...] = ()
    end: str = ""

    def __post_init__(self) -> None:
        if not self.end:
            if self.edges:
                raise PathError("a path with edges needs an explicit range vertex")
            object.__setattr__(self, "end", self.anchor)
        if not isinstance(self.edges, tuple):
            object.__setattr__(self, "edges", tuple(self.edges))

    @property
    def source(self) -> str:
        return self.anchor

    @property
    def range(self) -> str:
        return self.end

    @property
    def length(self) -> int:
        return len(self.edges)

    @property
    def is_vertex(self) -> bool:
        return not self.edges

    @property
    def sort_key(self) -> tuple:
        return (self.edges, self.anchor)

    @property
    def first(self) -> str:
        return self.edges[0]

    @property
    def last(self) -> str:
        return self.edges[-1]

    def __str__(self) -> str:
        return "".join(self.edges) if self.edges else self.anchor


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of checking the standing assumptions on a graph."""
    sinks: tuple[str, ...] = ()
    sources: tuple[str, ...] = ()
    exitless_cycle: tuple[str, ...] = ()

    @property
    def has_sink(self) -> bool:
        return bool(self.sinks)

    @property
    def has_source(self) -> bool:
        return bool(self.sources)

    @property
    def cycle_without_exit(self) -> bool:
        return bool(self.exitless_cycle)

    @property
    def accepted(self) -> bool:
        return not (self.has_sink or self.has_source or self.cycle_without_exit)

    def to_dict(self) -> dict:
        return {
            "accepted": self.accepted,
            "has_sink": self.has_sink,
            "has_source": self.has_source,
            "cycle_without_exit": self.cycle_without_exit,
            "sinks": list(self.sinks),
            "sources": list(self.sources),
            "witness": list(self.exitless_cycle),
        }


@dataclass(frozen=True)
class Graph:
    """A finite directed multigraph.

    Build with ``Graph.build``, which sorts vertices and edges so that equal
    graphs compare and hash equal.
    """
    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]
    _edge_map: dict = field(init=False, repr=False, compare=False)
    _out: dict = field(init=False, repr=False, compare=False)
    _in: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if len(set(self.vertices)) != len(self.vertices):
            raise GraphStructureError("duplicate vertex id")
        declared = set(self.vertices)
        edge_map: dict[str, Edge] = {}
        out: dict[str, list[str]] = {v: [] for v in self.vertices}
        inn: dict[str, list[str]] = {v: [] for v in self.vertices}
        for e in self.edges:
            if e.id in edge_map:
                raise GraphStructureError(f"duplicate edge id {e.id!r}", edge_id=e.id)
            if e.id in declared:
                raise GraphStructureError(f"edge id {e.id!r} collides with a vertex id", edge_id=e.id)
            if e.src not in declared or e.dst not in declared:
                raise GraphStructureError(
                    f"edge {e.id!r} joins undeclared vertices {e.src!r} -> {e.dst!r}",
                    edge_id=e.id,
                )
            edge_map[e.id] = e
            out[e.src].append(e.id)
            inn[e.dst].append(e.id)
        object.__setattr__(self, "_edge_map", edge_map)
        object.__setattr__(self, "_out", {v: tuple(sorted(ids)) for v, ids in out.items()})
        object.__setattr__(self, "_in", {v: tuple(sorted(ids)) for v, ids in inn.items()})

    @classmethod
    def build(cls, vertices: Iterable[str], edges: Iterable[Edge]) -> Graph:
        return cls(tuple(sorted(vertices)), tuple(sorted(edges, key=lambda e: e.id)))

    # ── lookups ───────────────────────────────────────────────────────

    def has_vertex(self, v: str) -> bool:
        return v in self._out

    def edge(self, edge_id: str) -> Edge:
        try:
            return self._edge_map[edge_id]
        except KeyError:
            raise PathError(f"unknown edge {edge_id!r}") from None

    def source(self, edge_id: str) -> str:
        return self.edge(edge_id).src

    def range(self, edge_id: str) -> str:
        return self.edge(edge_id).dst

    def out_edges(self, v: str) -> tuple[str, ...]:
        self._require_vertex(v)
        return self._out[v]

    def in_edges(self, v: str) -> tuple[str, ...]:
        self._require_vertex(v)
        return self._in[v]

    def special_edge(self, v: str) -> str:
        """The lexicographically least edge out of ``v``."""
        outs = self.out_edges(v)
        if not outs:
            raise PathError(f"vertex {v!r} emits no edges")
        return outs[0]

    def _require_vertex(self, v: str) -> None:
        if v not in self._out:
            raise PathError(f"unknown vertex {v!r}")

    # ── paths ─────────────────────────────────────────────────────────

    def vertex_path(self, v: str) -> Path:
        self._require_vertex(v)
        return Path(v)

    def edge_path(self, edge_id: str) -> Path:
        e = self.edge(edge_id)
        return Path(e.src, (e.id,), e.dst)

    def make_path(self, edges: Sequence[str], anchor: Optional[str] = None) -> Path:
        """Build a path from an edge-id sequence, checking composability."""
        edges = tuple(edges)
        if not edges:
            if anchor is None:
                raise PathError("an empty path needs an anchor vertex")
            return self.vertex_path(anchor)
        first = self.edge(edges[0])
        if anchor is not None and anchor != first.src:
            raise PathError(f"path {''.join(edges)!r} does not start at {anchor!r}")
        current = first.dst
        for eid in edges[1:]:
            e = self.edge(eid)
            if e.src != current:
                raise PathError(
                    f"edges do not compose: range {current!r} is not the source of {eid!r}"
                )
            current = e.dst
        return Path(first.src, edges, current)

    def initial(self, p: Path, n: int) -> Path:
        """The initial segment of ``p`` of length ``n``."""
        if n >= p.length:
            return p
        return self.make_path(p.edges[:n], p.anchor)

    def tokenize(self, text: str) -> tuple[str, ...]:
        """Split a word into edge ids.

        Separators are honoured when present; otherwise the word must split
        into edge ids in exactly one way. Ids that are prefixes of other ids
        can make a bare word ambiguous, and such words need separators.
        """
        text = text.strip()
        if any(sep in text for sep in WORD_SEPARATORS):
            parts = text
            for sep in WORD_SEPARATORS:
                parts = parts.replace(sep, " ")
            return tuple(p for p in parts.split(" ") if p)
        # readings of text[i:], at most two kept
        readings: list[list[tuple[str, ...]]] = [[] for _ in text] + [[()]]
        for i in range(len(text) - 1, -1, -1):
            for eid in self._edge_map:
                if eid and text.startswith(eid, i):
                    readings[i].extend((eid,) + rest for rest in readings[i + len(eid)])
            del readings[i][2:]
        if not readings[0]:
            raise PathError(f"cannot read {text!r} as a word over the edge ids")
        if len(readings[0]) > 1:
            first, second = (".".join(r) for r in readings[0])
            raise PathError(f"{text!r} reads as both {first} and {second}; separate the edge ids with '.'")
        return readings[0][0]

    def path(self, word: Union[str, Sequence[str]], anchor: Optional[str] = None) -> Path:
        """Parse ``word`` (a string or an edge-id sequence) into a path.

        An empty word, or a word equal to a vertex id, is a vertex path.
        """
        if isinstance(word, str):
            if word in self._out and word not in self._edge_map:
                return self.vertex_path(word)
            edges = self.tokenize(word) if word else ()
        else:
            edges = tuple(word)
        return self.make_path(edges, anchor)

    def word(self, p: Path) -> str:
        return str(p)

    # ── conversions ───────────────────────────────────────────────────

    def to_networkx(self) -> nx.MultiDiGraph:
        G = nx.MultiDiGraph()
        G.add_nodes_from(self.vertices)
        for e in self.edges:
            G.add_edge(e.src, e.dst, key=e.id)
        return G

    def adjacency_matrix(self) -> np.ndarray:
        index = {v: i for i, v in enumerate(self.vertices)}
        A = np.zeros((len(self.vertices), len(self.vertices)), dtype=np.int64)
        for e in self.edges:
            A[index[e.src], index[e.dst]] += 1
        return A


# ── path operations ───────────────────────────────────────────────────

def is_prefix(a: Path, b: Path) -> bool:
    """True iff ``a`` is an initial segment of ``b`` (a vertex is a prefix of paths leaving it)."""
    return a.anchor == b.anchor and b.edges[: len(a.edges)] == a.edges


def comparable(a: Path, b: Path) -> bool:
    return is_prefix(a, b) or is_prefix(b, a)


def concat(a: Path, b: Path) -> Path:
    if a.end != b.anchor:
        raise PathError(f"cannot compose {a} (range {a.end!r}) with {b} (source {b.anchor!r})")
    return Path(a.anchor, a.edges + b.edges, b.end)


def remainder(prefix: Path, p: Path) -> Path:
    """The path γ with ``p = prefix·γ``."""
    if not is_prefix(prefix, p):
        raise PathError(f"{prefix} is not a prefix of {p}")
    return Path(prefix.end, p.edges[prefix.length:], p.end)


def paths_from(g: Graph, v: str, k: int) -> list[Path]:
    """All paths of length exactly ``k`` leaving ``v``, lexicographic by edge ids."""
    if k < 0:
        raise InputError(f"path length must be non-negative, got {k}")
    frontier = [g.vertex_path(v)]
    for _ in range(k):
        frontier = [
            Path(p.anchor, p.edges + (eid,), g.range(eid))
            for p in frontier
            for eid in g.out_edges(p.end)
        ]
    return frontier


def all_paths(g: Graph, k: int) -> list[Path]:
    """Every path of length ``k`` in ``g``, ordered by edge sequence."""
    found = [p for v in g.vertices for p in paths_from(g, v, k)]
    return sorted(found, key=lambda p: p.sort_key)


def cylinders(g: Graph, family: Iterable[Path], length: int) -> set[Path]:
    """Length-``length`` paths having some member of ``family`` as a prefix."""
    out: set[Path] = set()
    for x in family:
        if x.length > length:
            raise InputError(f"cannot refine {x} to length {length}")
        for tail in paths_from(g, x.end, length - x.length):
            out.add(concat(x, tail))
    return out


def is_partition(g: Graph, v: str, ps: Sequence[Path]) -> bool:
    """True iff the cylinders of ``ps`` are pairwise disjoint and cover Z(v)."""
    for p in ps:
        if p.anchor != v:
            raise PathError(f"path {p} is not anchored at {v!r}")
    if not ps:
        return False
    depth = max(p.length for p in ps)
    for q in paths_from(g, v, depth):
        if sum(1 for p in ps if is_prefix(p, q)) != 1:
            return False
    return True


def is_partition_of_unity(g: Graph, ps: Sequence[Path]) -> bool:
    """True iff ``ps`` restricted to each vertex is a partition of that vertex."""
    by_vertex: dict[str, list[Path]] = {v: [] for v in g.vertices}
    for p in ps:
        if not g.has_vertex(p.anchor):
            raise PathError(f"unknown vertex {p.anchor!r}")
        by_vertex[p.anchor].append(p)
    return all(is_partition(g, v, members) for v, members in by_vertex.items())


# ── standing assumptions ──────────────────────────────────────────────

def validate_standing_assumptions(g: Graph) -> ValidationReport:
    """Check for sinks, sources and cycles without exits."""
    sinks = tuple(v for v in g.vertices if not g.out_edges(v))
    sources = tuple(v for v in g.vertices if not g.in_edges(v))

    # a cycle has no exit iff each of its vertices emits only the cycle edge
    lonely = nx.MultiDiGraph()
    for v in g.vertices:
        outs = g.out_edges(v)
        if len(outs) == 1:
            lonely.add_edge(v, g.range(outs[0]), key=outs[0])
    try:
        cycle = nx.find_cycle(lonely)
        witness = tuple(key for _, _, key in cycle)
    except nx.NetworkXNoCycle:
        witness = ()

    report = ValidationReport(sinks=sinks, sources=sources, exitless_cycle=witness)
    logger.debug("validated graph with %d vertices: %s", len(g.vertices), report)
    return report


# ── random graphs ─────────────────────────────────────────────────────

def random_graph(
    rng: np.random.Generator,
    max_vertices: int = 4,
    max_out_degree: int = 2,
) -> Graph:
    """Draw a graph satisfying the standing assumptions.

    Edge ids are single lowercase letters, so words can be typed without
    separators.
    """
    letters = string.ascii_lowercase
    if max_vertices * max_out_degree > len(letters):
        raise InputError("too many potential edges for single-letter edge ids")
    for attempt in range(RANDOM_GRAPH_ATTEMPTS):
        n = int(rng.integers(1, max_vertices + 1))
        vertices = [f"v{i}" for i in range(n)]
        edges: list[Edge] = []
        for v in vertices:
            degree = int(rng.integers(1, max_out_degree + 1))
            for _ in range(degree):
                target = vertices[int(rng.integers(0, n))]
                edges.append(Edge(letters[len(edges)], v, target))
        g = Graph.build(vertices, edges)
        if validate_standing_assumptions(g).accepted:
            logger.debug("random graph accepted after %d attempt(s)", attempt + 1)
            return g
    raise InputError(f"no admissible graph after {RANDOM_GRAPH_ATTEMPTS} attempts")
