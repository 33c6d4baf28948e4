"""Left-synchronization of coding graphs and the diagonal verdict.

A coding graph is left-synchronizing with delay m when any two paths of
length m carrying the same ℰ-label start at the same vertex. On graphs
with only non-negative edges this is decided on the pair graph, whose
vertices are pairs of distinct vertices sharing a letter: the graph is
synchronizing iff the pair graph is acyclic, and the least delay is one
more than its longest path.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterator, Optional

import networkx as nx
import numpy as np

from graphalg import settings
from graphalg.algebra.elements import (
    AlgebraElement,
    adjoint,
    diagonal_support,
    from_diagonal_support,
    graded_components,
    multiply,
    partial_isometry,
    projection,
)
from graphalg.algebra.unitary import PairSet, lambda_path
from graphalg.coding.graph import (
    CodingEdge,
    CodingGraph,
    CodingPath,
    CodingVertex,
    all_coding_paths,
    build,
    classify,
    e_label,
    group_by_e_label,
    image_of_path,
)
from graphalg.coding.splitting import SplittingResult, run_splitting_algorithm
from graphalg.defs import Classification, Outcome
from graphalg.errors import InvariantViolation, PreconditionError
from graphalg.graph import Path, all_paths, comparable, concat, is_prefix

logger = logging.getLogger(__name__)

PairNode = tuple[CodingVertex, CodingVertex]


# ── pair graph ────────────────────────────────────────────────────────

def _pair(x: CodingVertex, y: CodingVertex) -> PairNode:
    return (x, y) if x.key <= y.key else (y, x)


def pair_graph(cg: CodingGraph) -> nx.DiGraph:
    """Pairs of distinct vertices with equal letters, stepping along ℰ-equal edges."""
    by_letter: dict[str, list[CodingVertex]] = defaultdict(list)
    for v in cg.vertices:
        by_letter[v.e].append(v)
    G = nx.DiGraph()
    for group in by_letter.values():
        for i, x in enumerate(group):
            for y in group[i + 1:]:
                G.add_node(_pair(x, y))
    for x, y in list(G.nodes):
        for ex in cg.out_edges(x):
            for ey in cg.out_edges(y):
                if ex.dst != ey.dst and ex.dst.e == ey.dst.e:
                    G.add_edge((x, y), _pair(ex.dst, ey.dst))
    logger.debug("pair graph: %d vertices, %d edges", G.number_of_nodes(), G.number_of_edges())
    return G


@dataclass(frozen=True)
class SyncResult:
    synchronizing: bool
    delay: Optional[int] = None
    witness: tuple[CodingPath, ...] = ()


def _require_non_negative(cg: CodingGraph) -> None:
    found = classify(cg).classification
    if found is not Classification.ALL_NON_NEGATIVE:
        raise PreconditionError(f"coding graph must have only non-negative edges, found {found.value}")


def _witness_cycles(cg: CodingGraph, cycle: list[tuple[PairNode, PairNode]]) -> tuple[CodingPath, CodingPath]:
    edge_at = {(e.src, e.dst): e for e in cg.edges}
    a, b = cycle[0][0]
    first = CodingPath(a)
    second = CodingPath(b)
    for lap in range(2):
        for _, target in cycle:
            p, q = target
            if (first.end, p) in edge_at and (second.end, q) in edge_at:
                step = (p, q)
            else:
                step = (q, p)
            first = first.extend(edge_at[(first.end, step[0])])
            second = second.extend(edge_at[(second.end, step[1])])
        if first.end == a:
            break
    return first, second


def is_left_synchronizing(cg: CodingGraph) -> SyncResult:
    _require_non_negative(cg)
    G = pair_graph(cg)
    if G.number_of_nodes() == 0:
        return SyncResult(True, 0)
    try:
        cycle = nx.find_cycle(G)
    except nx.NetworkXNoCycle:
        return SyncResult(True, nx.dag_longest_path_length(G) + 1)
    witness = _witness_cycles(cg, list(cycle))
    logger.debug("not synchronizing: ℰ-equal cycles %s and %s", *witness)
    return SyncResult(False, None, witness)


def minimal_delay_by_enumeration(cg: CodingGraph, max_len: int) -> Optional[int]:
    """The least m ≤ ``max_len`` with ℰ-equal length-m paths sharing their source."""
    for m in range(max_len + 1):
        groups = group_by_e_label(list(all_coding_paths(cg, m)), cg)
        if all(len({p.start for p in members}) == 1 for members in groups.values()):
            return m
    return None


# ── verdict ───────────────────────────────────────────────────────────

@dataclass
class DiagonalVerdict:
    outcome: Outcome
    splitting: SplittingResult
    delay: Optional[int] = None
    cycle: tuple[CodingEdge, ...] = ()
    witness: tuple[CodingPath, ...] = ()

    @property
    def is_auto(self) -> bool:
        return self.outcome is Outcome.AUTO

    def to_dict(self) -> dict:
        out: dict = {"outcome": self.outcome.value}
        if self.delay is not None:
            out["delay"] = self.delay
        if self.cycle:
            out["witness"] = [str(e) for e in self.cycle]
        elif self.witness:
            out["witness"] = [str(p) for p in self.witness]
        out["splits"] = [step.to_dict() for step in self.splitting.trace]
        return out


def diagonal_verdict(
    j: PairSet,
    fuel: Optional[int] = None,
    rng: Optional[np.random.Generator] = None,
) -> DiagonalVerdict:
    """Does Λ_J restrict to an automorphism of the diagonal?"""
    split = run_splitting_algorithm(j, fuel=fuel, rng=rng)
    if split.classification is Classification.HAS_NON_POSITIVE_CYCLE:
        return DiagonalVerdict(Outcome.NOT_AUTO_NON_POSITIVE_CYCLE, split, cycle=split.outcome.witness)
    sync = is_left_synchronizing(split.coding_graph)
    if sync.synchronizing:
        return DiagonalVerdict(Outcome.AUTO, split, delay=sync.delay)
    return DiagonalVerdict(Outcome.NOT_AUTO_NOT_SYNCHRONIZING, split, witness=sync.witness)


def non_image_witness(verdict: DiagonalVerdict) -> Optional[Path]:
    """A path μ whose projection P_μ lies outside Λ_J of the diagonal."""
    g = verdict.splitting.pairset.graph
    if verdict.outcome is Outcome.NOT_AUTO_NON_POSITIVE_CYCLE:
        mu = verdict.cycle[0].src.mu
        return concat(mu, g.edge_path(g.special_edge(mu.end)))
    if verdict.outcome is Outcome.NOT_AUTO_NOT_SYNCHRONIZING:
        return verdict.witness[0].start.mu
    return None


# ── the brute-force onto check ───────────────────────────────────────

@dataclass(frozen=True)
class OracleResult:
    in_image: bool
    depth: int
    family: tuple[Path, ...] = ()


def _image_families(j: PairSet, split: SplittingResult, length: int) -> Iterator[tuple[Path, list[Path]]]:
    """Λ_J(P_α) as a prefix-free family, for every α of the given length in path order."""
    cg = split.coding_graph
    if split.classification is Classification.ALL_NON_NEGATIVE:
        groups = group_by_e_label(list(all_coding_paths(cg, length - 1)), cg)
        for alpha in sorted(groups, key=lambda p: p.sort_key):
            yield alpha, [concat(p.start.mu, p.label_path()) for p in groups[alpha]]
        return
    for alpha in all_paths(j.graph, length):
        image = image_of_path(split.pairset, alpha, cg)
        yield alpha, diagonal_support(multiply(image, adjoint(image)))


def diagonal_onto_oracle(
    j: PairSet,
    mu: Path,
    depth: Optional[int] = None,
    split: Optional[SplittingResult] = None,
    cache: Optional[dict[int, list[tuple[Path, list[Path]]]]] = None,
) -> OracleResult:
    """Search for {α} of a common length with Λ_J(Σ P_α) = P_μ.

    Negative answers only cover lengths up to ``depth``. A ``cache`` dict
    keeps the image families per length and may be shared between calls
    on the same split.
    """
    depth = settings.oracle_depth() if depth is None else depth
    split = split or run_splitting_algorithm(j)
    for length in range(1, depth + 1):
        if cache is None:
            families = _image_families(j, split, length)
        else:
            if length not in cache:
                cache[length] = list(_image_families(j, split, length))
            families = cache[length]
        chosen: list[Path] = []
        straddles = False
        for alpha, family in families:
            inside = [is_prefix(mu, beta) for beta in family]
            if family and all(inside):
                chosen.append(alpha)
            elif any(inside) or any(comparable(mu, beta) for beta in family):
                straddles = True
                break
        if not straddles:
            logger.debug("P_%s is the image of %d projections of length %d", mu, len(chosen), length)
            return OracleResult(True, length, tuple(chosen))
    return OracleResult(False, depth)


# ── summands of Λ_J(S_α) ─────────────────────────────────────────────

def _require_auto(cg: CodingGraph) -> None:
    _require_non_negative(cg)
    if not is_left_synchronizing(cg).synchronizing:
        raise PreconditionError("coding graph is not left-synchronizing")


def summand_in_image(j: PairSet, xi: CodingPath, cg: Optional[CodingGraph] = None) -> AlgebraElement:
    """P_γ Λ_J(S_ℰ(ξ)) with S_γ = ℒ_s(ξ)ℒ_J(ξ); equals ℒ_s(ξ)ℒ_J(ξ)ℒ_r(ξ)*."""
    cg = cg or build(j)
    _require_auto(cg)
    g = j.graph
    gamma = concat(xi.start.mu, xi.label_path())
    result = multiply(projection(g, gamma), lambda_path(j, e_label(cg, xi)))
    if result != xi.summand(g):
        raise InvariantViolation(f"P_{gamma} Λ(S_ℰ) differs from the summand of {xi}")
    return result


def summand_preimage(
    j: PairSet, xi: CodingPath, depth: Optional[int] = None, cg: Optional[CodingGraph] = None
) -> AlgebraElement:
    """An element x with Λ_J(x) = ℒ_s(ξ)ℒ_J(ξ)ℒ_r(ξ)*."""
    cg = cg or build(j)
    _require_auto(cg)
    gamma = concat(xi.start.mu, xi.label_path())
    found = diagonal_onto_oracle(j, gamma, depth)
    if not found.in_image:
        raise PreconditionError(f"P_{gamma} not reached up to depth {found.depth}")
    g = j.graph
    return multiply(from_diagonal_support(g, found.family), partial_isometry(g, e_label(cg, xi)))


# ── even-degree obstruction ──────────────────────────────────────────

@dataclass(frozen=True)
class ObstructionReport:
    degrees: dict = field(default_factory=dict)

    @property
    def all_even(self) -> bool:
        return all(d % 2 == 0 for ds in self.degrees.values() for d in ds)

    @property
    def fires(self) -> bool:
        """Every generator lands in the even-degree span, so Λ_J is not onto."""
        return self.all_even

    def to_dict(self) -> dict:
        return {
            "degrees": {e: list(ds) for e, ds in self.degrees.items()},
            "all_even": self.all_even,
            "not_surjective": self.fires,
        }


def even_degree_obstruction(j: PairSet) -> ObstructionReport:
    g = j.graph
    degrees = {
        e.id: tuple(graded_components(lambda_path(j, g.edge_path(e.id))))
        for e in g.edges
    }
    return ObstructionReport(degrees)
