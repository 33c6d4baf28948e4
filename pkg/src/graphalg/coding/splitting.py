"""Splitting coding-graph vertices until no negative edge is left.

Splitting J at a vertex (μ, eκ) replaces that pair by the pairs
(μf, eκf) over the edges f leaving r(μ). The presented unitary does not
change. The algorithm repeatedly splits at the destination of a final
negative edge of least height and stops when the coding graph either has
only non-negative edges or contains a cycle of non-positive edges.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np
import pandas as pd

from graphalg import settings
from graphalg.algebra.unitary import PairSet, build_unitary
from graphalg.coding.graph import (
    ClassifyResult,
    CodingEdge,
    CodingGraph,
    CodingVertex,
    build,
    classify,
)
from graphalg.defs import Classification, LabelKind
from graphalg.errors import FuelExhaustedError, InvariantViolation, PreconditionError
from graphalg.graph import Path, concat

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FinalNegativeEdge:
    """A negative edge, the zero path after it, and the vertex that path reaches."""
    edge: CodingEdge
    destination: CodingVertex
    height: int
    zero_path: tuple[CodingEdge, ...] = ()


def final_negative_edges(cg: CodingGraph) -> list[FinalNegativeEdge]:
    found: list[FinalNegativeEdge] = []
    for eta in cg.negative_edges():
        current = eta.dst
        zero_path: list[CodingEdge] = []
        visited = {current}
        while True:
            outs = cg.out_edges(current)
            if all(e.label.kind is LabelKind.POSITIVE for e in outs):
                found.append(FinalNegativeEdge(eta, current, len(zero_path), tuple(zero_path)))
                break
            if len(outs) != 1:
                raise InvariantViolation(f"{current} emits a non-positive edge and other edges")
            (step,) = outs
            if step.label.kind is LabelKind.NEGATIVE:
                break
            zero_path.append(step)
            current = step.dst
            if current in visited:
                break
            visited.add(current)
    return sorted(found, key=lambda f: (f.height, f.destination.key, f.edge.key))


def split_at(j: PairSet, v: Union[CodingVertex, Path], cg: Optional[CodingGraph] = None) -> PairSet:
    """The pair set obtained by splitting at ``v`` (a coding vertex or its μ)."""
    cg = cg or build(j)
    vertex = cg.vertex_for(v if isinstance(v, Path) else v.mu)
    if isinstance(v, CodingVertex) and v != vertex:
        raise PreconditionError(f"{v} is not a vertex of the coding graph")
    if any(e.label.kind is not LabelKind.POSITIVE for e in cg.out_edges(vertex)):
        raise PreconditionError(f"{vertex} emits a non-positive edge")
    g = j.graph
    pairs = [(mu, nu) for mu, nu in j.pairs if mu != vertex.mu]
    for f in g.out_edges(vertex.mu.end):
        tail = g.edge_path(f)
        pairs.append((concat(vertex.mu, tail), concat(vertex.nu, tail)))
    return build_unitary(g, pairs)


# ── the algorithm ─────────────────────────────────────────────────────

@dataclass(frozen=True)
class SplitStep:
    round: int
    vertex: str
    height: int
    negative_edges: int
    classification: Classification

    def to_dict(self) -> dict:
        return {
            "round": self.round,
            "vertex": self.vertex,
            "height": self.height,
            "negative_edges": self.negative_edges,
            "classification": self.classification.value,
        }


@dataclass
class SplittingResult:
    pairset: PairSet
    coding_graph: CodingGraph
    outcome: ClassifyResult
    trace: list[SplitStep] = field(default_factory=list)

    @property
    def classification(self) -> Classification:
        return self.outcome.classification

    @property
    def rounds(self) -> int:
        return len(self.trace)

    def trace_lines(self) -> list[str]:
        return [json.dumps(step.to_dict(), ensure_ascii=False) for step in self.trace]

    def to_dataframe(self) -> pd.DataFrame:
        return pd.DataFrame(
            [step.to_dict() for step in self.trace],
            columns=["round", "vertex", "height", "negative_edges", "classification"],
        )


def run_splitting_algorithm(
    j: PairSet,
    fuel: Optional[int] = None,
    rng: Optional[np.random.Generator] = None,
) -> SplittingResult:
    """Split until the coding graph is non-negative or has a non-positive cycle.

    ``rng`` picks among the least-height destinations at random; without
    it the least vertex key wins.
    """
    fuel = settings.fuel() if fuel is None else fuel
    cg = build(j)
    trace: list[SplitStep] = []
    while True:
        outcome = classify(cg)
        if outcome.classification is not Classification.HAS_NEGATIVE_EDGES:
            logger.debug("splitting stopped after %d round(s): %s", len(trace), outcome.classification.value)
            return SplittingResult(j, cg, outcome, trace)
        if len(trace) >= fuel:
            raise FuelExhaustedError("splitting did not terminate", fuel)

        finals = final_negative_edges(cg)
        if not finals:
            raise InvariantViolation("negative edges present but none is final")
        lowest = finals[0].height
        destinations = sorted(
            {f.destination for f in finals if f.height == lowest}, key=lambda v: v.key
        )
        chosen = destinations[0] if rng is None else destinations[int(rng.integers(0, len(destinations)))]
        negatives = len(cg.negative_edges())
        logger.debug(
            "round %d: split at %s (height %d, %d negative edges)",
            len(trace), chosen, lowest, negatives,
        )

        split = split_at(j, chosen, cg)
        if split.element != j.element:
            raise InvariantViolation(f"splitting at {chosen} changed the unitary")
        next_cg = build(split)
        if len(next_cg.negative_edges()) > negatives:
            raise InvariantViolation(f"splitting at {chosen} added negative edges")
        trace.append(SplitStep(len(trace) + 1, str(chosen), lowest, negatives, outcome.classification))
        j, cg = split, next_cg


# ── bookkeeping of a single split ────────────────────────────────────

def split_deltas(before: CodingGraph, after: CodingGraph, vertex: CodingVertex) -> list[str]:
    """Check how the edges at ``vertex`` reappear after splitting there.

    Returns one message per violated rule; an empty list means every edge
    of ``after`` is accounted for.
    """
    g = before.graph
    children = {
        f: CodingVertex(concat(vertex.mu, g.edge_path(f)), vertex.e, concat(vertex.kappa, g.edge_path(f)))
        for f in g.out_edges(vertex.mu.end)
    }
    edge_at = {(e.src, e.dst): e for e in after.edges}
    problems: list[str] = []

    for eta in before.edges:
        if eta.src == vertex and eta.dst == vertex:
            hits = [
                f for f, c in children.items()
                if all((c, b) in edge_at for b in children.values())
            ]
            if len(hits) != 1:
                problems.append(f"loop {eta} should reach every child from exactly one child")
            else:
                c = children[hits[0]]
                if any(edge_at[(c, b)].degree != eta.degree for b in children.values()):
                    problems.append(f"loop {eta} changed degree")
        elif eta.src == vertex:
            hits = [edge_at[(c, eta.dst)] for c in children.values() if (c, eta.dst) in edge_at]
            if len(hits) != 1 or hits[0].degree != eta.degree - 1:
                problems.append(f"out-edge {eta} should survive once with degree {eta.degree - 1}")
        elif eta.dst == vertex:
            hits = [edge_at[(eta.src, c)] for c in children.values() if (eta.src, c) in edge_at]
            expected = 1 if eta.label.kind is LabelKind.NEGATIVE else len(children)
            if len(hits) != expected or any(h.degree != eta.degree + 1 for h in hits):
                problems.append(f"in-edge {eta} should reach {expected} child(ren) with degree {eta.degree + 1}")
        else:
            kept = edge_at.get((eta.src, eta.dst))
            if kept is None or kept.label != eta.label:
                problems.append(f"edge {eta} away from the split vertex changed")
    return problems
