"""The path-space action ψ of a diagonal automorphism, as transducers.

For an Auto pair set the split coding graph is left-synchronizing with
some delay m. A window of m+2 input letters then fixes the first edge of
every coding path reading that window, which gives a sliding block code
from infinite paths of E to infinite paths of the coding graph. Reading
the source's μ and then the edge labels along that coding path yields ψ.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import pandas as pd

from graphalg.algebra.elements import adjoint, multiply, partial_isometry
from graphalg.algebra.unitary import PairSet, lambda_path
from graphalg.coding.graph import CodingEdge, CodingGraph, paths_with_label
from graphalg.coding.splitting import SplittingResult
from graphalg.coding.synchronization import diagonal_verdict, is_left_synchronizing
from graphalg.defs import LabelKind
from graphalg.dynamics.transducer import Transducer, compose, run
from graphalg.dynamics.words import EventuallyPeriodicWord
from graphalg.errors import (
    InputError,
    InvalidInputWordError,
    InvariantViolation,
    PreconditionError,
    StalledOutputError,
)
from graphalg.graph import Graph, Path

logger = logging.getLogger(__name__)

INITIAL = "s₀"


def _source_word(e: CodingEdge) -> tuple[str, ...]:
    return e.src.mu.edges


def _label_word(e: CodingEdge) -> tuple[str, ...]:
    if e.label.kind is LabelKind.NEGATIVE:
        raise PreconditionError(f"{e} is a negative edge")
    return e.label.path.edges


# ── φ ─────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class PhiTable:
    """φ on every word of length m+2; ``None`` marks words with no coding path."""
    coding_graph: CodingGraph
    delay: int
    rows: tuple[tuple[tuple[str, ...], Optional[CodingEdge]], ...]

    @property
    def window(self) -> int:
        return self.delay + 2

    @cached_property
    def _index(self) -> dict:
        return dict(self.rows)

    def lookup(self, word: tuple[str, ...]) -> Optional[CodingEdge]:
        return self._index.get(tuple(word))

    def to_dataframe(self) -> pd.DataFrame:
        records = []
        for word, edge in self.rows:
            records.append({
                "word": "".join(word),
                "phi": f"[J{edge.src.mu},J{edge.dst.mu}]" if edge else "∅",
                "S": "".join(_source_word(edge)) if edge else "",
                "L": "".join(_label_word(edge)) if edge else "",
            })
        return pd.DataFrame(records, columns=["word", "phi", "S", "L"])


def _require_delay(cg: CodingGraph, m: int) -> None:
    sync = is_left_synchronizing(cg)
    if not sync.synchronizing:
        raise PreconditionError("coding graph is not left-synchronizing")
    if m < sync.delay:
        raise PreconditionError(f"delay {m} is below the synchronizing delay {sync.delay}")


def phi_map(cg: CodingGraph, m: int) -> PhiTable:
    _require_delay(cg, m)
    g = cg.graph
    ids = sorted(e.id for e in g.edges)
    rows = []
    for word in itertools.product(ids, repeat=m + 2):
        try:
            beta = g.make_path(word)
        except InputError:
            rows.append((word, None))
            continue
        firsts = {p.edges[0] for p in paths_with_label(cg, beta)}
        if len(firsts) > 1:
            raise InvariantViolation(f"coding paths reading {beta} start with different edges")
        rows.append((word, next(iter(firsts), None)))
    return PhiTable(cg, m, tuple(rows))


# ── transducers ───────────────────────────────────────────────────────

def sliding_block_transducer(table: PhiTable) -> Transducer:
    """Buffer m+1 letters, then emit φ of the buffer plus the next letter."""
    g = table.coding_graph.graph
    ids = tuple(sorted(e.id for e in g.edges))
    phi = dict(table.rows)
    full = table.delay + 1
    transitions: dict = {}
    states: list[tuple[str, ...]] = [()]
    seen = {()}
    frontier = [()]
    while frontier:
        nxt = []
        for buf in frontier:
            for a in ids:
                if buf and g.range(buf[-1]) != g.source(a):
                    continue
                word = buf + (a,)
                if len(buf) < full:
                    target, out = word, ()
                else:
                    edge = phi.get(word)
                    if edge is None:
                        continue
                    target, out = word[1:], (edge,)
                transitions[(buf, a)] = (target, out)
                if target not in seen:
                    seen.add(target)
                    states.append(target)
                    nxt.append(target)
        frontier = nxt
    return Transducer(ids, table.coding_graph.edges, tuple(states), (), transitions, name="sliding-block")


def output_transducer(cg: CodingGraph) -> Transducer:
    """Emit μ of the first source, then the label path of each edge read."""
    if any(e.label.kind is LabelKind.NEGATIVE for e in cg.edges):
        raise PreconditionError("output transducer needs a coding graph without negative edges")
    ids = tuple(sorted(e.id for e in cg.graph.edges))
    transitions: dict = {}
    for e in cg.edges:
        transitions[(INITIAL, e)] = (e, _source_word(e))
        for f in cg.out_edges(e.dst):
            transitions[(e, f)] = (f, _label_word(e))
    return Transducer(cg.edges, ids, (INITIAL,) + cg.edges, INITIAL, transitions, name="output")


@dataclass(frozen=True)
class PsiMachine:
    """Everything needed to evaluate ψ for one Auto pair set."""
    splitting: SplittingResult
    delay: int
    table: PhiTable
    sliding: Transducer
    output: Transducer
    composite: Transducer

    @property
    def pairset(self) -> PairSet:
        return self.splitting.pairset


def psi_transducer(j: PairSet, delay: Optional[int] = None) -> PsiMachine:
    verdict = diagonal_verdict(j)
    if not verdict.is_auto:
        raise PreconditionError(f"ψ needs an Auto verdict, got {verdict.outcome.value}")
    cg = verdict.splitting.coding_graph
    m = verdict.delay if delay is None else delay
    table = phi_map(cg, m)
    sliding = sliding_block_transducer(table)
    output = output_transducer(cg)
    return PsiMachine(verdict.splitting, m, table, sliding, output, compose(output, sliding))


# ── evaluation ────────────────────────────────────────────────────────

def psi_eval(
    j: PairSet, w: EventuallyPeriodicWord, machine: Optional[PsiMachine] = None
) -> EventuallyPeriodicWord:
    """ψ(w) from the windows of w, checked against the composite transducer."""
    machine = machine or psi_transducer(j)
    table = machine.table
    n = table.window

    def phi_at(i: int) -> CodingEdge:
        window = tuple(w[k] for k in range(i, i + n))
        edge = table.lookup(window)
        if edge is None:
            raise InvalidInputWordError(f"{''.join(window)} at position {i} of {w} is not read by any coding path")
        return edge

    lead = len(w.prefix)
    head = list(_source_word(phi_at(0)))
    for i in range(lead):
        head.extend(_label_word(phi_at(i)))
    tail: list[str] = []
    for i in range(lead, lead + len(w.period)):
        tail.extend(_label_word(phi_at(i)))
    if not tail:
        raise StalledOutputError(f"ψ emits nothing along the period of {w}")
    result = EventuallyPeriodicWord(tuple(head), tuple(tail))

    check = run(machine.composite, w)
    if check != result:
        raise InvariantViolation(f"window recipe gave {result}, transducer gave {check}")
    return result


def psi_finite_check(j: PairSet, alpha_prefix: Path, beta_prefix: Path) -> bool:
    """True iff S_β* Λ_J(S_α) ≠ 0."""
    if beta_prefix.is_vertex:
        return True
    g = j.graph
    return bool(multiply(adjoint(partial_isometry(g, beta_prefix)), lambda_path(j, alpha_prefix)))


def certify_psi(j: PairSet, word: EventuallyPeriodicWord, image: EventuallyPeriodicWord, n: int) -> bool:
    """Check every output prefix of length ≤ n against the input prefix of length n."""
    g: Graph = j.graph
    alpha = word.as_path(g, n)
    return all(psi_finite_check(j, alpha, image.as_path(g, k)) for k in range(1, n + 1))

