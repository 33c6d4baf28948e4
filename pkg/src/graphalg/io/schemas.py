"""JSON file formats, as pydantic models.

Paths are written as words: a string of edge ids (dot-separated when
some id is longer than one character) or a list of edge ids; a vertex id
stands for the vertex path.
"""

from __future__ import annotations

from typing import Optional, Union

from pydantic import BaseModel, ConfigDict, Field

from graphalg.algebra.elements import AlgebraElement, Monomial
from graphalg.algebra.unitary import PairSet, build_unitary
from graphalg.coding.splitting import SplitStep
from graphalg.coding.synchronization import DiagonalVerdict
from graphalg.defs import Classification, Outcome
from graphalg.dynamics.words import EventuallyPeriodicWord
from graphalg.graph import Edge, Graph, Path

PathField = Union[str, list[str]]


def format_path(p: Path) -> str:
    if p.is_vertex:
        return p.anchor
    sep = "" if all(len(e) == 1 for e in p.edges) else "."
    return sep.join(p.edges)


def parse_path(g: Graph, value: PathField, anchor: Optional[str] = None) -> Path:
    return g.path(value if isinstance(value, str) else tuple(value), anchor)


class _Model(BaseModel):
    model_config = ConfigDict(extra="forbid")


# ── graphs ────────────────────────────────────────────────────────────

class EdgeModel(_Model):
    id: str
    src: str
    dst: str


class GraphModel(_Model):
    vertices: list[str]
    edges: list[EdgeModel]

    def to_graph(self) -> Graph:
        return Graph.build(self.vertices, [Edge(e.id, e.src, e.dst) for e in self.edges])

    @classmethod
    def from_graph(cls, g: Graph) -> GraphModel:
        return cls(
            vertices=list(g.vertices),
            edges=[EdgeModel(id=e.id, src=e.src, dst=e.dst) for e in g.edges],
        )


# ── unitaries and elements ───────────────────────────────────────────

class PairModel(_Model):
    mu: PathField
    nu: PathField


class UnitaryModel(_Model):
    pairs: list[PairModel]

    def to_pairset(self, g: Graph, expand_vertex: bool = False) -> PairSet:
        pairs = []
        for pair in self.pairs:
            mu = parse_path(g, pair.mu)
            pairs.append((mu, parse_path(g, pair.nu, mu.anchor)))
        return build_unitary(g, pairs, expand_vertex=expand_vertex)

    @classmethod
    def from_pairset(cls, j: PairSet) -> UnitaryModel:
        return cls(pairs=[PairModel(mu=format_path(mu), nu=format_path(nu)) for mu, nu in j.pairs])


class TermModel(_Model):
    coeff: int
    mu: PathField
    nu: PathField


class ElementModel(_Model):
    terms: list[TermModel]

    def to_element(self, g: Graph) -> AlgebraElement:
        raw = []
        for t in self.terms:
            mu = parse_path(g, t.mu)
            nu = parse_path(g, t.nu)
            raw.append((Monomial(mu, nu), t.coeff))
        return AlgebraElement(g, raw)

    @classmethod
    def from_element(cls, a: AlgebraElement) -> ElementModel:
        return cls(
            terms=[
                TermModel(coeff=c, mu=format_path(m.mu), nu=format_path(m.nu))
                for m, c in a.sorted_terms()
            ]
        )


# ── words and verdicts ───────────────────────────────────────────────

class WordModel(_Model):
    prefix: list[str] = Field(default_factory=list)
    period: list[str] = Field(min_length=1)

    def to_word(self) -> EventuallyPeriodicWord:
        return EventuallyPeriodicWord(tuple(self.prefix), tuple(self.period))

    @classmethod
    def from_word(cls, w: EventuallyPeriodicWord) -> WordModel:
        return cls(**w.to_dict())


class SplitStepModel(_Model):
    round: int
    vertex: str
    height: int
    negative_edges: int
    classification: Classification

    @classmethod
    def from_step(cls, step: SplitStep) -> SplitStepModel:
        return cls(**step.to_dict())


class VerdictModel(_Model):
    outcome: Outcome
    delay: Optional[int] = None
    witness: Optional[list[str]] = None
    splits: list[SplitStepModel] = Field(default_factory=list)

    @classmethod
    def from_verdict(cls, verdict: DiagonalVerdict) -> VerdictModel:
        return cls.model_validate(verdict.to_dict())


# ── fixtures ──────────────────────────────────────────────────────────

class CodingSummaryModel(_Model):
    vertices: int
    edges: int
    negative_edges: Optional[int] = None


class PsiSampleModel(_Model):
    input: str
    output: str


class OracleSampleModel(_Model):
    mu: PathField
    depth: int
    in_image: bool


class ExpectedModel(_Model):
    coding_graph: Optional[CodingSummaryModel] = None
    splits: Optional[int] = None
    classification: Optional[Classification] = None
    outcome: Optional[Outcome] = None
    delay: Optional[int] = None
    obstruction: Optional[bool] = None
    psi: list[PsiSampleModel] = Field(default_factory=list)
    oracle: list[OracleSampleModel] = Field(default_factory=list)


class FixtureModel(_Model):
    name: str
    description: str = ""
    graph: GraphModel
    unitary: UnitaryModel
    expected: ExpectedModel = Field(default_factory=ExpectedModel)
