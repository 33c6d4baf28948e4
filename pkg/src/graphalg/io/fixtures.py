"""Bundled fixtures and the checks run against their expectations.

Usage:
    from graphalg.io.fixtures import load_fixture, run_fixture

    fx = load_fixture("ex2")
    report = run_fixture(fx)
    report.passed
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from importlib import resources
from typing import Any

from graphalg.algebra.unitary import PairSet
from graphalg.coding.graph import build
from graphalg.coding.synchronization import (
    diagonal_onto_oracle,
    diagonal_verdict,
    even_degree_obstruction,
)
from graphalg.dynamics.psi import psi_eval, psi_transducer
from graphalg.dynamics.words import EventuallyPeriodicWord
from graphalg.errors import InputError
from graphalg.graph import Graph
from graphalg.io.schemas import FixtureModel, parse_path

logger = logging.getLogger(__name__)

_PACKAGE = "graphalg.fixtures"


@dataclass(frozen=True)
class Fixture:
    model: FixtureModel
    graph: Graph
    pairset: PairSet

    @property
    def name(self) -> str:
        return self.model.name


def list_fixtures() -> list[str]:
    return sorted(
        entry.name[: -len(".json")]
        for entry in resources.files(_PACKAGE).iterdir()
        if entry.name.endswith(".json")
    )


def load_fixture(name: str) -> Fixture:
    entry = resources.files(_PACKAGE) / f"{name}.json"
    if not entry.is_file():
        raise InputError(f"unknown fixture {name!r}; available: {', '.join(list_fixtures())}")
    model = FixtureModel.model_validate_json(entry.read_text(encoding="utf-8"))
    g = model.graph.to_graph()
    return Fixture(model, g, model.unitary.to_pairset(g))


# ── checks ────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class Check:
    name: str
    expected: Any
    actual: Any

    @property
    def ok(self) -> bool:
        return self.expected == self.actual


@dataclass
class FixtureReport:
    name: str
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "fixture": self.name,
            "passed": self.passed,
            "checks": [
                {"name": c.name, "expected": c.expected, "actual": c.actual, "ok": c.ok}
                for c in self.checks
            ],
        }


def run_fixture(fx: Fixture) -> FixtureReport:
    expected = fx.model.expected
    report = FixtureReport(fx.name)
    add = report.checks.append
    j = fx.pairset

    if expected.coding_graph is not None:
        cg = build(j)
        add(Check("coding_graph.vertices", expected.coding_graph.vertices, len(cg.vertices)))
        add(Check("coding_graph.edges", expected.coding_graph.edges, len(cg.edges)))
        if expected.coding_graph.negative_edges is not None:
            add(Check("coding_graph.negative_edges", expected.coding_graph.negative_edges, len(cg.negative_edges())))

    verdict = diagonal_verdict(j)
    if expected.splits is not None:
        add(Check("splits", expected.splits, verdict.splitting.rounds))
    if expected.classification is not None:
        add(Check("classification", expected.classification.value, verdict.splitting.classification.value))
    if expected.outcome is not None:
        add(Check("outcome", expected.outcome.value, verdict.outcome.value))
    if expected.delay is not None:
        add(Check("delay", expected.delay, verdict.delay))
    if expected.obstruction is not None:
        add(Check("obstruction", expected.obstruction, even_degree_obstruction(j).fires))

    if expected.psi:
        machine = psi_transducer(j)
        for sample in expected.psi:
            w = EventuallyPeriodicWord.parse(sample.input, fx.graph)
            want = EventuallyPeriodicWord.parse(sample.output, fx.graph)
            add(Check(f"psi{sample.input}", str(want), str(psi_eval(j, w, machine))))

    for sample in expected.oracle:
        mu = parse_path(fx.graph, sample.mu)
        found = diagonal_onto_oracle(j, mu, sample.depth, split=verdict.splitting)
        add(Check(f"oracle P_{mu} depth {sample.depth}", sample.in_image, found.in_image))

    logger.info("fixture %s: %d/%d checks passed", fx.name, sum(c.ok for c in report.checks), len(report.checks))
    return report
