"""Graphviz DOT emission for coding graphs, pair graphs and transducers.

Every emitter is a generator of lines in a fixed order, so equal inputs
give byte-identical output.
"""

from __future__ import annotations

from typing import Hashable, Iterator, Union

import networkx as nx

from graphalg.coding.graph import CodingEdge, CodingGraph, CodingVertex
from graphalg.defs import EPSILON
from graphalg.dynamics.transducer import Transducer


def _gvquote(s: str) -> str:
    return '"{}"'.format(s.replace("\\", "\\\\").replace('"', r"\""))


def vertex_label(v: CodingVertex) -> str:
    return f"{v.e} | {v.mu} / {v.kappa}"


def coding_graph_dot(cg: CodingGraph) -> Iterator[str]:
    ids = {v: f"J{i}" for i, v in enumerate(cg.vertices)}
    yield "digraph coding {"
    yield "  rankdir=LR;"
    for v in cg.vertices:
        yield f"  {ids[v]} [shape=box label={_gvquote(vertex_label(v))}];"
    for e in cg.edges:
        label = f"L={e.label} d={e.degree}"
        yield f"  {ids[e.src]} -> {ids[e.dst]} [label={_gvquote(label)}];"
    yield "}"


def pair_graph_dot(G: nx.DiGraph) -> Iterator[str]:
    nodes = sorted(G.nodes, key=lambda n: (n[0].key, n[1].key))
    ids = {n: f"P{i}" for i, n in enumerate(nodes)}
    yield "digraph pairs {"
    for n in nodes:
        yield f"  {ids[n]} [label={_gvquote(f'{{{n[0]}, {n[1]}}}')}];"
    for u, v in sorted(G.edges, key=lambda uv: (ids[uv[0]], ids[uv[1]])):
        yield f"  {ids[u]} -> {ids[v]};"
    yield "}"


def state_label(s: Hashable) -> str:
    if isinstance(s, CodingEdge):
        return f"{s.src.mu}→{s.dst.mu}"
    if isinstance(s, tuple):
        if not s:
            return EPSILON
        if all(isinstance(x, str) for x in s):
            return "".join(s) if all(len(x) == 1 for x in s) else ".".join(s)
        return "(" + ", ".join(state_label(x) for x in s) + ")"
    return str(s)


def transducer_dot(t: Transducer) -> Iterator[str]:
    ids = {s: f"s{i}" for i, s in enumerate(t.states)}
    yield f"digraph {_gvquote(t.name or 'transducer')} {{"
    yield "  rankdir=LR;"
    for s in t.states:
        shape = "doublecircle" if s == t.initial else "circle"
        yield f"  {ids[s]} [shape={shape} label={_gvquote(state_label(s))}];"
    for (s, a), (target, out) in t.transitions.items():
        word = "".join(state_label(x) for x in out) if out else EPSILON
        label = f"{state_label(a)} / {word}"
        yield f"  {ids[s]} -> {ids[target]} [label={_gvquote(label)}];"
    yield "}"


def emit_dot(obj: Union[CodingGraph, Transducer, nx.DiGraph]) -> str:
    if isinstance(obj, CodingGraph):
        lines = coding_graph_dot(obj)
    elif isinstance(obj, Transducer):
        lines = transducer_dot(obj)
    elif isinstance(obj, nx.DiGraph):
        lines = pair_graph_dot(obj)
    else:
        raise TypeError(f"no DOT emitter for {type(obj).__name__}")
    return "\n".join(lines) + "\n"
