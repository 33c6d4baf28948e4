"""Seeded random corpus of (graph, pair set) entries.

Each entry is drawn from its own ``numpy.random.default_rng(seed)``, so an
entry depends on its seed alone and corpus runs can be split freely.

Usage:
    from graphalg.corpus import corpus_entry, summarize_corpus

    entry = corpus_entry(17)
    df = summarize_corpus(range(300))
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np
import pandas as pd

from graphalg.algebra.unitary import PairSet, is_permutative, random_unitary
from graphalg.coding.graph import build
from graphalg.coding.synchronization import diagonal_verdict, even_degree_obstruction
from graphalg.graph import Graph, random_graph

logger = logging.getLogger(__name__)

MAX_VERTICES = 4
MAX_OUT_DEGREE = 2
MAX_PATH_LENGTH = 4


@dataclass(frozen=True)
class CorpusEntry:
    seed: int
    graph: Graph
    pairset: PairSet


def corpus_entry(
    seed: int,
    max_vertices: int = MAX_VERTICES,
    max_out_degree: int = MAX_OUT_DEGREE,
    max_len: int = MAX_PATH_LENGTH,
) -> CorpusEntry:
    rng = np.random.default_rng(seed)
    g = random_graph(rng, max_vertices, max_out_degree)
    return CorpusEntry(seed, g, random_unitary(g, max_len, rng))


def iter_corpus(seeds: Iterable[int], **kwargs) -> Iterator[CorpusEntry]:
    for seed in seeds:
        yield corpus_entry(int(seed), **kwargs)


def spectral_radius(g: Graph) -> float:
    """Perron eigenvalue of the adjacency matrix."""
    return float(np.max(np.abs(np.linalg.eigvals(g.adjacency_matrix()))))


def summarize(entry: CorpusEntry) -> dict:
    j = entry.pairset
    cg = build(j)
    verdict = diagonal_verdict(j)
    return {
        "seed": entry.seed,
        "vertices": len(entry.graph.vertices),
        "edges": len(entry.graph.edges),
        "spectral_radius": round(spectral_radius(entry.graph), 6),
        "pairs": len(j),
        "max_length": max(max(mu.length, nu.length) for mu, nu in j.pairs),
        "permutative": is_permutative(j),
        "coding_vertices": len(cg.vertices),
        "coding_edges": len(cg.edges),
        "negative_edges": len(cg.negative_edges()),
        "splits": verdict.splitting.rounds,
        "classification": verdict.splitting.classification.value,
        "outcome": verdict.outcome.value,
        "delay": verdict.delay,
        "even_obstruction": even_degree_obstruction(j).fires,
    }


def summarize_corpus(seeds: Iterable[int], **kwargs) -> pd.DataFrame:
    rows = [summarize(entry) for entry in iter_corpus(seeds, **kwargs)]
    df = pd.DataFrame(rows)
    if not df.empty:
        df["delay"] = df["delay"].astype("Int64")
    logger.debug("summarized %d corpus entries", len(df))
    return df


def outcome_counts(df: pd.DataFrame) -> dict[str, int]:
    if df.empty:
        return {}
    return {str(k): int(v) for k, v in df["outcome"].value_counts().sort_index().items()}
