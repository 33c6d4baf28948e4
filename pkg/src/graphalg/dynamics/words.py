"""Eventually periodic infinite words.

A word is stored as ``prefix`` followed by ``period`` repeated forever,
always in canonical form: the period is primitive and no trailing prefix
letter can be rotated into the period. Two words are equal as infinite
words iff their canonical forms are equal.

Usage:
    w = EventuallyPeriodicWord.parse("11(2)")
    str(w)            # "11(2)^∞"
    w.take(5)         # ("1", "1", "2", "2", "2")
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from typing import Hashable, Iterable, Optional, Sequence

import numpy as np

from graphalg.defs import INFINITY
from graphalg.errors import InputError
from graphalg.graph import Graph, Path

logger = logging.getLogger(__name__)

Letter = Hashable

_WORD_RE = re.compile(r"^\s*(?P<prefix>[^()]*)\((?P<period>[^()]+)\)(\^\S*)?\s*$")


def _failure(word: Sequence[Letter]) -> list[int]:
    table = [0] * len(word)
    k = 0
    for i in range(1, len(word)):
        while k and word[i] != word[k]:
            k = table[k - 1]
        if word[i] == word[k]:
            k += 1
        table[i] = k
    return table


def primitive_root(word: Sequence[Letter]) -> tuple[Letter, ...]:
    """The shortest u with word = u^k."""
    n = len(word)
    p = n - _failure(word)[-1]
    return tuple(word[:p]) if n % p == 0 else tuple(word)


@dataclass(frozen=True)
class EventuallyPeriodicWord:
    prefix: tuple[Letter, ...]
    period: tuple[Letter, ...]

    def __post_init__(self) -> None:
        if not self.period:
            raise InputError("the period of an infinite word cannot be empty")
        prefix = tuple(self.prefix)
        period = primitive_root(self.period)
        while prefix and prefix[-1] == period[-1]:
            prefix = prefix[:-1]
            period = (period[-1],) + period[:-1]
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "period", period)

    @classmethod
    def parse(cls, text: str, g: Optional[Graph] = None) -> EventuallyPeriodicWord:
        """Read ``"11(2)"`` or ``"11(2)^∞"``; letters are split by ``g`` when given."""
        match = _WORD_RE.match(text)
        if match is None:
            raise InputError(f"cannot read {text!r} as prefix(period)")
        return cls.from_parts(match["prefix"], match["period"], g)

    @classmethod
    def from_parts(
        cls, prefix: str | Sequence[Letter], period: str | Sequence[Letter], g: Optional[Graph] = None
    ) -> EventuallyPeriodicWord:
        def letters(part):
            if not isinstance(part, str):
                return tuple(part)
            part = part.strip()
            if g is not None:
                return g.tokenize(part) if part else ()
            return tuple(part)
        return cls(letters(prefix), letters(period))

    def __getitem__(self, i: int) -> Letter:
        if i < 0:
            raise IndexError("infinite words have no negative indices")
        if i < len(self.prefix):
            return self.prefix[i]
        return self.period[(i - len(self.prefix)) % len(self.period)]

    def take(self, n: int) -> tuple[Letter, ...]:
        return tuple(self[i] for i in range(n))

    def __iter__(self):
        yield from self.prefix
        while True:
            yield from self.period

    def as_path(self, g: Graph, n: int) -> Path:
        """The length-``n`` initial segment as a path in ``g``."""
        if n == 0:
            return g.vertex_path(g.source(self[0]))
        return g.make_path(self.take(n))

    def to_dict(self) -> dict:
        return {"prefix": [str(a) for a in self.prefix], "period": [str(a) for a in self.period]}

    def __str__(self) -> str:
        def render(part: Iterable[Letter]) -> str:
            tokens = [str(a) for a in part]
            sep = "" if all(len(t) == 1 for t in tokens) else "."
            return sep.join(tokens)
        return f"{render(self.prefix)}({render(self.period)})^{INFINITY}"


def is_path_word(g: Graph, w: EventuallyPeriodicWord) -> bool:
    """True iff ``w`` is an infinite path in ``g``."""
    try:
        g.make_path(w.take(len(w.prefix) + len(w.period) + 1))
    except InputError:
        return False
    return True


def random_path_word(g: Graph, rng: np.random.Generator, burn_in: int = 0) -> EventuallyPeriodicWord:
    """A random infinite path: walk until a vertex repeats, then loop."""
    v = g.vertices[int(rng.integers(0, len(g.vertices)))]
    edges: list[str] = []
    for _ in range(burn_in):
        outs = g.out_edges(v)
        e = outs[int(rng.integers(0, len(outs)))]
        edges.append(e)
        v = g.range(e)
    seen = {v: len(edges)}
    while True:
        outs = g.out_edges(v)
        e = outs[int(rng.integers(0, len(outs)))]
        edges.append(e)
        v = g.range(e)
        if v in seen:
            start = seen[v]
            return EventuallyPeriodicWord(tuple(edges[:start]), tuple(edges[start:]))
        seen[v] = len(edges)
