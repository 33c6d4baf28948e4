"""Asynchronous transducers and their runs on eventually periodic words.

A transducer reads one input letter per step and emits a (possibly
empty) output word. Transitions left undefined lead to ``SINK``; a run
that enters the sink raises ``InvalidInputWordError``.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, Optional, Sequence

from graphalg.dynamics.words import EventuallyPeriodicWord, Letter
from graphalg.errors import AlphabetMismatchError, InvalidInputWordError, StalledOutputError

logger = logging.getLogger(__name__)

State = Hashable
Output = tuple[Letter, ...]

SINK = "⊥"


@dataclass(frozen=True)
class Transducer:
    """A 5-tuple (A, B, S, s₀, τ) with τ stored as a partial map."""
    input_alphabet: tuple[Letter, ...]
    output_alphabet: tuple[Letter, ...]
    states: tuple[State, ...]
    initial: State
    transitions: Mapping[tuple[State, Letter], tuple[State, Output]] = field(repr=False)
    name: str = ""

    def step(self, state: State, letter: Letter) -> tuple[State, Output]:
        """τ(state, letter); missing transitions go to ``SINK`` with no output."""
        return self.transitions.get((state, letter), (SINK, ()))

    def feed(self, word: Iterable[Letter], state: Optional[State] = None) -> tuple[State, Output]:
        """Run a finite word and return the final state and the output."""
        state = self.initial if state is None else state
        out: list[Letter] = []
        for i, letter in enumerate(word):
            state, emitted = self.step(state, letter)
            if state == SINK:
                raise InvalidInputWordError(f"{self.name or 'transducer'} rejected letter {letter!s} at position {i}")
            out.extend(emitted)
        return state, tuple(out)

    @property
    def num_transitions(self) -> int:
        return len(self.transitions)


def identity_transducer(alphabet: Sequence[Letter]) -> Transducer:
    alphabet = tuple(alphabet)
    return Transducer(
        alphabet,
        alphabet,
        ("s",),
        "s",
        {("s", a): ("s", (a,)) for a in alphabet},
        name="identity",
    )


def compose(second: Transducer, first: Transducer) -> Transducer:
    """The machine running ``first`` and feeding its output into ``second``.

    Only product states reachable from the initial pair are kept.
    """
    missing = set(first.output_alphabet) - set(second.input_alphabet)
    if missing:
        raise AlphabetMismatchError(
            f"{len(missing)} output letter(s) of {first.name or 'first'} are not inputs of {second.name or 'second'}"
        )
    start = (first.initial, second.initial)
    states: list[State] = [start]
    seen = {start}
    transitions: dict[tuple[State, Letter], tuple[State, Output]] = {}
    queue = deque([start])
    while queue:
        s1, s2 = queue.popleft()
        for a in first.input_alphabet:
            t1, middle = first.step(s1, a)
            if t1 == SINK:
                continue
            try:
                t2, out = second.feed(middle, s2)
            except InvalidInputWordError:
                continue
            target = (t1, t2)
            transitions[((s1, s2), a)] = (target, out)
            if target not in seen:
                seen.add(target)
                states.append(target)
                queue.append(target)
    name = f"{second.name or 'second'}∘{first.name or 'first'}"
    logger.debug("composed %s: %d states, %d transitions", name, len(states), len(transitions))
    return Transducer(
        first.input_alphabet, second.output_alphabet, tuple(states), start, transitions, name=name
    )


def run(t: Transducer, w: EventuallyPeriodicWord) -> EventuallyPeriodicWord:
    """The output of ``t`` on the infinite word ``w``.

    After the prefix the pair (state, position in the period) determines
    the rest of the run, so its first repetition closes the output period.
    """
    state, head = t.feed(w.prefix)
    output = list(head)
    period = w.period
    seen: dict[tuple[State, int], int] = {}
    i = 0
    while (state, i % len(period)) not in seen:
        seen[(state, i % len(period))] = len(output)
        state, emitted = t.step(state, period[i % len(period)])
        if state == SINK:
            raise InvalidInputWordError(f"{t.name or 'transducer'} rejected {w}")
        output.extend(emitted)
        i += 1
    start = seen[(state, i % len(period))]
    if start == len(output):
        raise StalledOutputError(f"{t.name or 'transducer'} emits nothing along a cycle on {w}")
    logger.debug("run closed a cycle after %d period steps", i)
    return EventuallyPeriodicWord(tuple(output[:start]), tuple(output[start:]))
