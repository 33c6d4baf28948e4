"""Tests for graphalg.dynamics.transducer."""

import pytest

from graphalg.dynamics.transducer import SINK, Transducer, compose, identity_transducer, run
from graphalg.dynamics.words import EventuallyPeriodicWord
from graphalg.errors import AlphabetMismatchError, InvalidInputWordError, StalledOutputError


@pytest.fixture
def doubler():
    return Transducer(("a", "b"), ("a", "b"), ("s",), "s", {
        ("s", "a"): ("s", ("a", "a")),
        ("s", "b"): ("s", ("b",)),
    }, name="doubler")


@pytest.fixture
def delay_one():
    """Emit the previous letter; the first letter is swallowed."""
    return Transducer(("a", "b"), ("a", "b"), ("start", "a", "b"), "start", {
        ("start", "a"): ("a", ()),
        ("start", "b"): ("b", ()),
        ("a", "a"): ("a", ("a",)),
        ("a", "b"): ("b", ("a",)),
        ("b", "a"): ("a", ("b",)),
        ("b", "b"): ("b", ("b",)),
    }, name="delay")


def word(text):
    return EventuallyPeriodicWord.parse(text)


class TestStep:
    def test_identity(self):
        t = identity_transducer(("1", "2"))
        assert t.feed("1221") == ("s", ("1", "2", "2", "1"))
        assert t.num_transitions == 2

    def test_missing_transition_goes_to_sink(self, doubler):
        assert doubler.step("s", "c") == (SINK, ())

    def test_feed_rejects(self, doubler):
        with pytest.raises(InvalidInputWordError):
            doubler.feed("abc")

    def test_feed_from_state(self, delay_one):
        assert delay_one.feed("ba", state="a") == ("a", ("a", "b"))


class TestCompose:
    def test_with_identity(self, doubler):
        c = compose(identity_transducer(("a", "b")), doubler)
        assert c.feed("ab")[1] == ("a", "a", "b")

    def test_doubler_then_delay(self, doubler, delay_one):
        c = compose(delay_one, doubler)
        assert c.feed("ab")[1] == ("a", "a")
        assert c.name == "delay∘doubler"

    def test_only_reachable_states(self, doubler, delay_one):
        c = compose(delay_one, doubler)
        assert len(c.states) == 3

    def test_alphabet_mismatch(self, doubler):
        with pytest.raises(AlphabetMismatchError):
            compose(identity_transducer(("x",)), doubler)


class TestRun:
    def test_identity(self):
        w = word("11(2)")
        assert run(identity_transducer(("1", "2")), w) == w

    def test_doubler(self, doubler):
        assert run(doubler, word("b(ab)")) == word("b(aab)")

    def test_delay_shifts_right(self, delay_one):
        assert run(delay_one, word("b(a)")) == word("b(a)")
        assert run(delay_one, word("(ab)")) == word("(ab)")

    def test_composite_agrees(self, doubler, delay_one):
        w = word("ab(bba)")
        assert run(compose(delay_one, doubler), w) == run(delay_one, run(doubler, w))

    def test_stalled(self):
        mute = Transducer(("a",), ("a",), ("s",), "s", {("s", "a"): ("s", ())}, name="mute")
        with pytest.raises(StalledOutputError):
            run(mute, word("(a)"))

    def test_rejected_period(self, doubler):
        with pytest.raises(InvalidInputWordError):
            run(doubler, word("a(c)"))
