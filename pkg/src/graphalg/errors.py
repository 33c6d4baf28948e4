"""Exception hierarchy.

``InputError`` covers anything the caller can fix by changing the input;
``InternalError`` covers states that the theory says cannot happen.
Mathematical negatives (not unitary, not an automorphism of the diagonal)
are returned as values and never raised.
"""

from __future__ import annotations

from typing import Optional


class GraphAlgError(Exception):
    """Base class for all graphalg errors."""


# ── input errors ──────────────────────────────────────────────────────

class InputError(GraphAlgError, ValueError):
    """The supplied data violates a documented precondition."""


class GraphStructureError(InputError):
    """An edge refers to an undeclared vertex, or ids collide."""

    def __init__(self, message: str, edge_id: Optional[str] = None) -> None:
        super().__init__(message)
        self.edge_id = edge_id


class PathError(InputError):
    """A path is malformed or two paths cannot be composed."""


class GraphMismatchError(InputError):
    """Two algebra elements live over different graphs."""


class MonomialRangeError(InputError):
    """A monomial S_μS_ν* with r(μ) ≠ r(ν)."""


class PairSetError(InputError):
    """A pair set does not present a unitary in the class S_E."""

    def __init__(self, message: str, hint: Optional[str] = None) -> None:
        super().__init__(message if hint is None else f"{message} (hint: {hint})")
        self.hint = hint


class NotInClassError(InputError):
    """An algebra element is not a polynomial unitary of pair form."""


class NotDiagonalError(InputError):
    """An element expected to be a diagonal projection is not one."""


class PreconditionError(InputError):
    """An operation was invoked outside the hypothesis it needs."""


class AlphabetMismatchError(InputError):
    """Transducers whose alphabets do not chain."""


class InvalidInputWordError(InputError):
    """A transducer run reached the sink state."""


# ── internal errors ───────────────────────────────────────────────────

class InternalError(GraphAlgError, RuntimeError):
    """A state the theory rules out was reached."""


class FuelExhaustedError(InternalError):
    """A bounded loop ran out of fuel."""

    def __init__(self, message: str, fuel: int) -> None:
        super().__init__(f"{message} (fuel={fuel})")
        self.fuel = fuel


class StalledOutputError(InternalError):
    """A transducer cycle produced no output."""


class InvariantViolation(InternalError):
    """A self-check failed."""
