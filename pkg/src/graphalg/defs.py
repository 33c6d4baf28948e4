"""Constants and enums shared across graphalg."""

from __future__ import annotations

from enum import Enum, IntEnum

# ── limits ────────────────────────────────────────────────────────────

DEFAULT_FUEL = 10_000
DEFAULT_REWRITE_FUEL = 1_000_000
DEFAULT_ORACLE_DEPTH = 6
DEFAULT_LOG_LEVEL = "WARNING"

# coarsening in element_to_pairset gives up beyond this many extra levels
MAX_REFINEMENT_LEVELS = 8

# random_unitary attempts before falling back to a within-class shuffle
RANDOM_UNITARY_ATTEMPTS = 64

# random_graph attempts before giving up
RANDOM_GRAPH_ATTEMPTS = 200

EPSILON = "ε"
INFINITY = "∞"
WORD_SEPARATORS = ".,; "


# ── exit codes ────────────────────────────────────────────────────────

class ExitCode(IntEnum):
    OK = 0
    NEGATIVE = 1
    INPUT_ERROR = 2
    INTERNAL_ERROR = 3


# ── coding-graph labels ───────────────────────────────────────────────

class LabelKind(IntEnum):
    """Shape of an edge label S_{ν₁}*S_{μ₂}."""
    NEGATIVE = -1
    ZERO = 0
    POSITIVE = 1


class Classification(str, Enum):
    ALL_NON_NEGATIVE = "all_non_negative"
    HAS_NON_POSITIVE_CYCLE = "has_non_positive_cycle"
    HAS_NEGATIVE_EDGES = "has_negative_edges"


# ── verdicts ──────────────────────────────────────────────────────────

class Outcome(str, Enum):
    AUTO = "auto"
    NOT_AUTO_NON_POSITIVE_CYCLE = "not_auto_nonpositive_cycle"
    NOT_AUTO_NOT_SYNCHRONIZING = "not_auto_not_synchronizing"
