"""Polynomial unitaries u_J and their endomorphisms Λ_J.

A pair set J is a finite list of pairs (μ, ν) with matching sources and
ranges whose first components and second components each partition the
unit. It presents the unitary

    u_J = Σ_{(μ, ν) ∈ J} S_μ S_ν*

and the endomorphism Λ_J(S_μ S_ν*) = u_{|μ|} S_μ S_ν* u_{|ν|}*.
"""

from __future__ import annotations

import logging
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from graphalg.algebra.elements import (
    AlgebraElement,
    Monomial,
    adjoint,
    is_unitary,
    multiply,
    partial_isometry,
    unit,
    u_power,
    vertex_projection,
)
from graphalg.defs import MAX_REFINEMENT_LEVELS, RANDOM_UNITARY_ATTEMPTS
from graphalg.errors import (
    GraphMismatchError,
    InputError,
    InvariantViolation,
    NotInClassError,
    PairSetError,
    PreconditionError,
)
from graphalg.graph import (
    Graph,
    Path,
    concat,
    is_partition,
    is_partition_of_unity,
    is_prefix,
    paths_from,
    remainder,
)

logger = logging.getLogger(__name__)

PathLike = Union[Path, str]
Pair = tuple[Path, Path]


@dataclass(frozen=True)
class PairSet:
    """A validated pair set J over ``graph``; build with ``build_unitary``."""
    graph: Graph
    pairs: tuple[Pair, ...]
    warnings: tuple[str, ...] = ()
    _powers: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    @property
    def first_components(self) -> list[Path]:
        return [mu for mu, _ in self.pairs]

    @property
    def second_components(self) -> list[Path]:
        return [nu for _, nu in self.pairs]

    @property
    def element(self) -> AlgebraElement:
        """u_J."""
        if "u" not in self._powers:
            self._powers["u"] = AlgebraElement(
                self.graph, [(Monomial(mu, nu), 1) for mu, nu in self.pairs]
            )
        return self._powers["u"]

    def lookup(self, mu: Path) -> Path:
        """J_μ: the second component paired with ``mu``."""
        for first, second in self.pairs:
            if first == mu:
                return second
        raise InputError(f"{mu} is not a first component")

    def u_power(self, k: int) -> AlgebraElement:
        """u_k, with u_0 = 1."""
        if k < 0:
            raise InputError(f"u_k needs k >= 0, got {k}")
        if k not in self._powers:
            self._powers[k] = unit(self.graph) if k == 0 else u_power(self.element, k)
        return self._powers[k]

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def __str__(self) -> str:
        return "{" + ", ".join(f"({mu},{nu})" for mu, nu in self.pairs) + "}"


# ── construction ──────────────────────────────────────────────────────

def _as_path(g: Graph, p: PathLike) -> Path:
    return p if isinstance(p, Path) else g.path(p)


def expand_vertex_pairs(g: Graph, pairs: Iterable[Pair]) -> list[Pair]:
    """Replace each pair (μ, v) by the pairs (μe, e) over the edges e leaving v."""
    out: list[Pair] = []
    for mu, nu in pairs:
        if nu.is_vertex:
            for eid in g.out_edges(nu.end):
                e = g.edge_path(eid)
                out.append((concat(mu, e), e))
        else:
            out.append((mu, nu))
    return out


def build_unitary(
    g: Graph,
    pairs: Iterable[tuple[PathLike, PathLike]],
    expand_vertex: bool = False,
) -> PairSet:
    parsed = [(_as_path(g, mu), _as_path(g, nu)) for mu, nu in pairs]
    if expand_vertex:
        parsed = expand_vertex_pairs(g, parsed)

    warnings: list[str] = []
    for mu, nu in parsed:
        if mu.anchor != nu.anchor:
            raise PairSetError(f"pair ({mu},{nu}) has s(mu)={mu.anchor!r} != s(nu)={nu.anchor!r}")
        if mu.end != nu.end:
            raise PairSetError(f"pair ({mu},{nu}) has r(mu)={mu.end!r} != r(nu)={nu.end!r}")
        if nu.is_vertex:
            raise PairSetError(
                f"pair ({mu},{nu}) has a second component of length 0",
                hint=f"expand via P_{nu.end} = sum of S_e S_e^* over edges leaving {nu.end!r}",
            )
        if mu.is_vertex:
            message = f"pair ({mu},{nu}) has a first component of length 0"
            logger.warning(message)
            warnings.append(message)

    firsts = [mu for mu, _ in parsed]
    repeated = [str(mu) for mu, n in Counter(firsts).items() if n > 1]
    if repeated:
        raise PairSetError(f"duplicate first components: {', '.join(sorted(repeated))}")
    if not is_partition_of_unity(g, firsts):
        raise PairSetError("first components do not form a partition of unity")
    if not is_partition_of_unity(g, [nu for _, nu in parsed]):
        raise PairSetError("second components do not form a partition of unity")

    ordered = tuple(sorted(parsed, key=lambda pair: (pair[0].sort_key, pair[1].sort_key)))
    j = PairSet(g, ordered, tuple(warnings))
    if not is_unitary(j.element):
        raise InvariantViolation(f"u_J is not unitary for J = {j}")
    logger.debug("built pair set with %d pairs", len(j))
    return j


def is_permutative(j: PairSet) -> bool:
    return all(mu.length == nu.length for mu, nu in j.pairs)


# ── reading a presentation off an element ────────────────────────────

def _refine(g: Graph, u: AlgebraElement, depth: int) -> dict[Pair, int]:
    out: dict[Pair, int] = defaultdict(int)
    for m, c in u.terms.items():
        for tail in paths_from(g, m.nu.end, depth - m.nu.length):
            out[(concat(m.mu, tail), concat(m.nu, tail))] += c
    return {pair: c for pair, c in out.items() if c}


def _coarsen(g: Graph, pairs: list[Pair]) -> list[Pair]:
    current = set(pairs)
    changed = True
    while changed:
        changed = False
        parents: dict[Pair, set[Pair]] = defaultdict(set)
        for mu, nu in current:
            if mu.length > 1 and nu.length > 1 and mu.last == nu.last:
                w = g.source(mu.last)
                parent = (Path(mu.anchor, mu.edges[:-1], w), Path(nu.anchor, nu.edges[:-1], w))
                parents[parent].add((mu, nu))
        for (mu, nu), kids in parents.items():
            full = {
                (concat(mu, g.edge_path(e)), concat(nu, g.edge_path(e)))
                for e in g.out_edges(mu.end)
            }
            if kids == full:
                current -= full
                current.add((mu, nu))
                changed = True
    return list(current)


def element_to_pairset(u: AlgebraElement) -> PairSet:
    """Recover a pair set presenting ``u``, or raise ``NotInClassError``."""
    if not is_unitary(u):
        raise NotInClassError(f"{u} is not unitary")
    g = u.graph
    start = max([1] + [m.nu.length for m in u.terms])
    for depth in range(start, start + MAX_REFINEMENT_LEVELS):
        refined = _refine(g, u, depth)
        if any(c != 1 for c in refined.values()):
            continue
        if any(mu.anchor != nu.anchor for mu, nu in refined):
            continue
        try:
            j = build_unitary(g, _coarsen(g, list(refined)))
        except PairSetError:
            continue
        logger.debug("recovered pair set at refinement depth %d", depth)
        return j
    raise NotInClassError(f"no pair-set presentation of {u} up to depth {start + MAX_REFINEMENT_LEVELS - 1}")


# ── the endomorphism ──────────────────────────────────────────────────

def lambda_apply(j: PairSet, a: AlgebraElement) -> AlgebraElement:
    """Λ_J(a), extended linearly from the monomials of ``a``."""
    if a.graph != j.graph:
        raise GraphMismatchError("element and pair set over different graphs")
    result = AlgebraElement(j.graph)
    for m, c in a.terms.items():
        left = j.u_power(m.mu.length)
        right = adjoint(j.u_power(m.nu.length))
        term = AlgebraElement(j.graph, [(m, c)])
        result = result + multiply(multiply(left, term), right)
    return result


def lambda_path(j: PairSet, alpha: Path) -> AlgebraElement:
    """Λ_J(S_α) as the product Λ(S_α1)⋯Λ(S_αk) with Λ(S_e) = u S_e."""
    if alpha.is_vertex:
        return vertex_projection(j.graph, alpha.anchor)
    result = multiply(j.element, partial_isometry(j.graph, j.graph.edge_path(alpha.first)))
    for eid in alpha.edges[1:]:
        result = multiply(result, multiply(j.element, partial_isometry(j.graph, j.graph.edge_path(eid))))
    return result


def contains_partition_of_prefix(j: PairSet, side: int, nu: Path) -> list[Path]:
    """Members of J₁ (side 1) or J₂ (side 2) extending ``nu``; they partition ``nu``."""
    if side not in (1, 2):
        raise InputError(f"side must be 1 or 2, got {side}")
    members = j.first_components if side == 1 else j.second_components
    found = sorted((p for p in members if is_prefix(nu, p)), key=lambda p: p.sort_key)
    if not found:
        raise PreconditionError(f"{nu} is not a prefix of any member of J{side}")
    if not is_partition(j.graph, nu.end, [remainder(nu, p) for p in found]):
        raise InvariantViolation(f"members of J{side} extending {nu} do not partition it")
    return found


# ── random pair sets ─────────────────────────────────────────────────

def _grow_partition(g: Graph, rng: np.random.Generator, max_len: int) -> list[Path]:
    family = [g.edge_path(e.id) for e in g.edges]
    for _ in range(int(rng.integers(0, 2 * len(g.edges) + 1))):
        open_ = [p for p in family if p.length < max_len]
        if not open_:
            break
        chosen = open_[int(rng.integers(0, len(open_)))]
        family.remove(chosen)
        family.extend(concat(chosen, g.edge_path(e)) for e in g.out_edges(chosen.end))
    return family


def _random_matching(
    rng: np.random.Generator, left: Sequence[Path], right: Sequence[Path]
) -> list[Pair] | None:
    if len(left) != len(right):
        return None
    rows = rng.permutation(len(left))
    cols = rng.permutation(len(right))
    r_idx, c_idx = [], []
    for i, a in enumerate(rows):
        for k, b in enumerate(cols):
            if (left[a].anchor, left[a].end) == (right[b].anchor, right[b].end):
                r_idx.append(i)
                c_idx.append(k)
    biadjacency = csr_matrix(
        (np.ones(len(r_idx)), (r_idx, c_idx)), shape=(len(left), len(right))
    )
    match = maximum_bipartite_matching(biadjacency, perm_type="column")
    if (match < 0).any():
        return None
    return [(left[rows[i]], right[cols[k]]) for i, k in enumerate(match)]


def random_unitary(
    g: Graph, max_len: int, seed: Union[int, np.random.Generator, None] = None
) -> PairSet:
    """A random member of S_E, deterministic for a given seed."""
    if max_len < 1:
        raise InputError(f"max_len must be at least 1, got {max_len}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    for attempt in range(RANDOM_UNITARY_ATTEMPTS):
        second = _grow_partition(g, rng, max_len)
        first = _grow_partition(g, rng, max_len)
        pairs = _random_matching(rng, first, second)
        if pairs is not None:
            logger.debug("random pair set matched after %d attempt(s)", attempt + 1)
            return build_unitary(g, pairs)
    # a partition always matches itself
    second = _grow_partition(g, rng, max_len)
    pairs = _random_matching(rng, second, second)
    if pairs is None:
        raise InvariantViolation("self-matching of a partition failed")
    logger.debug("random pair set fell back to a shuffle of one partition")
    return build_unitary(g, pairs)
