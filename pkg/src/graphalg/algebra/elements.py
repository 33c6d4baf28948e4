"""Exact arithmetic in the Leavitt path algebra L_Z(E).

Elements are integer combinations of monomials S_μS_ν* kept in a unique
normal form. The special edge of a vertex v is the least edge id leaving
v; a monomial is reducible when μ and ν both end with the special edge
γ of the same vertex, and is then rewritten by

    S_{μ'γ}S_{ν'γ}* = S_{μ'}S_{ν'}* - Σ_{e ≠ γ, s(e) = s(γ)} S_{μ'e}S_{ν'e}*

The rewrite terminates: the first term is strictly shorter and the others
end in a non-special pair, so each step either shortens a monomial or
leaves an irreducible one.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache
from types import MappingProxyType
from typing import Iterable, Mapping, Optional, Union

import numpy as np

from graphalg import settings
from graphalg.errors import (
    FuelExhaustedError,
    GraphMismatchError,
    InputError,
    MonomialRangeError,
    NotDiagonalError,
)
from graphalg.graph import (
    Graph,
    Path,
    all_paths,
    concat,
    cylinders,
    is_prefix,
    remainder,
)

logger = logging.getLogger(__name__)


# ── monomials ─────────────────────────────────────────────────────────

@dataclass(frozen=True)
class Monomial:
    """S_μ S_ν*; nonzero exactly when r(μ) = r(ν)."""
    mu: Path
    nu: Path

    def __post_init__(self) -> None:
        if self.mu.end != self.nu.end:
            raise MonomialRangeError(
                f"S_{self.mu} S_{self.nu}^* has r(mu)={self.mu.end!r} != r(nu)={self.nu.end!r}"
            )

    @property
    def degree(self) -> int:
        return self.mu.length - self.nu.length

    @property
    def is_diagonal(self) -> bool:
        return self.mu == self.nu

    @property
    def sort_key(self) -> tuple:
        return (self.mu.sort_key, self.nu.sort_key)

    def adjoint(self) -> Monomial:
        return Monomial(self.nu, self.mu)

    def __str__(self) -> str:
        if self.mu == self.nu:
            return f"P_{self.mu}"
        if self.nu.is_vertex:
            return f"S_{self.mu}"
        if self.mu.is_vertex:
            return f"S_{self.nu}^*"
        return f"S_{self.mu} S_{self.nu}^*"


def reduce_star_product(nu: Path, alpha: Path) -> Optional[tuple[int, Path]]:
    """S_ν* S_α as a signed path.

    Returns ``(+1, γ)`` when α = νγ (the product is S_γ, or P_v when γ is
    the vertex v), ``(-1, γ)`` when ν = αγ (the product is S_γ*), and
    ``None`` when the product vanishes.
    """
    if is_prefix(nu, alpha):
        return 1, remainder(nu, alpha)
    if is_prefix(alpha, nu):
        return -1, remainder(alpha, nu)
    return None


def _monomial_product(a: Monomial, b: Monomial) -> Optional[Monomial]:
    cancelled = reduce_star_product(a.nu, b.mu)
    if cancelled is None:
        return None
    sign, gamma = cancelled
    if sign > 0:
        return Monomial(concat(a.mu, gamma), b.nu)
    return Monomial(a.mu, concat(b.nu, gamma))


def _is_reducible(g: Graph, m: Monomial) -> bool:
    if m.mu.is_vertex or m.nu.is_vertex:
        return False
    last = m.mu.last
    return last == m.nu.last and last == g.special_edge(g.source(last))


@lru_cache(maxsize=1 << 16)
def _reduce(g: Graph, m: Monomial) -> tuple[tuple[Monomial, int], ...]:
    out: dict[Monomial, int] = defaultdict(int)
    stack: list[tuple[Monomial, int]] = [(m, 1)]
    fuel = settings.rewrite_fuel()
    steps = 0
    while stack:
        mono, coeff = stack.pop()
        if not _is_reducible(g, mono):
            out[mono] += coeff
            continue
        steps += 1
        if steps > fuel:
            raise FuelExhaustedError(f"normal form of {m} did not converge", fuel)
        gamma = mono.mu.last
        w = g.source(gamma)
        mu_head = Path(mono.mu.anchor, mono.mu.edges[:-1], w)
        nu_head = Path(mono.nu.anchor, mono.nu.edges[:-1], w)
        stack.append((Monomial(mu_head, nu_head), coeff))
        for e in g.out_edges(w):
            if e == gamma:
                continue
            tail = g.edge_path(e)
            out[Monomial(concat(mu_head, tail), concat(nu_head, tail))] -= coeff
    if steps > 1000:
        logger.debug("normal form of %s took %d rewrite steps", m, steps)
    return tuple((mono, c) for mono, c in out.items() if c)


# ── elements ──────────────────────────────────────────────────────────

Scalar = int
RawTerms = Union[Mapping[Monomial, int], Iterable[tuple[Monomial, int]]]


class AlgebraElement:
    """An element of L_Z(E) in normal form.

    Instances are immutable; arithmetic returns new elements.
    """

    __slots__ = ("graph", "_terms")

    def __init__(self, graph: Graph, terms: Optional[RawTerms] = None) -> None:
        self.graph = graph
        self._terms: dict[Monomial, int] = _normalize(graph, terms or ())

    @classmethod
    def _trusted(cls, graph: Graph, terms: dict[Monomial, int]) -> AlgebraElement:
        obj = cls.__new__(cls)
        obj.graph = graph
        obj._terms = {m: c for m, c in terms.items() if c}
        return obj

    # ── properties ────────────────────────────────────────────────────

    @property
    def terms(self) -> Mapping[Monomial, int]:
        return MappingProxyType(self._terms)

    @property
    def degree_set(self) -> frozenset[int]:
        return frozenset(m.degree for m in self._terms)

    @property
    def is_homogeneous(self) -> bool:
        return len(self.degree_set) <= 1

    def coefficient(self, m: Monomial) -> int:
        return self._terms.get(m, 0)

    def sorted_terms(self) -> list[tuple[Monomial, int]]:
        return sorted(self._terms.items(), key=lambda item: item[0].sort_key)

    # ── arithmetic ────────────────────────────────────────────────────

    def _check(self, other: AlgebraElement) -> None:
        if self.graph != other.graph:
            raise GraphMismatchError("elements over different graphs")

    def __add__(self, other: AlgebraElement) -> AlgebraElement:
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        self._check(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            out[m] = out.get(m, 0) + c
        return AlgebraElement._trusted(self.graph, out)

    def __neg__(self) -> AlgebraElement:
        return AlgebraElement._trusted(self.graph, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other: AlgebraElement) -> AlgebraElement:
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other: Union[AlgebraElement, Scalar]) -> AlgebraElement:
        if isinstance(other, AlgebraElement):
            return multiply(self, other)
        if isinstance(other, (int, np.integer)):
            return AlgebraElement._trusted(
                self.graph, {m: c * int(other) for m, c in self._terms.items()}
            )
        return NotImplemented

    def __rmul__(self, other: Scalar) -> AlgebraElement:
        if isinstance(other, (int, np.integer)):
            return self * other
        return NotImplemented

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.graph == other.graph and self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self):
        return iter(self.sorted_terms())

    def __str__(self) -> str:
        return format_element(self)

    def __repr__(self) -> str:
        return f"AlgebraElement({format_element(self)})"


def _normalize(g: Graph, raw: RawTerms) -> dict[Monomial, int]:
    items = raw.items() if isinstance(raw, Mapping) else raw
    out: dict[Monomial, int] = defaultdict(int)
    for mono, coeff in items:
        if not coeff:
            continue
        for reduced, c in _reduce(g, mono):
            out[reduced] += coeff * c
    return {m: c for m, c in out.items() if c}


# ── constructors ──────────────────────────────────────────────────────

def normal_form(g: Graph, raw: RawTerms) -> AlgebraElement:
    """Canonical element for a formal sum of monomials."""
    return AlgebraElement(g, raw)


def zero(g: Graph) -> AlgebraElement:
    return AlgebraElement._trusted(g, {})


def unit(g: Graph) -> AlgebraElement:
    return AlgebraElement._trusted(g, {Monomial(Path(v), Path(v)): 1 for v in g.vertices})


def vertex_projection(g: Graph, v: str) -> AlgebraElement:
    p = g.vertex_path(v)
    return AlgebraElement._trusted(g, {Monomial(p, p): 1})


def monomial(g: Graph, mu: Path, nu: Path, coeff: int = 1) -> AlgebraElement:
    return AlgebraElement(g, [(Monomial(mu, nu), coeff)])


def partial_isometry(g: Graph, mu: Path) -> AlgebraElement:
    """S_μ."""
    return monomial(g, mu, Path(mu.end))


def projection(g: Graph, mu: Path) -> AlgebraElement:
    """P_μ = S_μ S_μ*."""
    return monomial(g, mu, mu)


def from_diagonal_support(g: Graph, paths: Iterable[Path]) -> AlgebraElement:
    return AlgebraElement(g, [(Monomial(p, p), 1) for p in paths])


# ── operations ────────────────────────────────────────────────────────

def multiply(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    a._check(b)
    raw: dict[Monomial, int] = defaultdict(int)
    for m1, c1 in a._terms.items():
        for m2, c2 in b._terms.items():
            product = _monomial_product(m1, m2)
            if product is not None:
                raw[product] += c1 * c2
    return AlgebraElement(a.graph, raw)


def product(g: Graph, factors: Iterable[AlgebraElement]) -> AlgebraElement:
    result = unit(g)
    for f in factors:
        result = multiply(result, f)
    return result


def adjoint(a: AlgebraElement) -> AlgebraElement:
    # the reducibility test is symmetric in (mu, nu), so adjoints stay normal
    return AlgebraElement._trusted(a.graph, {m.adjoint(): c for m, c in a._terms.items()})


def shift_phi(a: AlgebraElement) -> AlgebraElement:
    """Φ(x) = Σ_e S_e x S_e*."""
    g = a.graph
    raw: dict[Monomial, int] = defaultdict(int)
    for m, c in a._terms.items():
        if m.mu.anchor != m.nu.anchor:
            continue
        for eid in g.in_edges(m.mu.anchor):
            e = g.edge_path(eid)
            raw[Monomial(concat(e, m.mu), concat(e, m.nu))] += c
    return AlgebraElement(g, raw)


def u_power(u: AlgebraElement, k: int) -> AlgebraElement:
    """u_k = u Φ(u) ⋯ Φ^{k-1}(u)."""
    if k < 1:
        raise InputError(f"u_power needs k >= 1, got {k}")
    result = u
    shifted = u
    for _ in range(k - 1):
        shifted = shift_phi(shifted)
        result = multiply(result, shifted)
    return result


def is_unitary(u: AlgebraElement) -> bool:
    one = unit(u.graph)
    u_star = adjoint(u)
    return multiply(u, u_star) == one and multiply(u_star, u) == one


def graded_components(a: AlgebraElement) -> dict[int, AlgebraElement]:
    parts: dict[int, dict[Monomial, int]] = defaultdict(dict)
    for m, c in a._terms.items():
        parts[m.degree][m] = c
    return {d: AlgebraElement._trusted(a.graph, t) for d, t in sorted(parts.items())}


def is_diagonal(a: AlgebraElement) -> bool:
    return all(m.is_diagonal for m in a._terms)


def merge_siblings(g: Graph, paths: Iterable[Path]) -> list[Path]:
    """Replace every complete family {βe : s(e) = r(β)} by β, bottom-up."""
    current = set(paths)
    changed = True
    while changed:
        changed = False
        parents: dict[Path, set[Path]] = defaultdict(set)
        for x in current:
            if x.length:
                parents[Path(x.anchor, x.edges[:-1], g.source(x.last))].add(x)
        for parent, kids in parents.items():
            full = {concat(parent, g.edge_path(e)) for e in g.out_edges(parent.end)}
            if kids == full:
                current -= full
                current.add(parent)
                changed = True
    return sorted(current, key=lambda p: p.sort_key)


def diagonal_support(a: AlgebraElement) -> list[Path]:
    """The minimal prefix-free family {β_i} with a = Σ P_{β_i}."""
    if not is_diagonal(a):
        raise NotDiagonalError(f"{a} has off-diagonal terms")
    if not a:
        return []
    g = a.graph
    depth = max(m.mu.length for m in a._terms)
    indicator: dict[Path, int] = defaultdict(int)
    for m, c in a._terms.items():
        for x in cylinders(g, [m.mu], depth):
            indicator[x] += c
    if any(c not in (0, 1) for c in indicator.values()):
        raise NotDiagonalError(f"{a} is diagonal but not a projection")
    return merge_siblings(g, [x for x, c in indicator.items() if c == 1])


def format_element(a: AlgebraElement) -> str:
    if not a:
        return "0"
    chunks: list[str] = []
    for m, c in a.sorted_terms():
        sign = "-" if c < 0 else "+"
        magnitude = "" if abs(c) == 1 else f"{abs(c)} "
        chunks.append(f"{sign} {magnitude}{m}")
    text = " ".join(chunks)
    return text[2:] if text.startswith("+ ") else "-" + text[2:]


# ── random samples for property checks ───────────────────────────────

def _paths_up_to(g: Graph, max_len: int) -> list[Path]:
    return [p for k in range(max_len + 1) for p in all_paths(g, k)]


def random_element(
    g: Graph,
    rng: np.random.Generator,
    n_terms: int = 3,
    max_len: int = 2,
    max_coeff: int = 2,
) -> AlgebraElement:
    pool = _paths_up_to(g, max_len)
    raw: list[tuple[Monomial, int]] = []
    for _ in range(n_terms):
        mu = pool[int(rng.integers(0, len(pool)))]
        partners = [p for p in pool if p.end == mu.end]
        nu = partners[int(rng.integers(0, len(partners)))]
        coeff = int(rng.integers(1, max_coeff + 1)) * (1 if rng.random() < 0.5 else -1)
        raw.append((Monomial(mu, nu), coeff))
    return AlgebraElement(g, raw)


def random_diagonal_projection(g: Graph, rng: np.random.Generator, depth: int = 2) -> AlgebraElement:
    pool = all_paths(g, depth)
    chosen = [p for p in pool if rng.random() < 0.5]
    return from_diagonal_support(g, chosen)
