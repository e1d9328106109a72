"""Boundary-matrix reduction over a prime field, barcodes and class lifespans."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import networkx as nx

from .core import Filtration, Simplex, SimplicialComplex
from .errors import (
    DimensionMismatch,
    DimensionOutOfRange,
    InfiniteBarMismatch,
    NotACycle,
    NotAPermutation,
    OrderNotLinearExtension,
    ZeroChain,
)

INF = math.inf


@dataclass(frozen=True)
class FieldSpec:
    p: int = 2

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ValueError(f"field characteristic must be prime, got {self.p}")

    def inv(self, x: int) -> int:
        return pow(x % self.p, -1, self.p)


def _is_prime(n: int) -> bool:
    if not isinstance(n, int) or n < 2:
        return False
    return all(n % d for d in range(2, math.isqrt(n) + 1))


@dataclass(frozen=True)
class Chain:
    """A homogeneous chain with integer coefficients.

    Coefficients are reduced modulo ``p`` by :meth:`mod`; a chain built with
    :meth:`mod` stores no zero terms.
    """

    dimension: int
    terms: Mapping[Simplex, int] = field(default_factory=dict)

    def __post_init__(self):
        terms = {s: c for s, c in self.terms.items() if c != 0}
        for s in terms:
            if s.dim != self.dimension:
                raise DimensionMismatch(f"{s} does not have dimension {self.dimension}")
        object.__setattr__(self, "terms", dict(sorted(terms.items())))

    @classmethod
    def of(cls, terms: Mapping[Simplex, int]) -> Chain:
        dims = {s.dim for s in terms}
        if len(dims) > 1:
            raise DimensionMismatch("a chain's simplices must share one dimension")
        return cls(dims.pop() if dims else 0, terms)

    def mod(self, field: FieldSpec) -> Chain:
        return Chain(self.dimension, {s: c % field.p for s, c in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def boundary(self, field: FieldSpec) -> Chain:
        out: dict[Simplex, int] = {}
        for s, c in self.terms.items():
            for t, b in boundary_chain(s, field).terms.items():
                out[t] = (out.get(t, 0) + c * b) % field.p
        return Chain(max(self.dimension - 1, 0), out)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for s, c in self.terms.items():
            parts.append(f"{c}*{s}" if c != 1 else str(s))
        return " + ".join(parts)


def boundary_chain(sigma: Simplex, field: FieldSpec = FieldSpec()) -> Chain:
    """Alternating-sign boundary of ``sigma`` reduced mod p."""
    if sigma.dim == 0:
        return Chain(0, {})
    terms = {}
    for i, t in enumerate(sigma.facets()):
        terms[t] = (-1) ** i % field.p
    return Chain(sigma.dim - 1, terms)


def _axpy(vec: dict[int, int], col: Mapping[int, int], factor: int, p: int) -> None:
    """vec -= factor * col, in place, mod p."""
    for k, c in col.items():
        v = (vec.get(k, 0) - factor * c) % p
        if v:
            vec[k] = v
        else:
            vec.pop(k, None)


def reduce_against(vec: dict[int, int], pivots: Mapping[int, Mapping[int, int]], p: int,
                   used: list[int] | None = None, limit: int | None = None) -> dict[int, int]:
    """Cancel the pivot of ``vec`` while some column owns it.

    ``pivots`` maps a pivot row to its column; ``used`` collects the pivot
    rows that were cancelled. Columns whose owner lies beyond ``limit`` are
    ignored (``pivots`` values may be ``(owner, column)`` pairs in that case).
    """
    vec = dict(vec)
    while vec:
        low = max(vec)
        entry = pivots.get(low)
        if entry is None:
            break
        if limit is not None:
            owner, col = entry
            if owner > limit:
                break
        else:
            col = entry
        factor = vec[low] * pow(col[low], -1, p) % p
        _axpy(vec, col, factor, p)
        if used is not None:
            used.append(low)
    return vec


@dataclass(frozen=True, eq=False)
class ReducedFiltration:
    """Result of the standard column reduction for one simplex order.

    ``reduced_columns`` holds the reduced boundary of every simplex (zero for
    birth simplices); ``pairing`` lists (birth, death) pairs in order of the
    death simplex; ``essential`` lists unpaired birth simplices.
    """

    complex: SimplicialComplex
    order: tuple[Simplex, ...]
    field: FieldSpec
    reduced_columns: Mapping[Simplex, Chain]
    pairing: tuple[tuple[Simplex, Simplex], ...]
    essential: tuple[Simplex, ...]
    # pivot position -> (death position, column in position coordinates)
    _pivots: Mapping[int, tuple[int, dict[int, int]]] = field(repr=False)

    @property
    def position(self) -> dict[Simplex, int]:
        return {s: i for i, s in enumerate(self.order)}

    def is_terminal(self, s: Simplex) -> bool:
        self.complex.require(s)
        return not self.reduced_columns[s].is_zero()

    def death_of(self, birth: Simplex) -> Simplex | None:
        for b, d in self.pairing:
            if b == birth:
                return d
        return None


def reduce(K: SimplicialComplex, order: Sequence[Simplex], field: FieldSpec = FieldSpec()) -> ReducedFiltration:
    """Left-to-right column reduction of the boundary matrix of ``order``."""
    order = tuple(order)
    if len(order) != len(K) or set(order) != set(K.simplices):
        raise NotAPermutation("order must list every simplex of the complex exactly once")
    pos = {s: i for i, s in enumerate(order)}
    p = field.p
    pivots: dict[int, tuple[int, dict[int, int]]] = {}
    by_pivot: dict[int, dict[int, int]] = {}
    columns: list[dict[int, int]] = []
    for j, s in enumerate(order):
        col = {}
        for i, t in enumerate(K.facets(s)):
            if pos[t] > j:
                raise OrderNotLinearExtension(f"{t} comes after its coface {s}")
            col[pos[t]] = (-1) ** i % p
        col = reduce_against(col, by_pivot, p)
        if col:
            pivots[max(col)] = (j, col)
            by_pivot[max(col)] = col
        columns.append(col)

    reduced = {}
    for s, col in zip(order, columns):
        terms = {order[i]: c for i, c in col.items()}
        reduced[s] = Chain(max(s.dim - 1, 0), terms)
    pairing = tuple(sorted(((order[low], order[j]) for low, (j, _) in pivots.items()),
                           key=lambda bd: pos[bd[1]]))
    births = {b for b, _ in pairing}
    essential = tuple(s for s, col in zip(order, columns) if not col and s not in births)
    return ReducedFiltration(K, order, field, reduced, pairing, essential, pivots)


@dataclass(frozen=True)
class Bar:
    dimension: int
    a: Fraction
    b: Fraction | float
    birth_simplex: Simplex
    terminal_simplex: Simplex | None

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError(f"empty bar [{self.a}, {self.b})")
        if (self.b == INF) != (self.terminal_simplex is None):
            raise ValueError("a bar has a terminal simplex exactly when it is finite")

    @property
    def finite(self) -> bool:
        return self.b != INF

    @property
    def length(self):
        return self.b - self.a


@dataclass(frozen=True)
class Barcode:
    dimension: int
    bars: tuple[Bar, ...]

    def __iter__(self):
        return iter(self.bars)

    def __len__(self):
        return len(self.bars)

    def alive_at(self, r) -> int:
        return sum(1 for bar in self.bars if bar.a <= r < bar.b)


def barcode(R: ReducedFiltration, f: Filtration, n: int) -> Barcode:
    if n < 0 or n > R.complex.dimension:
        raise DimensionOutOfRange(f"dimension {n} outside 0..{R.complex.dimension}")
    bars = [Bar(n, f(b), f(d), b, d) for b, d in R.pairing if b.dim == n]
    bars += [Bar(n, f(b), INF, b, None) for b in R.essential if b.dim == n]
    bars.sort(key=lambda bar: (bar.a, bar.b))
    return Barcode(n, tuple(bars))


def barcodes(f: Filtration, field: FieldSpec = FieldSpec()) -> list[Barcode]:
    R = reduce(f.complex, f.order, field)
    return [barcode(R, f, n) for n in range(f.complex.dimension + 1)]


def classify_simplex(R: ReducedFiltration, sigma: Simplex) -> str:
    return "terminal" if R.is_terminal(sigma) else "birth"


@dataclass(frozen=True)
class ClassLifespan:
    cycle: Chain
    a: Fraction
    b: Fraction | float
    terminal_simplex: Simplex | None
    birth_simplex: Simplex


def _cycle_vector(R: ReducedFiltration, alpha: Chain) -> dict[int, int]:
    p = R.field.p
    alpha = alpha.mod(R.field)
    if alpha.is_zero():
        raise ZeroChain("the cycle is the zero chain")
    for s in alpha.terms:
        R.complex.require(s)
    if alpha.dimension > 0 and not alpha.boundary(R.field).is_zero():
        raise NotACycle(f"{alpha} has nonzero boundary")
    pos = R.position
    return {pos[s]: c % p for s, c in alpha.terms.items()}


def terminal_simplex(R: ReducedFiltration, alpha: Chain) -> Simplex | None:
    """Simplex (in ``R``'s order) whose arrival makes ``alpha`` a boundary.

    ``alpha`` decomposes uniquely over the reduced death columns; it dies with
    the last death column that takes part.
    """
    vec = _cycle_vector(R, alpha)
    used: list[int] = []
    rest = reduce_against(vec, R._pivots, R.field.p, used=used, limit=len(R.order))
    if rest:
        return None
    return R.order[max(R._pivots[low][0] for low in used)]


def class_lifespan(R: ReducedFiltration, f: Filtration, alpha: Chain) -> ClassLifespan:
    """Birth, termination scale and terminal simplex of ``[alpha]``.

    The class is taken at the level where its last simplex appears. Its birth
    is the lowest level holding a homologous cycle, found by cancelling pivots
    against death columns that exist at that level.
    """
    if tuple(R.order) != f.order:
        raise ValueError("class_lifespan needs the reduction of the f-order")
    vec = _cycle_vector(R, alpha)
    created = max(vec)
    lowest = reduce_against(vec, R._pivots, R.field.p, limit=created)
    birth = R.order[max(lowest)]
    delta = terminal_simplex(R, alpha)
    b = f(delta) if delta is not None else INF
    return ClassLifespan(alpha.mod(R.field), f(birth), b, delta, birth)


def representative(R: ReducedFiltration, bar: Bar) -> Chain:
    """The reduced column of a finite bar's terminal simplex."""
    if bar.terminal_simplex is None:
        raise ValueError("infinite bars have no terminal simplex")
    return R.reduced_columns[bar.terminal_simplex]


def _bar_cost(x: Bar, y: Bar):
    if x.finite != y.finite:
        return None
    if not x.finite:
        return abs(x.a - y.a)
    return max(abs(x.a - y.a), abs(x.b - y.b))


def bottleneck_distance(B1: Sequence[Bar], B2: Sequence[Bar]) -> Fraction:
    """Exact bottleneck distance; unmatched finite bars pay half their length."""
    B1, B2 = list(B1), list(B2)
    if sum(not b.finite for b in B1) != sum(not b.finite for b in B2):
        raise InfiniteBarMismatch("barcodes carry different numbers of infinite bars")
    half1 = [(b.b - b.a) / 2 if b.finite else None for b in B1]
    half2 = [(b.b - b.a) / 2 if b.finite else None for b in B2]
    cost = {(i, j): c for i, x in enumerate(B1) for j, y in enumerate(B2)
            if (c := _bar_cost(x, y)) is not None}
    candidates = {Fraction(0)} | set(cost.values()) | {h for h in half1 + half2 if h is not None}
    candidates = sorted(candidates)

    def feasible(t) -> bool:
        # left: bars of B1 and diagonal slots for B2; right: bars of B2 and slots for B1
        G = nx.Graph()
        left = [("L", i) for i in range(len(B1))] + [("dL", j) for j in range(len(B2))]
        right = [("R", j) for j in range(len(B2))] + [("dR", i) for i in range(len(B1))]
        G.add_nodes_from(left, bipartite=0)
        G.add_nodes_from(right, bipartite=1)
        for (i, j), c in cost.items():
            if c <= t:
                G.add_edge(("L", i), ("R", j))
        for i, h in enumerate(half1):
            if h is not None and h <= t:
                G.add_edge(("L", i), ("dR", i))
        for j, h in enumerate(half2):
            if h is not None and h <= t:
                G.add_edge(("dL", j), ("R", j))
        for j in range(len(B2)):
            for i in range(len(B1)):
                G.add_edge(("dL", j), ("dR", i))
        if not left:
            return True
        matching = nx.bipartite.hopcroft_karp_matching(G, top_nodes=left)
        return all(node in matching for node in left)

    lo, hi = 0, len(candidates) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if feasible(candidates[mid]):
            hi = mid
        else:
            lo = mid + 1
    return candidates[lo]
