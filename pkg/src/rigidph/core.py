"""Simplicial complexes, injective filtrations and their perturbations.

All filtration values are :class:`fractions.Fraction`; perturbation
thresholds sit at exact half-differences of values, so the open/closed
behaviour at a threshold is only meaningful in exact arithmetic.
"""

from __future__ import annotations

import numbers
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, total_ordering
from itertools import combinations
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import (
    BlockNotSorted,
    BlockSpanTooLarge,
    DimensionMismatch,
    DuplicateSimplex,
    DuplicateValue,
    EnumerationCapExceeded,
    MissingValue,
    MonotonicityViolation,
    NotAPermutation,
    NotClosed,
    OrderNotLinearExtension,
    OrderNotRealizable,
    PreconditionGapTooLarge,
    SimplexNotInComplex,
    SingleSimplex,
    UnknownSimplex,
)

_LETTERS = "ABCDEFGHIJKLMNOPQRSTUVWXYZ"


@total_ordering
@dataclass(frozen=True)
class Simplex:
    """A simplex in canonical form: strictly increasing vertex ids.

    Simplices sort by dimension first, then lexicographically.
    """

    vertices: tuple[int, ...]

    def __post_init__(self):
        verts = tuple(self.vertices)
        object.__setattr__(self, "vertices", verts)
        if not verts:
            raise ValueError("a simplex needs at least one vertex")
        for v in verts:
            if not isinstance(v, int) or isinstance(v, bool) or v < 0:
                raise ValueError(f"vertex ids must be non-negative integers, got {v!r}")
        if any(u >= v for u, v in zip(verts, verts[1:])):
            raise ValueError(f"vertices must be strictly increasing, got {verts}")

    @classmethod
    def of(cls, *vertices: int) -> Simplex:
        return cls(tuple(vertices))

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1

    @property
    def key(self) -> tuple[int, tuple[int, ...]]:
        return (self.dim, self.vertices)

    def __lt__(self, other):
        if not isinstance(other, Simplex):
            return NotImplemented
        return self.key < other.key

    def facets(self) -> tuple[Simplex, ...]:
        """Codimension-1 faces; the i-th one omits vertex i."""
        if self.dim == 0:
            return ()
        v = self.vertices
        return tuple(Simplex(v[:i] + v[i + 1:]) for i in range(len(v)))

    def faces(self) -> Iterator[Simplex]:
        v = self.vertices
        for k in range(1, len(v) + 1):
            for sub in combinations(v, k):
                yield Simplex(sub)

    def is_face_of(self, other: Simplex) -> bool:
        return set(self.vertices) <= set(other.vertices)

    def label(self) -> str:
        if self.vertices[-1] < len(_LETTERS):
            return "".join(_LETTERS[v] for v in self.vertices)
        return "[" + ",".join(map(str, self.vertices)) + "]"

    def __str__(self):
        return self.label()

    def __repr__(self):
        return f"Simplex{self.vertices}"


class SimplicialComplex:
    """A finite simplicial complex with facet/coface adjacency.

    Iteration order is canonical (dimension, then lexicographic).
    """

    def __init__(self, simplices: Iterable[Simplex]):
        seen: set[Simplex] = set()
        for s in simplices:
            if s in seen:
                raise DuplicateSimplex(s)
            seen.add(s)
        self.simplices: tuple[Simplex, ...] = tuple(sorted(seen))
        self.index = {s: i for i, s in enumerate(self.simplices)}
        self._facets: dict[Simplex, tuple[Simplex, ...]] = {}
        cofaces: dict[Simplex, list[Simplex]] = {s: [] for s in self.simplices}
        for s in self.simplices:
            fs = s.facets()
            for t in fs:
                if t not in seen:
                    raise NotClosed(s, t)
                cofaces[t].append(s)
            self._facets[s] = fs
        self._cofaces = {s: tuple(c) for s, c in cofaces.items()}

    def __len__(self):
        return len(self.simplices)

    def __iter__(self):
        return iter(self.simplices)

    def __contains__(self, s):
        return s in self.index

    def __repr__(self):
        return f"SimplicialComplex({len(self)} simplices, dim {self.dimension})"

    @property
    def dimension(self) -> int:
        return self.simplices[-1].dim if self.simplices else -1

    def require(self, s: Simplex) -> None:
        if s not in self.index:
            raise SimplexNotInComplex(s)

    def facets(self, s: Simplex) -> tuple[Simplex, ...]:
        self.require(s)
        return self._facets[s]

    def cofaces(self, s: Simplex) -> tuple[Simplex, ...]:
        """Codimension-1 cofaces of ``s``."""
        self.require(s)
        return self._cofaces[s]

    def of_dim(self, n: int) -> tuple[Simplex, ...]:
        return tuple(s for s in self.simplices if s.dim == n)


def build_complex(generators: Sequence[Simplex]) -> SimplicialComplex:
    """Downward closure of ``generators``."""
    if not generators:
        raise ValueError("need at least one generator")
    seen: set[Simplex] = set()
    for g in generators:
        if g in seen:
            raise DuplicateSimplex(g)
        seen.add(g)
    closure = {face for g in generators for face in g.faces()}
    return SimplicialComplex(closure)


def _as_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, bool):
        raise TypeError("booleans are not filtration values")
    if isinstance(v, (numbers.Rational, str)):
        return Fraction(v)
    raise TypeError(f"filtration values must be exact rationals, got {type(v).__name__}")


@dataclass(frozen=True, eq=False)
class Filtration:
    """An injective, face-monotone assignment of rationals to a complex.

    Construction validates; use :func:`validate_filtration` or the
    constructor directly.
    """

    complex: SimplicialComplex
    values: Mapping[Simplex, Fraction]

    def __post_init__(self):
        K = self.complex
        vals = {}
        for s in K:
            if s not in self.values:
                raise MissingValue(s)
            vals[s] = _as_fraction(self.values[s])
        for s in self.values:
            if s not in K:
                raise UnknownSimplex(s)
        owner: dict[Fraction, Simplex] = {}
        for s in K:
            v = vals[s]
            if v in owner:
                raise DuplicateValue(owner[v], s, v)
            owner[v] = s
        for s in K:
            for t in K.facets(s):
                if vals[t] > vals[s]:
                    raise MonotonicityViolation(t, s)
        object.__setattr__(self, "values", vals)

    def __call__(self, s: Simplex) -> Fraction:
        try:
            return self.values[s]
        except KeyError:
            raise SimplexNotInComplex(s) from None

    def __eq__(self, other):
        if not isinstance(other, Filtration):
            return NotImplemented
        return self.values == other.values

    __hash__ = None

    @cached_property
    def order(self) -> tuple[Simplex, ...]:
        """Simplices sorted by filtration value."""
        return tuple(sorted(self.complex, key=self.values.__getitem__))

    def sup_distance(self, other: Filtration) -> Fraction:
        if set(self.values) != set(other.values):
            raise ValueError("filtrations live on different complexes")
        return max(abs(self.values[s] - other.values[s]) for s in self.complex)

    def replace(self, updates: Mapping[Simplex, object]) -> Filtration:
        vals = dict(self.values)
        for s, v in updates.items():
            self.complex.require(s)
            vals[s] = _as_fraction(v)
        return Filtration(self.complex, vals)


def validate_filtration(complex: SimplicialComplex, values: Mapping[Simplex, object]) -> Filtration:
    return Filtration(complex, values)


def injectivity_radius(f: Filtration) -> Fraction:
    """Smallest gap between two filtration values."""
    vals = sorted(f.values.values())
    if len(vals) < 2:
        raise SingleSimplex("injectivity radius needs at least two simplices")
    return min(b - a for a, b in zip(vals, vals[1:]))


def pairwise_gaps(f: Filtration) -> list[Fraction]:
    vals = sorted(f.values.values())
    return [b - a for a, b in combinations(vals, 2)]


def is_generic(f: Filtration) -> bool:
    gaps = pairwise_gaps(f)
    return len(set(gaps)) == len(gaps)


def upper_set(K: SimplicialComplex, sigma: Simplex) -> frozenset[Simplex]:
    """All simplices having ``sigma`` as a face, ``sigma`` included."""
    K.require(sigma)
    out = {sigma}
    stack = [sigma]
    while stack:
        for c in K.cofaces(stack.pop()):
            if c not in out:
                out.add(c)
                stack.append(c)
    return frozenset(out)


def lower_set(K: SimplicialComplex, sigma: Simplex) -> frozenset[Simplex]:
    """All faces of ``sigma``, ``sigma`` included."""
    K.require(sigma)
    return frozenset(sigma.faces())


def switch_pair(f: Filtration, sigma1: Simplex, sigma2: Simplex, eps) -> Filtration:
    """Swap two same-dimensional simplices within an ``eps``-perturbation.

    Requires ``f(sigma1) < f(sigma2) < f(sigma1) + 2*eps``. The upper set of
    ``sigma1`` is raised and the lower set of ``sigma2`` lowered by a common
    shift ``s <= eps``; ``s`` avoids every pairwise gap and half-gap so the
    result is injective.
    """
    eps = _as_fraction(eps)
    K = f.complex
    K.require(sigma1)
    K.require(sigma2)
    if sigma1.dim != sigma2.dim or sigma1 == sigma2:
        raise DimensionMismatch(f"need two distinct simplices of equal dimension, got {sigma1}, {sigma2}")
    gap = f(sigma2) - f(sigma1)
    if gap <= 0:
        raise PreconditionGapTooLarge(f"need f({sigma1}) < f({sigma2})")
    if gap >= 2 * eps:
        raise PreconditionGapTooLarge(f"gap {gap} is not below 2*eps = {2 * eps}")

    gaps = set(pairwise_gaps(f))
    bad = gaps | {d / 2 for d in gaps}
    shift = eps
    if shift in bad:
        lo = max(x for x in bad if x < eps)  # gap/2 is in bad and below eps
        shift = (lo + eps) / 2

    up = upper_set(K, sigma1)
    down = lower_set(K, sigma2)
    vals = dict(f.values)
    for s in up:
        vals[s] += shift
    for s in down:
        vals[s] -= shift
    return Filtration(K, vals)


def _block_values(f: Filtration, block: Sequence[Simplex], perm: Sequence[int], eps: Fraction):
    K = f.complex
    k = len(block)
    lo = f(block[-1]) - eps
    width = f(block[0]) + eps - lo
    step = width / (k + 1)
    g = dict(f.values)
    for rank, i in enumerate(perm, start=1):
        g[block[i]] = lo + rank * step
    shifts = {s: g[s] - f(s) for s in block}
    raised = [s for s in block if shifts[s] > 0]
    lowered = [s for s in block if shifts[s] < 0]
    up_shift = max((shifts[s] for s in raised), default=Fraction(0))
    down_shift = max((-shifts[s] for s in lowered), default=Fraction(0))
    members = set(block)
    for s in set().union(*(upper_set(K, s) for s in raised)) - members:
        g[s] = f(s) + up_shift
    for s in set().union(*(lower_set(K, s) for s in lowered)) - members:
        g[s] = f(s) - down_shift
    return g


def permute_block(f: Filtration, block: Sequence[Simplex], perm: Sequence[int], eps) -> Filtration:
    """Realize an arbitrary order on a block of same-dimensional simplices.

    ``block`` must be f-increasing with span below ``2*eps``. ``perm`` lists
    block indices from lowest to highest new value, i.e. the result satisfies
    ``g(block[perm[0]]) < g(block[perm[1]]) < ...``.

    The block is spread evenly over ``(f(last) - eps, f(first) + eps]``, and
    upper/lower sets of moved simplices follow by the largest upward and
    downward block shift. If the result is not injective, ``eps`` is shrunk
    towards the span bound by repeated halving until it is.
    """
    eps = _as_fraction(eps)
    block = list(block)
    if not block:
        raise ValueError("empty block")
    for s in block:
        f.complex.require(s)
    if len({s.dim for s in block}) != 1:
        raise DimensionMismatch("block simplices must share one dimension")
    if any(f(s) >= f(t) for s, t in zip(block, block[1:])):
        raise BlockNotSorted("block must be listed in strictly increasing f-order")
    if sorted(perm) != list(range(len(block))):
        raise NotAPermutation(f"{list(perm)} is not a permutation of 0..{len(block) - 1}")
    span = f(block[-1]) - f(block[0])
    if span >= 2 * eps:
        raise BlockSpanTooLarge(f"block span {span} is not below 2*eps = {2 * eps}")

    floor = span / 2
    e = eps
    for j in range(1, 200):
        g = _block_values(f, block, perm, e)
        if len(set(g.values())) == len(g):
            return Filtration(f.complex, g)
        e = eps - (eps - floor) / 2 ** j
    raise RuntimeError("could not repair injectivity")  # pragma: no cover


def is_order_realizable(f: Filtration, order: Sequence[Simplex], eps) -> bool:
    """Whether some injective ``g`` with ``|f - g| <= eps`` induces ``order``.

    That holds exactly when ``order`` is a linear extension of the face poset
    and every inverted pair has an f-gap strictly below ``2*eps``.
    """
    eps = _as_fraction(eps)
    _check_permutation(f, order)
    if not _is_linear_extension(f.complex, order):
        return False
    vals = [f(s) for s in order]
    bound = 2 * eps
    running_max = None
    for v in vals:
        # the worst inversion ending at v is against the largest earlier value
        if running_max is not None and running_max - v >= bound and running_max > v:
            return False
        running_max = v if running_max is None else max(running_max, v)
    return True


def _is_linear_extension(K: SimplicialComplex, order: Sequence[Simplex]) -> bool:
    pos = {s: i for i, s in enumerate(order)}
    return all(pos[t] < pos[s] for s in order for t in K.facets(s))


def _check_permutation(f: Filtration, order: Sequence[Simplex]) -> None:
    if len(order) != len(f.complex) or set(order) != set(f.complex.simplices):
        raise NotAPermutation("order must list every simplex of the complex exactly once")


def witness_filtration(f: Filtration, order: Sequence[Simplex], eps) -> Filtration:
    """An explicit ``eps``-perturbation of ``f`` inducing ``order``.

    Greedy placement: each simplex gets ``max(previous + step, f - eps)``,
    with ``step`` small enough that nothing exceeds ``f + eps``.
    """
    eps = _as_fraction(eps)
    _check_permutation(f, order)
    if not _is_linear_extension(f.complex, order):
        raise OrderNotLinearExtension("a face appears after one of its cofaces")
    if not is_order_realizable(f, order, eps):
        raise OrderNotRealizable("order is not realizable within eps")
    vals = [f(s) for s in order]
    n = len(vals)
    step = Fraction(1)
    for k in range(n):
        for j in range(k):
            slack = 2 * eps - (vals[j] - vals[k])
            step = min(step, slack / (k - j))
    g = {}
    prev = None
    for s, v in zip(order, vals):
        cur = v - eps if prev is None else max(prev + step, v - eps)
        g[s] = cur
        prev = cur
    return Filtration(f.complex, g)


class OrderSearch:
    """Backtracking frame for eps-realizable orders.

    Simplices are addressed by their index in ``f.order``. A simplex may be
    placed next when its facets are placed and its value is within (strictly)
    ``2*eps`` of the smallest unplaced value; that keeps every prefix
    realizable, and every realizable prefix extends (e.g. by the remaining
    simplices in f-order) to a full realizable order.
    """

    def __init__(self, f: Filtration, eps):
        self.f = f
        self.eps = _as_fraction(eps)
        self.simplices = f.order
        self.index = {s: i for i, s in enumerate(self.simplices)}
        self.values = [f(s) for s in self.simplices]
        self.facets = [tuple(self.index[t] for t in f.complex.facets(s)) for s in self.simplices]
        self.window = 2 * self.eps

    def __len__(self):
        return len(self.simplices)

    def candidates(self, placed: Sequence[bool]) -> list[int]:
        n = len(self.simplices)
        j0 = 0
        while j0 < n and placed[j0]:
            j0 += 1
        out = []
        i = j0
        base = self.values[j0] if j0 < n else None
        while i < n and (i == j0 or self.values[i] - base < self.window):
            if not placed[i] and all(placed[k] for k in self.facets[i]):
                out.append(i)
            i += 1
        return out

    def completion(self, prefix: Sequence[int]) -> tuple[Simplex, ...]:
        """Extend a realizable prefix by the remaining simplices in f-order."""
        used = set(prefix)
        rest = [i for i in range(len(self.simplices)) if i not in used]
        return tuple(self.simplices[i] for i in list(prefix) + rest)

    def start(self, prefix: Sequence[Simplex]) -> tuple[list[bool], list[int]]:
        placed = [False] * len(self.simplices)
        stack = []
        for s in prefix:
            i = self.index.get(s)
            if i is None or i not in self.candidates(placed):
                raise OrderNotRealizable(f"prefix is not eps-realizable at {s}")
            placed[i] = True
            stack.append(i)
        return placed, stack


def first_moves(f: Filtration, eps) -> list[Simplex]:
    """Possible first simplices of an eps-realizable order (for partitioning)."""
    search = OrderSearch(f, eps)
    return [search.simplices[i] for i in search.candidates([False] * len(search))]


def realizable_orders(f: Filtration, eps, cap: int = 10**6,
                      prefix: Sequence[Simplex] = ()) -> Iterator[tuple[Simplex, ...]]:
    """Yield every eps-realizable simplex order, lexicographically by f-rank.

    The first order yielded is the f-order itself. Raises
    :class:`EnumerationCapExceeded` when asked for more than ``cap`` orders.
    ``prefix`` restricts the enumeration to one subtree.
    """
    search = OrderSearch(f, eps)
    if search.eps < 0:
        raise ValueError("eps must be non-negative")
    placed, stack = search.start(prefix)
    n = len(search)
    count = 0

    def walk():
        nonlocal count
        if len(stack) == n:
            count += 1
            if count > cap:
                raise EnumerationCapExceeded(cap)
            yield tuple(search.simplices[i] for i in stack)
            return
        for i in search.candidates(placed):
            placed[i] = True
            stack.append(i)
            yield from walk()
            stack.pop()
            placed[i] = False

    yield from walk()
