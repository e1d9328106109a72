"""Terminal-simplex rigidity of homology classes and bars.

The exact set of terminal simplices reachable by eps-perturbations is
computed by brute force over eps-realizable simplex orders. Certificates,
threshold scans and the first-break analysis are built on top of it.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .core import Filtration, OrderSearch, Simplex, first_moves, pairwise_gaps, realizable_orders
from .errors import (
    EnumerationCapExceeded,
    EpsilonOutOfDomain,
    HypothesesNotSatisfied,
    InfiniteBar,
    InfiniteTerminationScale,
    NoMatchingBar,
    NoSuchBar,
    PerturbationTooLarge,
)
from .persistence import (
    INF,
    Bar,
    Chain,
    ClassLifespan,
    FieldSpec,
    ReducedFiltration,
    barcode,
    class_lifespan,
    reduce,
    reduce_against,
    representative,
    terminal_simplex,
)

LIFESPAN, UPPER, LOWER = "lifespan", "R_u", "R_l"


def _lifespan(f: Filtration, alpha: Chain, field: FieldSpec) -> tuple[ReducedFiltration, ClassLifespan]:
    R = reduce(f.complex, f.order, field)
    life = class_lifespan(R, f, alpha)
    if life.terminal_simplex is None:
        raise InfiniteTerminationScale(f"{alpha} never becomes a boundary")
    return R, life


def r_bounds(f: Filtration, R: ReducedFiltration, b, n: int):
    """Distances from ``b`` to the nearest later birth and earlier death.

    Only (n+1)-simplices count: they are the ones that create H_{n+1}
    classes or terminate H_n classes. Returns ``(R_u, R_l)``, ``inf`` when
    no such simplex exists.
    """
    if b == INF:
        raise InfiniteTerminationScale("R_u/R_l need a finite termination scale")
    upper, lower = INF, INF
    for tau in f.complex.of_dim(n + 1):
        v = f(tau)
        if v > b and not R.is_terminal(tau):
            upper = min(upper, v - b)
        elif v < b and R.is_terminal(tau):
            lower = min(lower, b - v)
    return upper, lower


@dataclass(frozen=True)
class RigidityCertificate:
    cycle: Chain
    a: Fraction
    b: Fraction
    R_u: Fraction | float
    R_l: Fraction | float
    epsilon_star: Fraction
    limiting: tuple[str, ...]
    terminal_simplex: Simplex


def rigidity_radius(f: Filtration, alpha: Chain, field: FieldSpec = FieldSpec()) -> RigidityCertificate:
    """Largest eps guaranteed by the sufficient condition: half of min{b-a, R_u, R_l}.

    The terminal simplex of ``[alpha]`` is constant for every perturbation of
    size at most the returned ``epsilon_star`` (the bound itself included).
    """
    R, life = _lifespan(f, alpha, field)
    upper, lower = r_bounds(f, R, life.b, alpha.dimension)
    parts = {LIFESPAN: life.b - life.a, UPPER: upper, LOWER: lower}
    smallest = min(parts.values())
    limiting = tuple(k for k, v in parts.items() if v == smallest)
    return RigidityCertificate(life.cycle, life.a, life.b, upper, lower, Fraction(smallest) / 2,
                               limiting, life.terminal_simplex)


@dataclass(frozen=True)
class SigmaResult:
    epsilon: Fraction
    terminal_simplices: tuple[Simplex, ...]
    witnesses: Mapping[Simplex, tuple[Simplex, ...]]
    orders_examined: int
    in_domain: bool
    method: str
    all_witnesses: Mapping[Simplex, tuple[tuple[Simplex, ...], ...]] | None = None

    def __len__(self):
        return len(self.terminal_simplices)

    @property
    def members(self) -> frozenset[Simplex]:
        return frozenset(self.terminal_simplices)


def _prefix_search(f: Filtration, alpha: Chain, eps: Fraction, p: int, cap: int,
                   first: Simplex | None = None):
    """Depth-first search over realizable prefixes with incremental reduction.

    A branch stops as soon as ``alpha`` becomes a boundary: every completion
    of that prefix has the same terminal simplex. Returns the terminal
    simplices with one witness order each, plus the number of branches.
    """
    search = OrderSearch(f, eps)
    n = len(search)
    boundary = [[(search.index[t], (-1) ** i % p) for i, t in enumerate(s.facets())]
                for s in search.simplices]
    alpha_at = {search.index[s]: c % p for s, c in alpha.terms.items()}
    placed = [False] * n
    pos = [-1] * n
    prefix: list[int] = []
    pivots: dict[int, dict[int, int]] = {}
    found: dict[Simplex, tuple[Simplex, ...]] = {}
    count = 0

    def visit(options):
        nonlocal count
        for i in options:
            k = len(prefix)
            placed[i] = True
            pos[i] = k
            prefix.append(i)
            col = reduce_against({pos[j]: c for j, c in boundary[i]}, pivots, p)
            low = max(col) if col else None
            if col:
                pivots[low] = col
            dead = (col and all(placed[j] for j in alpha_at)
                    and not reduce_against({pos[j]: c for j, c in alpha_at.items()}, pivots, p))
            if dead:
                count += 1
                if count > cap:
                    raise EnumerationCapExceeded(cap)
                found.setdefault(search.simplices[i], search.completion(prefix))
            elif k + 1 < n:
                visit(search.candidates(placed))
            if col:
                del pivots[low]
            prefix.pop()
            pos[i] = -1
            placed[i] = False

    top = search.candidates(placed)
    if first is not None:
        top = [search.index[first]]
    visit(top)
    return found, count


def _enumerate_search(f: Filtration, alpha: Chain, eps: Fraction, field: FieldSpec, cap: int,
                      first: Simplex | None = None, keep_all: bool = False):
    found: dict[Simplex, list[tuple[Simplex, ...]]] = {}
    count = 0
    prefix = (first,) if first is not None else ()
    for order in realizable_orders(f, eps, cap, prefix=prefix):
        count += 1
        delta = terminal_simplex(reduce(f.complex, order, field), alpha)
        bucket = found.setdefault(delta, [])
        if keep_all or not bucket:
            bucket.append(order)
    return found, count


def _subtree(args):
    f, alpha, eps, p, cap, first, method, keep_all = args
    if method == "prefix":
        return _prefix_search(f, alpha, eps, p, cap, first)
    return _enumerate_search(f, alpha, eps, FieldSpec(p), cap, first, keep_all)


def sigma_epsilon(f: Filtration, alpha: Chain, eps, cap: int = 10**6, field: FieldSpec = FieldSpec(),
                  *, method: str = "prefix", all_witnesses: bool = False, workers: int = 1) -> SigmaResult:
    """The exact set of terminal simplices of ``[alpha]`` over eps-perturbations.

    ``method="prefix"`` prunes every branch once ``alpha`` dies;
    ``method="enumerate"`` reduces every realizable order from scratch and is
    kept as an independent cross-check (``all_witnesses`` implies it).
    ``workers > 1`` splits the search by first simplex across processes; the
    merged result is identical to the serial one.

    Any ``eps > 0`` is accepted; ``in_domain`` records whether
    ``eps <= (b - a) / 2``.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise EpsilonOutOfDomain(f"eps must be positive, got {eps}")
    if method not in ("prefix", "enumerate"):
        raise ValueError(f"unknown method {method!r}")
    if all_witnesses:
        method = "enumerate"
    alpha = alpha.mod(field)
    _, life = _lifespan(f, alpha, field)

    if workers > 1:
        jobs = [(f, alpha, eps, field.p, cap, s, method, all_witnesses) for s in first_moves(f, eps)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_subtree, jobs))
    else:
        parts = [_subtree((f, alpha, eps, field.p, cap, None, method, all_witnesses))]

    merged: dict[Simplex, list] = {}
    count = 0
    for found, n in parts:
        count += n
        for delta, w in found.items():
            if method == "prefix":
                w = [w]
            bucket = merged.setdefault(delta, [])
            if all_witnesses or not bucket:
                bucket.extend(w if all_witnesses else w[:1])
    if count > cap:
        raise EnumerationCapExceeded(cap)

    members = tuple(sorted(merged, key=f))
    return SigmaResult(
        epsilon=eps,
        terminal_simplices=members,
        witnesses={d: merged[d][0] for d in members},
        orders_examined=count,
        in_domain=eps <= (life.b - life.a) / 2,
        method=method,
        all_witnesses={d: tuple(merged[d]) for d in members} if all_witnesses else None,
    )


def rigidity_thresholds(f: Filtration) -> list[Fraction]:
    """Half of every pairwise value gap.

    The set of reachable orders, and hence the set of terminal simplices,
    can only change at these values.
    """
    return sorted({g / 2 for g in pairwise_gaps(f)})


SEQUENTIAL, INDEPENDENT, INCONCLUSIVE = "sequential", "independent", "inconclusive"


@dataclass(frozen=True)
class BreakingReport:
    cycle: Chain
    a: Fraction
    b: Fraction
    t0: Fraction | None
    delta1: Simplex
    sigma_above: tuple[Simplex, ...] = ()
    probe: Fraction | None = None
    new_terminals: tuple[Simplex, ...] = ()
    partner_candidates: tuple[Simplex, ...] = ()
    partner_prediction: Simplex | None = None
    classification: str | None = None

    @property
    def prediction_agrees(self) -> bool | None:
        if self.t0 is None:
            return None
        return self.partner_prediction is not None and self.partner_prediction in self.sigma_above


def breaking_analysis(f: Filtration, alpha: Chain, cap: int = 10**6, field: FieldSpec = FieldSpec(),
                      *, workers: int = 1) -> BreakingReport:
    """Locate the first eps at which the terminal simplex stops being unique.

    Thresholds ``t <= (b-a)/2`` are scanned in increasing order; the set of
    terminal simplices is evaluated just above each one (midway to the next
    threshold) until it has more than one member. ``t0`` is that threshold,
    ``None`` if no threshold in the domain breaks rigidity. The predicted
    partner is the simplex of the same dimension as ``delta1`` at value
    ``f(delta1) +/- 2*t0``.
    """
    alpha = alpha.mod(field)
    R, life = _lifespan(f, alpha, field)
    half = (life.b - life.a) / 2
    ts = rigidity_thresholds(f)
    t0 = above = probe = None
    for k, t in enumerate(ts):
        if t > half:
            break
        nxt = ts[k + 1] if k + 1 < len(ts) else t + 1
        probe = (t + nxt) / 2
        result = sigma_epsilon(f, alpha, probe, cap, field, workers=workers)
        if len(result) > 1:
            t0, above = t, result
            break
    if t0 is None:
        return BreakingReport(alpha, life.a, life.b, None, life.terminal_simplex)

    t = t0
    at_t0 = sigma_epsilon(f, alpha, t, cap, field, workers=workers)
    (delta1,) = at_t0.terminal_simplices
    target = {f(delta1) + 2 * t, f(delta1) - 2 * t}
    candidates = tuple(s for s in f.order if s.dim == delta1.dim and f(s) in target)
    partner, kind = None, INCONCLUSIVE
    if len(candidates) == 1:
        partner = candidates[0]
        below = f(partner) < f(delta1)
        if below and R.is_terminal(partner):
            kind = SEQUENTIAL
        elif not below and not R.is_terminal(partner):
            kind = INDEPENDENT
    return BreakingReport(
        cycle=alpha,
        a=life.a,
        b=life.b,
        t0=t,
        delta1=delta1,
        sigma_above=above.terminal_simplices,
        probe=probe,
        new_terminals=tuple(s for s in above.terminal_simplices if s != delta1),
        partner_candidates=candidates,
        partner_prediction=partner,
        classification=kind,
    )


@dataclass(frozen=True)
class BarRigidityVerdict:
    bar: Bar
    epsilon: Fraction
    narrow_enough: bool
    separated: bool
    violating_bars: tuple[Bar, ...]
    within_r_bounds: bool
    R_u: Fraction | float
    R_l: Fraction | float
    representative: Chain = field(repr=False)

    @property
    def hypotheses_ok(self) -> bool:
        return self.narrow_enough and self.separated and self.within_r_bounds

    @property
    def rigid(self) -> bool:
        return self.hypotheses_ok

    @property
    def matching_hypotheses(self) -> bool:
        """The conditions under which the matched bar ends when ``[alpha]`` dies."""
        return self.narrow_enough and self.separated


def find_bar(f: Filtration, n: int, a, b, field: FieldSpec = FieldSpec()) -> Bar:
    R = reduce(f.complex, f.order, field)
    for bar in barcode(R, f, n):
        if bar.a == a and bar.b == b:
            return bar
    raise NoSuchBar(f"no bar [{a}, {b}) in dimension {n}")


def bar_rigidity_check(f: Filtration, bar: Bar, eps, field: FieldSpec = FieldSpec()) -> BarRigidityVerdict:
    """Evaluate the barcode-level rigidity hypotheses for ``bar`` literally.

    Every other bar of the same dimension, infinite ones included, must
    start after ``a + 2*eps`` or end before ``b - 2*eps``.
    """
    eps = Fraction(eps)
    if not bar.finite:
        raise InfiniteBar("rigidity of the terminal simplex needs a finite bar")
    R = reduce(f.complex, f.order, field)
    bars = barcode(R, f, bar.dimension)
    if bar not in bars.bars:
        raise NoSuchBar(f"{bar} is not a bar of this filtration")
    a, b = bar.a, bar.b
    others = [x for x in bars if x != bar]
    violators = tuple(x for x in others if not (x.a > a + 2 * eps or x.b < b - 2 * eps))
    upper, lower = r_bounds(f, R, b, bar.dimension)
    return BarRigidityVerdict(
        bar=bar,
        epsilon=eps,
        narrow_enough=eps < (b - a) / 4,
        separated=not violators,
        violating_bars=violators,
        within_r_bounds=eps <= min(upper, lower) / 2,
        R_u=upper,
        R_l=lower,
        representative=representative(R, bar),
    )


def matched_bar(f: Filtration, g: Filtration, bar: Bar, eps, field: FieldSpec = FieldSpec()) -> Bar:
    """The bar of ``g`` matched to ``bar``, resolved through its representative cycle.

    The representative cycle of ``bar`` under ``f`` is followed into ``g``;
    the g-bar of the same dimension ending at its termination scale is the
    match.
    """
    eps = Fraction(eps)
    if g.sup_distance(f) > eps:
        raise PerturbationTooLarge(f"|f - g| = {g.sup_distance(f)} exceeds eps = {eps}")
    verdict = bar_rigidity_check(f, bar, eps, field)
    if not verdict.matching_hypotheses:
        raise HypothesesNotSatisfied("bar is not isolated enough for eps; see bar_rigidity_check")
    Rg = reduce(g.complex, g.order, field)
    life = class_lifespan(Rg, g, verdict.representative)
    for candidate in barcode(Rg, g, bar.dimension):
        if candidate.finite and candidate.terminal_simplex == life.terminal_simplex:
            if abs(candidate.b - bar.b) > eps:
                raise NoMatchingBar(f"matched bar {candidate} ends more than eps from {bar.b}")
            return candidate
    raise NoMatchingBar(f"no bar of g ends at {life.b}")
