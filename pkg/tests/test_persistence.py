from __future__ import annotations

import math
import random
from fractions import Fraction as Q

import pytest
from hypothesis import given, settings, strategies as st

from rigidph.core import Filtration, Simplex, SimplicialComplex
from rigidph.errors import DimensionOutOfRange, InfiniteBarMismatch, NotACycle, SimplexNotInComplex, ZeroChain
from rigidph.fixtures import A, AB, ABC, AC, B, BC, C, edge, path3, path3g, tri, trif
from rigidph.persistence import (
    INF,
    Bar,
    Chain,
    FieldSpec,
    barcode,
    barcodes,
    bottleneck_distance,
    boundary_chain,
    class_lifespan,
    classify_simplex,
    reduce,
    representative,
    terminal_simplex,
)
from rigidph.sampling import random_complex, random_filtration, random_perturbation

import oracles

FIXTURES = [edge, path3, path3g, tri, trif]
seeds = st.integers(min_value=0, max_value=2**32 - 1)


def instance(seed, max_simplices=9):
    rng = random.Random(seed)
    return rng, random_filtration(rng, random_complex(rng, max_simplices))


def spans(bc):
    return [(b.a, b.b, b.birth_simplex, b.terminal_simplex) for b in bc.bars]


def test_field_spec():
    assert FieldSpec(5).inv(2) == 3
    for bad in (0, 1, 4, 9):
        with pytest.raises(ValueError):
            FieldSpec(bad)


def test_boundary_chain():
    p = FieldSpec(5)
    assert boundary_chain(AB, p).terms == {B: 1, A: 4}
    assert boundary_chain(A, p).is_zero()
    assert boundary_chain(ABC, FieldSpec(3)).terms == {BC: 1, AC: 2, AB: 1}


def test_chain_rejects_mixed_dimensions():
    with pytest.raises(ValueError):
        Chain(0, {A: 1, AB: 1})
    assert Chain(0, {A: 0}).is_zero()


def test_reduce_examples():
    f = tri()
    R = reduce(f.complex, f.order)
    assert set(R.pairing) == {(B, AB), (C, BC)}
    assert set(R.essential) == {A, AC}
    R = reduce(trif().complex, trif().order)
    assert set(R.pairing) == {(B, AB), (C, BC), (AC, ABC)}
    assert set(R.essential) == {A}
    R = reduce(edge().complex, edge().order)
    assert R.pairing == ((B, AB),)
    assert R.essential == (A,)


def test_barcode_examples():
    f = tri()
    R = reduce(f.complex, f.order)
    assert spans(barcode(R, f, 0)) == [(0, INF, A, None), (1, 3, B, AB), (2, 4, C, BC)]
    assert spans(barcode(R, f, 1)) == [(5, INF, AC, None)]
    g = trif()
    assert spans(barcode(reduce(g.complex, g.order), g, 1)) == [(5, 6, AC, ABC)]
    with pytest.raises(DimensionOutOfRange):
        barcode(R, f, 2)


def test_classify_simplex():
    R = reduce(tri().complex, tri().order)
    assert classify_simplex(R, AB) == "terminal"
    assert classify_simplex(R, AC) == "birth"
    assert all(classify_simplex(R, v) == "birth" for v in (A, B, C))


@pytest.mark.parametrize("make, terms, p, expected", [
    (tri, {B: 1, A: -1}, 2, (1, 3, AB)),
    (tri, {AB: 1, BC: 1, AC: 1}, 2, (5, math.inf, None)),
    (trif, {AB: 1, BC: 1, AC: 1}, 2, (5, 6, ABC)),
    (path3, {C: 1, A: -1}, 2, (2, 4, BC)),
    (path3, {C: 1, A: -1}, 3, (2, 4, BC)),
    (trif, {AB: 1, BC: 1, AC: -1}, 5, (5, 6, ABC)),
])
def test_class_lifespan_examples(make, terms, p, expected):
    f = make()
    field = FieldSpec(p)
    frozen = oracles.lifespan(f, terms, p)
    assert frozen == expected
    life = class_lifespan(reduce(f.complex, f.order, field), f, Chain.of(terms))
    assert (life.a, life.b, life.terminal_simplex) == expected


def test_cycle_errors():
    f = tri()
    R = reduce(f.complex, f.order)
    with pytest.raises(NotACycle):
        terminal_simplex(R, Chain.of({AB: 1}))
    with pytest.raises(ZeroChain):
        terminal_simplex(R, Chain(0, {}))
    with pytest.raises(SimplexNotInComplex):
        terminal_simplex(R, Chain.of({AB: 1, BC: 1, AC: 1, Simplex.of(0, 3): 1}))


def test_bottleneck_examples():
    bar = lambda a, b: Bar(0, Q(a), b if b is INF else Q(b), A, None if b is INF else AB)
    B = [bar(0, 2), bar(1, INF)]
    assert bottleneck_distance(B, B) == 0
    assert bottleneck_distance([bar(0, 2)], [bar(0, 3)]) == 1
    assert bottleneck_distance([bar(0, 1)], []) == Q(1, 2)
    with pytest.raises(InfiniteBarMismatch):
        bottleneck_distance([bar(0, INF)], [])
    with pytest.raises(ValueError):
        Bar(0, Q(1), Q(1), A, AB)


def test_elder_rule_on_edge():
    R = reduce(edge().complex, edge().order)
    assert (B, AB) in R.pairing and (A, AB) not in R.pairing


@pytest.mark.parametrize("make", FIXTURES)
def test_field_independence_on_fixtures(make):
    f = make()
    ref = [spans(b) for b in barcodes(f, FieldSpec(2))]
    for p in (3, 5):
        assert [spans(b) for b in barcodes(f, FieldSpec(p))] == ref


def _check_rank_oracle(f, p):
    for bc in barcodes(f, FieldSpec(p)):
        n = bc.dimension
        for r in sorted({f(s) for s in f.complex}):
            present = [s for s in f.complex if f(s) <= r]
            assert bc.alive_at(r) == oracles.betti(present, n, p)


@pytest.mark.parametrize("make", FIXTURES)
def test_rank_oracle_fixtures(make):
    _check_rank_oracle(make(), 2)


@settings(max_examples=60, deadline=None)
@given(seeds, st.sampled_from([2, 3, 5]))
def test_rank_oracle_random(seed, p):
    _, f = instance(seed)
    _check_rank_oracle(f, p)


@settings(max_examples=60, deadline=None)
@given(seeds, st.sampled_from([2, 3]))
def test_reduced_column_invariants(seed, p):
    _, f = instance(seed)
    R = reduce(f.complex, f.order, FieldSpec(p))
    pos = R.position
    pivots = set()
    for birth, death in R.pairing:
        col = R.reduced_columns[death]
        piv = max(col.terms, key=pos.__getitem__)
        assert piv == birth and piv not in pivots
        pivots.add(piv)
    for s in R.essential:
        assert R.reduced_columns[s].is_zero()


@settings(max_examples=60, deadline=None)
@given(seeds, st.sampled_from([2, 3]))
def test_class_lifespan_consistency(seed, p):
    _, f = instance(seed)
    R = reduce(f.complex, f.order, FieldSpec(p))
    for bc in barcodes(f, FieldSpec(p)):
        for bar in bc.bars:
            if not bar.finite:
                continue
            alpha = R.reduced_columns[bar.terminal_simplex]
            life = class_lifespan(R, f, alpha)
            assert (life.a, life.b, life.terminal_simplex) == (bar.a, bar.b, bar.terminal_simplex)
            assert representative(R, bar) == alpha
            assert oracles.lifespan(f, alpha.terms, p) == (bar.a, bar.b, bar.terminal_simplex)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_termination_scale_monotone_in_prefix(seed):
    _, f = instance(seed)
    R = reduce(f.complex, f.order)
    for _, death in R.pairing:
        alpha = R.reduced_columns[death].terms
        prev = math.inf
        for k in range(1, len(f.order) + 1):
            present = f.order[:k]
            if not set(alpha) <= set(present):
                continue
            sub = Filtration(SimplicialComplex(present), {s: f(s) for s in present})
            R_sub = reduce(sub.complex, sub.order)
            scale = class_lifespan(R_sub, sub, R.reduced_columns[death]).b
            assert scale <= prev
            prev = scale


@settings(max_examples=100, deadline=None)
@given(seeds, st.integers(min_value=1, max_value=12))
def test_stability(seed, k):
    rng, f = instance(seed)
    eps = Q(k, 4)
    g = random_perturbation(rng, f, eps)
    for bf, bg in zip(barcodes(f), barcodes(g)):
        assert bottleneck_distance(bf.bars, bg.bars) <= eps


@settings(max_examples=80, deadline=None)
@given(seeds)
def test_bottleneck_matches_brute_force(seed):
    rng = random.Random(seed)

    def bars():
        out = []
        for _ in range(rng.randint(0, 3)):
            a = Q(rng.randint(0, 20), 2)
            b = INF if rng.random() < 0.2 else a + Q(rng.randint(1, 16), 2)
            out.append(Bar(0, a, b, A, None if b is INF else AB))
        return out

    B1, B2 = bars(), bars()
    # both sides need the same number of essential bars
    while sum(not b.finite for b in B1) != sum(not b.finite for b in B2):
        B1, B2 = bars(), bars()
    assert bottleneck_distance(B1, B2) == oracles.bottleneck(B1, B2)
