"""Random desk-scale instances for property and fuzz testing."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

from .core import Filtration, Simplex, SimplicialComplex, build_complex, injectivity_radius
from .errors import ValidationError


def random_complex(rng: random.Random, max_simplices: int = 9) -> SimplicialComplex:
    """A random complex on 2-4 vertices with at most ``max_simplices`` simplices."""
    while True:
        nv = rng.randint(2, 4)
        verts = [Simplex.of(v) for v in range(nv)]
        edges = [Simplex((u, v)) for u, v in combinations(range(nv), 2) if rng.random() < 0.7]
        present = set(edges)
        tris = [Simplex(t) for t in combinations(range(nv), 3)
                if all(Simplex(e) in present for e in combinations(t, 2)) and rng.random() < 0.5]
        K = build_complex(verts + edges + tris)
        if len(K) <= max_simplices and len(K) >= 2:
            return K


def random_filtration(rng: random.Random, K: SimplicialComplex, denominator: int = 10,
                      spread: int = 40) -> Filtration:
    """Random injective filtration along a random linear extension of ``K``.

    Values are distinct multiples of ``1/denominator`` drawn from
    ``[0, spread]``.
    """
    order = []
    placed: set[Simplex] = set()
    pending = list(K)
    while pending:
        ready = [s for s in pending if all(t in placed for t in K.facets(s))]
        s = rng.choice(ready)
        pending.remove(s)
        placed.add(s)
        order.append(s)
    grid = rng.sample(range(spread * denominator + 1), len(order))
    values = sorted(Fraction(v, denominator) for v in grid)
    return Filtration(K, dict(zip(order, values)))


def random_perturbation(rng: random.Random, f: Filtration, eps, resolution: int = 64,
                        tries: int = 1000) -> Filtration:
    """Random injective ``g`` with ``|f - g| <= eps``.

    Shifts are drawn from a grid on ``[-eps, eps]`` (endpoints included);
    face-monotonicity is restored by lifting cofaces just above their faces,
    which never pushes a value past ``f + eps``.
    """
    eps = Fraction(eps)
    lift = injectivity_radius(f) / 7 if len(f.complex) > 1 else Fraction(1)
    K = f.complex
    for _ in range(tries):
        g = {}
        for s in K:  # faces before cofaces
            v = f(s) + eps * Fraction(rng.randint(-resolution, resolution), resolution)
            faces = [g[t] for t in K.facets(s)]
            if faces and v <= max(faces):
                v = max(faces) + lift
            g[s] = v
        try:
            return Filtration(K, g)
        except ValidationError:
            continue
    raise RuntimeError("could not sample an injective perturbation")
