"""Small named filtrations used in docs, tests and the acceptance suite.

Vertices A, B, C are ids 0, 1, 2.
"""

from __future__ import annotations

from fractions import Fraction as Q

from .core import Filtration, Simplex, build_complex

A, B, C = Simplex.of(0), Simplex.of(1), Simplex.of(2)
AB, BC, AC = Simplex.of(0, 1), Simplex.of(1, 2), Simplex.of(0, 2)
ABC = Simplex.of(0, 1, 2)


def _make(values: dict) -> Filtration:
    K = build_complex([s for s in values if not any(s != t and s.is_face_of(t) for t in values)])
    return Filtration(K, values)


def edge() -> Filtration:
    return _make({A: 0, B: 1, AB: 2})


def path3() -> Filtration:
    return _make({A: 0, B: 1, C: 2, AB: 3, BC: 4})


def path3g() -> Filtration:
    return _make({A: 0, B: 1, C: Q(22, 10), AB: Q(35, 10), BC: Q(49, 10)})


def tri() -> Filtration:
    return _make({A: 0, B: 1, C: 2, AB: 3, BC: 4, AC: 5})


def trif() -> Filtration:
    return _make({A: 0, B: 1, C: 2, AB: 3, BC: 4, AC: 5, ABC: 6})


def cycle_graph(m: int) -> Filtration:
    """Cycle on ``m`` vertices: vertices 0..m-1, then edges (0,1), ..., (m-2,m-1), (0,m-1)."""
    if m < 3:
        raise ValueError("a cycle graph needs at least 3 vertices")
    values = {Simplex.of(i): i for i in range(m)}
    edges = [Simplex.of(i, i + 1) for i in range(m - 1)] + [Simplex.of(0, m - 1)]
    for k, e in enumerate(edges):
        values[e] = m + k
    return _make(values)


ALL = {"EDGE": edge, "PATH3": path3, "PATH3G": path3g, "TRI": tri, "TRIF": trif}
