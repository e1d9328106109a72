"""Text formats: filtration files, cycle literals and rational rendering.

Filtration file, one simplex per line::

    # comment
    0 1 : 7/2

Cycle literal: ``2*[0,1] - [1,2] + [0,2]``. Vertices inside brackets may be
listed in any order; an odd reordering flips the coefficient's sign.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable

from .core import Filtration, Simplex, SimplicialComplex
from .persistence import Chain


class FormatError(ValueError):
    """Malformed text input (CLI exit status 2)."""


def fmt_q(x) -> str:
    """Render an exact rational as ``num/den`` (bare integer when den is 1)."""
    if isinstance(x, float):
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        raise TypeError("refusing to render a float")
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_q(text: str):
    text = text.strip()
    if text in ("inf", "+inf", "∞"):
        return math.inf
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise FormatError(f"not a rational literal: {text!r}") from None


def parse_filtration(text: str) -> Filtration:
    """Parse a filtration file; validation errors propagate unchanged."""
    values: dict[Simplex, Fraction] = {}
    order: list[Simplex] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise FormatError(f"line {lineno}: expected 'v0 v1 ... : value'")
        verts, value = line.split(":", 1)
        try:
            vs = tuple(int(v) for v in verts.split())
            simplex = Simplex(vs)
        except ValueError as exc:
            raise FormatError(f"line {lineno}: {exc}") from None
        q = parse_q(value)
        if isinstance(q, float):
            raise FormatError(f"line {lineno}: filtration values must be finite")
        order.append(simplex)
        values[simplex] = q
    if not order:
        raise FormatError("empty filtration file")
    K = SimplicialComplex(order)  # rejects duplicates and non-closed lists
    return Filtration(K, values)


def read_filtration(path) -> Filtration:
    with open(path, encoding="utf-8") as fh:
        return parse_filtration(fh.read())


def dump_filtration(f: Filtration, header: Iterable[str] = ()) -> str:
    lines = [f"# {h}" for h in header]
    for s in f.complex:
        lines.append(f"{' '.join(map(str, s.vertices))} : {fmt_q(f(s))}")
    return "\n".join(lines) + "\n"


def write_filtration(f: Filtration, path, header: Iterable[str] = ()) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dump_filtration(f, header))


_TERM = re.compile(r"\s*([+-])?\s*(?:(\d+)\s*\*\s*)?\[([^\]]*)\]\s*")


def _sort_sign(vertices: list[int]) -> tuple[tuple[int, ...], int]:
    vs = list(vertices)
    sign = 1
    for i in range(len(vs)):
        for j in range(len(vs) - 1 - i):
            if vs[j] > vs[j + 1]:
                vs[j], vs[j + 1] = vs[j + 1], vs[j]
                sign = -sign
    return tuple(vs), sign


def parse_cycle(text: str) -> Chain:
    """Parse a cycle literal into a chain with integer coefficients."""
    terms: dict[Simplex, int] = {}
    pos = 0
    text = text.strip()
    if not text:
        raise FormatError("empty cycle literal")
    first = True
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos:
            raise FormatError(f"cannot parse cycle literal near {text[pos:]!r}")
        sign_tok, coef_tok, body = m.groups()
        if sign_tok is None and not first:
            raise FormatError(f"missing '+' or '-' before {m.group(0).strip()!r}")
        try:
            verts = [int(v) for v in re.split(r"[\s,]+", body.strip()) if v]
        except ValueError:
            raise FormatError(f"bad vertex list [{body}]") from None
        if not verts or len(set(verts)) != len(verts):
            raise FormatError(f"bad vertex list [{body}]")
        ordered, perm_sign = _sort_sign(verts)
        coef = int(coef_tok) if coef_tok else 1
        if sign_tok == "-":
            coef = -coef
        s = Simplex(ordered)
        terms[s] = terms.get(s, 0) + perm_sign * coef
        pos = m.end()
        first = False
    dims = {s.dim for s in terms}
    if len(dims) != 1:
        raise FormatError("all simplices of a cycle must share one dimension")
    return Chain(dims.pop(), terms)


def format_cycle(chain: Chain) -> str:
    out = []
    for s, c in chain.terms.items():
        body = "[" + ",".join(map(str, s.vertices)) + "]"
        mag = abs(c)
        term = body if mag == 1 else f"{mag}*{body}"
        if not out:
            out.append(term if c > 0 else f"- {term}")
        else:
            out.append(("+ " if c > 0 else "- ") + term)
    return " ".join(out) if out else "0"


_SIMPLEX_LETTERS = re.compile(r"^[A-Z]+$")


def parse_simplex(text: str) -> Simplex:
    """``AB`` (letters A=0, B=1, ...) or vertex ids like ``0 1`` / ``0-1``."""
    text = text.strip()
    if _SIMPLEX_LETTERS.match(text):
        verts = [ord(c) - ord("A") for c in text]
    else:
        try:
            verts = [int(v) for v in re.split(r"[\s\-_.]+", text.strip("[]")) if v]
        except ValueError:
            raise FormatError(f"not a simplex: {text!r}") from None
    ordered, _ = _sort_sign(verts)
    try:
        return Simplex(ordered)
    except ValueError as exc:
        raise FormatError(f"not a simplex: {text!r} ({exc})") from None
