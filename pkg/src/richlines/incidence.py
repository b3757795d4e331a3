"""Point-line incidences in exact arithmetic, and the sum-product experiments
built on them."""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import ParseError, RichLinesError
from .scalar import (
    Grid,
    NumberSet,
    ScalarLike,
    as_scalar,
    decimal_context,
    format_scalar,
    parse_scalar,
    productset,
    sumset,
    working_precision,
)

GUARD_DIGITS = 15


@dataclass(frozen=True, order=True)
class GeneralLine:
    """``a*x + b*y = c`` scaled so the first nonzero of ``(a, b)`` is 1."""

    a: Fraction
    b: Fraction
    c: Fraction

    def __post_init__(self):
        a, b, c = (as_scalar(v) for v in (self.a, self.b, self.c))
        if a == 0 and b == 0:
            raise ValueError("a and b cannot both be zero")
        lead = a if a != 0 else b
        object.__setattr__(self, "a", a / lead)
        object.__setattr__(self, "b", b / lead)
        object.__setattr__(self, "c", c / lead)

    def contains(self, point) -> bool:
        x, y = point
        return self.a * x + self.b * y == self.c

    def __str__(self):
        return " ".join(format_scalar(v) for v in (self.a, self.b, self.c))


@dataclass(frozen=True)
class Configuration:
    """Distinct points and distinct lines.

    ``multiplicity[i]`` counts how many equations produced ``lines[i]``, and
    ``identity_equations`` counts equations ``0x + 0y = 0``, which every point
    satisfies.  Both exist for the representation reduction; a plain
    configuration has all multiplicities 1 and no identity equations.
    """

    points: tuple
    lines: tuple
    multiplicity: tuple = ()
    identity_equations: int = 0

    def __post_init__(self):
        points = tuple((as_scalar(x), as_scalar(y)) for x, y in self.points)
        if len(set(points)) != len(points):
            raise ValueError("duplicate point in configuration")
        lines = tuple(l if isinstance(l, GeneralLine) else GeneralLine(*l) for l in self.lines)
        if len(set(lines)) != len(lines):
            raise ValueError("duplicate line in configuration")
        mult = tuple(self.multiplicity) or (1,) * len(lines)
        if len(mult) != len(lines) or any(m < 1 for m in mult):
            raise ValueError("multiplicity must give a positive count per line")
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "lines", lines)
        object.__setattr__(self, "multiplicity", mult)

    @property
    def n_equations(self) -> int:
        return sum(self.multiplicity) + self.identity_equations


@dataclass(frozen=True)
class IncidenceReport:
    n_points: int
    n_lines: int
    incidences: int
    st_ratio: Decimal

    def to_dict(self) -> dict:
        return {
            "n_points": self.n_points,
            "n_lines": self.n_lines,
            "incidences": self.incidences,
            "st_ratio": str(self.st_ratio),
        }


def st_ratio(incidences: int, n_points: int, n_lines: int, prec: int | None = None) -> Decimal:
    """``I / ((N L)^(2/3) + N + L)`` to ``prec`` digits; 0 when there are no incidences."""
    if incidences == 0:
        return Decimal(0)
    prec = prec if prec is not None else working_precision()
    with localcontext(decimal_context(prec + GUARD_DIGITS)):
        nl = Decimal(n_points * n_lines)
        two_thirds = (nl.ln() * 2 / 3).exp() if nl > 0 else Decimal(0)
        ratio = Decimal(incidences) / (two_thirds + n_points + n_lines)
    with localcontext(decimal_context(prec)):
        return +ratio


def count_incidences(cfg: Configuration) -> IncidenceReport:
    """Exact count of pairs (point, line) with the point on the line.

    Lines count with their multiplicity, and every identity equation meets
    every point.  Points are bucketed by x so each line tests one candidate
    ``y`` per column.
    """
    columns: dict = {}
    for x, y in cfg.points:
        columns.setdefault(x, set()).add(y)
    total = cfg.identity_equations * len(cfg.points)
    for line, mult in zip(cfg.lines, cfg.multiplicity):
        if line.b == 0:
            hits = len(columns.get(line.c, ()))
        else:
            hits = sum(1 for x, ys in columns.items() if (line.c - line.a * x) / line.b in ys)
        total += mult * hits
    n_lines = cfg.n_equations
    return IncidenceReport(len(cfg.points), n_lines, total, st_ratio(total, len(cfg.points), n_lines))


def representation_count(x: ScalarLike, ca: NumberSet, cb: NumberSet, cg: NumberSet, cd: NumberSet) -> int:
    """``#{(a, b, c, d) in ca x cb x cg x cd : a*b - c*d = x}``."""
    x = as_scalar(x)
    left = Counter(a * b for a in ca for b in cb)
    right = Counter(c * d for c in cg for d in cd)
    return sum(n * right.get(v - x, 0) for v, n in left.items())


def representation_as_incidences(
    x: ScalarLike, ca: NumberSet, cb: NumberSet, cg: NumberSet, cd: NumberSet
) -> Configuration:
    """Lines ``a*X - c*Y = x`` for ``(a, c)`` in ``ca x cg`` against points ``cb x cd``.

    ``(b, d)`` lies on the line for ``(a, c)`` exactly when ``ab - cd = x``, so
    the weighted incidence count equals :func:`representation_count`.
    Coincident equations are merged into one line with a multiplicity.
    """
    x = as_scalar(x)
    counts: Counter = Counter()
    identities = 0
    for a in ca:
        for c in cg:
            if a == 0 and c == 0:
                # 0 = x: all points when x == 0, none otherwise
                identities += x == 0
                continue
            counts[GeneralLine(a, -c, x)] += 1
    lines = sorted(counts)
    return Configuration(
        points=tuple((b, d) for b in cb for d in cd),
        lines=tuple(lines),
        multiplicity=tuple(counts[l] for l in lines),
        identity_equations=identities,
    )


def grid_configuration(g: Grid, lines: Iterable) -> Configuration:
    """Grid points with the given slope-intercept lines as ``-λx + y = μ``."""
    general = [GeneralLine(-l.slope, 1, l.intercept) for l in lines]
    return Configuration(tuple(g.points()), tuple(general))


@dataclass(frozen=True)
class ElekesReport:
    n: int
    sumset_size: int
    productset_size: int
    product: int
    bound: Decimal
    bound_holds: bool
    exponent: Decimal

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "sumset_size": self.sumset_size,
            "productset_size": self.productset_size,
            "product": self.product,
            "n_pow_5_2": str(self.bound),
            "bound_holds": self.bound_holds,
            "exponent": str(self.exponent),
        }


def elekes_experiment(a: NumberSet, prec: int | None = None) -> ElekesReport:
    """Compare ``|A+A| * |A.A|`` with ``|A|^(5/2)``.

    The comparison squares both sides and is exact; the decimal fields are
    for display.
    """
    n = len(a)
    if n < 2:
        raise RichLinesError("elekes experiment needs |A| >= 2")
    s, p = len(sumset(a, a)), len(productset(a, a))
    product = s * p
    prec = prec if prec is not None else working_precision()
    with localcontext(decimal_context(prec + GUARD_DIGITS)):
        bound = Decimal(n**5).sqrt()
        exponent = Decimal(product).ln() / Decimal(n).ln()
    with localcontext(decimal_context(prec)):
        bound, exponent = +bound, +exponent
    return ElekesReport(n, s, p, product, bound, product * product >= n**5, exponent)


def parse_configuration(text: str, source: str | None = None) -> Configuration:
    """Read a ``[points]`` section of ``x y`` lines and a ``[lines]`` section of ``a b c`` lines."""
    section = None
    points, lines = [], []
    seen_points, seen_lines = {}, {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line in ("[points]", "[lines]"):
            section = line[1:-1]
            continue
        parts = line.split()
        try:
            values = [parse_scalar(p) for p in parts]
        except ParseError as exc:
            raise ParseError(str(exc), lineno, source) from None
        if section == "points":
            if len(values) != 2:
                raise ParseError(f"expected 'x y', got {line!r}", lineno, source)
            pt = tuple(values)
            if pt in seen_points:
                raise ParseError(f"duplicate point (first on line {seen_points[pt]})", lineno, source)
            seen_points[pt] = lineno
            points.append(pt)
        elif section == "lines":
            if len(values) != 3:
                raise ParseError(f"expected 'a b c', got {line!r}", lineno, source)
            try:
                gl = GeneralLine(*values)
            except ValueError as exc:
                raise ParseError(str(exc), lineno, source) from None
            if gl in seen_lines:
                raise ParseError(f"duplicate line (first on line {seen_lines[gl]})", lineno, source)
            seen_lines[gl] = lineno
            lines.append(gl)
        else:
            raise ParseError("data before a [points] or [lines] header", lineno, source)
    return Configuration(tuple(points), tuple(lines))


def format_configuration(cfg: Configuration) -> str:
    out = ["[points]"]
    out += [f"{format_scalar(x)} {format_scalar(y)}" for x, y in cfg.points]
    out.append("[lines]")
    out += [str(l) for l in cfg.lines]
    return "\n".join(out) + "\n"


def random_configuration(seed: int, n_points: int, n_lines: int, box: int = 10) -> Configuration:
    """Random integer points in ``[0, box)^2`` with lines through pairs of them."""
    rng = random.Random(seed)
    cells = [(x, y) for x in range(box) for y in range(box)]
    points = rng.sample(cells, min(n_points, len(cells)))
    lines = {}
    attempts = 0
    while len(lines) < n_lines and attempts < 50 * n_lines:
        attempts += 1
        (x1, y1), (x2, y2) = rng.sample(points, 2)
        gl = GeneralLine(y2 - y1, x1 - x2, (y2 - y1) * x1 + (x1 - x2) * y1)
        lines[gl] = None
    return Configuration(tuple(points), tuple(lines))


def incidence_sets(points: Sequence, lines: Sequence[GeneralLine]) -> list[int]:
    """Per-line incidence counts by direct membership testing."""
    return [sum(1 for p in points if l.contains(p)) for l in lines]
