"""Non-vertical lines, their affine-map matrices, and projections onto a grid."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import NonInvertibleMapError, ParseError, SlopeMismatchError
from .scalar import Grid, NumberSet, ScalarLike, as_scalar, format_scalar, parse_scalar


@dataclass(frozen=True, order=True)
class Line:
    """The line ``y = slope * x + intercept``.

    Ordering is by ``(slope, intercept)``, which is the deterministic order
    used everywhere lines are listed.
    """

    slope: Fraction
    intercept: Fraction

    def __post_init__(self):
        object.__setattr__(self, "slope", as_scalar(self.slope))
        object.__setattr__(self, "intercept", as_scalar(self.intercept))

    def __call__(self, x: Fraction) -> Fraction:
        return self.slope * x + self.intercept

    def __str__(self):
        return f"{format_scalar(self.slope)} {format_scalar(self.intercept)}"

    @classmethod
    def through(cls, p, q) -> Line:
        (x1, y1), (x2, y2) = p, q
        if x1 == x2:
            raise ValueError("vertical line has no slope")
        slope = Fraction(y2 - y1) / (x2 - x1)
        return cls(slope, y1 - slope * x1)


def parse_line(text: str) -> Line:
    parts = text.split()
    if len(parts) != 2:
        raise ParseError(f"expected 'slope intercept', got {text!r}")
    return Line(parse_scalar(parts[0]), parse_scalar(parts[1]))


@dataclass(frozen=True)
class AffineMap:
    """The matrix ``[[m11, m12], [0, 1]]``, i.e. ``x -> m11 * x + m12``."""

    m11: Fraction
    m12: Fraction

    def __post_init__(self):
        object.__setattr__(self, "m11", as_scalar(self.m11))
        object.__setattr__(self, "m12", as_scalar(self.m12))

    @property
    def rows(self):
        return ((self.m11, self.m12), (Fraction(0), Fraction(1)))

    def __matmul__(self, other: AffineMap) -> AffineMap:
        return compose(self, other)

    @classmethod
    def identity(cls) -> AffineMap:
        return cls(1, 0)


@dataclass(frozen=True)
class RichnessReport:
    line: Line
    richness: int
    x_proj: NumberSet
    y_proj: NumberSet


def richness(l: Line, g: Grid) -> int:
    """Number of grid points on ``l``."""
    b = g.b.members
    return sum(1 for a in g.a if l(a) in b)


def x_projection(l: Line, g: Grid) -> NumberSet:
    b = g.b.members
    return NumberSet(a for a in g.a if l(a) in b)


def y_projection(l: Line, g: Grid) -> NumberSet:
    b = g.b.members
    return NumberSet(y for y in map(l, g.a) if y in b)


def richness_report(l: Line, g: Grid) -> RichnessReport:
    xs = x_projection(l, g)
    return RichnessReport(l, len(xs), xs, NumberSet(l(a) for a in xs))


def to_matrix(l: Line) -> AffineMap:
    return AffineMap(l.slope, l.intercept)


def from_matrix(m: AffineMap) -> Line:
    return Line(m.m11, m.m12)


def compose(m1: AffineMap, m2: AffineMap) -> AffineMap:
    """Matrix product ``m1 @ m2`` (apply ``m2`` first)."""
    return AffineMap(m1.m11 * m2.m11, m1.m11 * m2.m12 + m1.m12)


def inverse(m: AffineMap) -> AffineMap:
    if m.m11 == 0:
        raise NonInvertibleMapError()
    return AffineMap(1 / m.m11, -m.m12 / m.m11)


def combine(l: Line, lp: Line) -> Line:
    """The line ``z = (λ/λ')x + (μ-μ')/λ'`` built from ``l: y=λx+μ`` and ``lp: y=λ'x+μ'``.

    Each common y-value ``λx+μ = y = λ'z+μ'`` with ``x, z`` in the grid gives a
    grid point ``(x, z)`` of the result, so its richness is at least
    ``|Y(l) & Y(lp)|``.  Equals ``M(lp)^-1 M(l)`` in matrix form.
    """
    if lp.slope == 0:
        raise NonInvertibleMapError()
    return Line(l.slope / lp.slope, (l.intercept - lp.intercept) / lp.slope)


def same_slope_combine(l: Line, lp: Line) -> Line:
    """``y = x + (μ-μ')/λ`` for two parallel lines of common slope λ."""
    if l.slope != lp.slope:
        raise SlopeMismatchError()
    if l.slope == 0:
        raise NonInvertibleMapError()
    return Line(1, (l.intercept - lp.intercept) / l.slope)


def intersection(l1: Line, l2: Line):
    """Intersection point of two non-parallel lines."""
    if l1.slope == l2.slope:
        raise ValueError("parallel lines do not meet")
    x = (l2.intercept - l1.intercept) / (l1.slope - l2.slope)
    return x, l1(x)


def general_position_select(ls: Iterable[Line]) -> list[Line]:
    """Greedily pick a subfamily with no two lines parallel and no three concurrent.

    Candidates are scanned by slope, then intercept; a line is accepted when
    its slope is new and it avoids every intersection point of the lines
    already accepted.  At most one line per slope class survives.
    """
    accepted: list[Line] = []
    slopes = set()
    crossings = set()
    for l in sorted(set(ls)):
        if l.slope in slopes:
            continue
        if any(l(x) == y for x, y in crossings):
            continue
        crossings.update(intersection(l, other) for other in accepted)
        accepted.append(l)
        slopes.add(l.slope)
    return accepted
