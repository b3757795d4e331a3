"""Rich-line families in a grid: enumeration, overlap counting, amplification.

Fractional powers such as ``n**eps`` are never evaluated in floating point;
``s >= n**(p/q)`` is decided as ``s**q >= n**p`` on exact values.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import NonInvertibleMapError, NotSquareError, ThresholdTooSmallError
from .lines import Line, combine, richness, y_projection
from .scalar import Grid, ScalarLike, as_scalar, format_scalar

log = logging.getLogger(__name__)

DEFAULT_MAX_WITNESSES = 16


def at_least_power(s, n, exponent) -> bool:
    """Exact test of ``s >= n**exponent`` for ``n >= 1`` and rational ``exponent``."""
    exponent = as_scalar(exponent)
    if n < 1:
        raise ValueError("base must be >= 1")
    if s <= 0:
        return False
    p, q = exponent.numerator, exponent.denominator
    return Fraction(s) ** q >= Fraction(n) ** p


@dataclass(frozen=True)
class RichFamily:
    """All stored lines have at least ``threshold`` points in ``grid``.

    ``classes`` maps each slope to its sorted tuple of intercepts, with slopes
    in increasing order.  Vertical lines are never stored; ``vertical_count``
    records how many grid columns would have qualified.
    """

    grid: Grid
    threshold: int
    classes: Mapping[Fraction, tuple] = field(default_factory=dict)
    vertical_count: int = 0

    def __post_init__(self):
        normalized = {}
        for slope in sorted(self.classes):
            intercepts = tuple(sorted(set(self.classes[slope])))
            if intercepts:
                normalized[slope] = intercepts
        object.__setattr__(self, "classes", normalized)

    __hash__ = None

    @property
    def slope_count(self) -> int:
        return len(self.classes)

    def lines(self) -> list[Line]:
        return [Line(s, m) for s, ms in self.classes.items() for m in ms]

    def class_lines(self, slope) -> list[Line]:
        slope = as_scalar(slope)
        return [Line(slope, m) for m in self.classes.get(slope, ())]

    def __len__(self):
        return sum(len(ms) for ms in self.classes.values())

    def __contains__(self, l: Line):
        return l.intercept in self.classes.get(l.slope, ())

    def to_dict(self) -> dict:
        return {
            "n_a": len(self.grid.a),
            "n_b": len(self.grid.b),
            "threshold": self.threshold,
            "vertical_count": self.vertical_count,
            "classes": [
                {"slope": format_scalar(s), "intercepts": [format_scalar(m) for m in ms]}
                for s, ms in self.classes.items()
            ],
        }


@dataclass(frozen=True)
class OverlapStats:
    pair_count_above: int
    threshold_tau: int
    total_pairs: int
    witness_pairs: tuple = ()

    def to_dict(self) -> dict:
        return {
            "pair_count_above": self.pair_count_above,
            "threshold_tau": self.threshold_tau,
            "total_pairs": self.total_pairs,
            "witness_pairs": [[str(l1), str(l2)] for l1, l2 in self.witness_pairs],
        }


@dataclass(frozen=True)
class Theorem2Report:
    """Hypothesis check for a family in a square grid.

    ``richness_below_bound`` is the comparison ``max_uniform_richness <
    n**(1-delta)``: a statement about this one instance, not a verdict on
    an asymptotic theorem.
    """

    n: int
    epsilon: Fraction
    delta: Fraction
    slope_count: int
    min_class_size: int
    slopes_ok: bool
    classes_ok: bool
    hypotheses_met: bool
    max_uniform_richness: int
    richness_below_bound: bool
    witness: str | None = None

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "epsilon": format_scalar(self.epsilon),
            "delta": format_scalar(self.delta),
            "slope_count": self.slope_count,
            "min_class_size": self.min_class_size,
            "slopes_ok": self.slopes_ok,
            "classes_ok": self.classes_ok,
            "hypotheses_met": self.hypotheses_met,
            "max_uniform_richness": self.max_uniform_richness,
            "richness_below_bound": self.richness_below_bound,
            "witness": self.witness,
        }


def _pair_counts(g: Grid) -> Counter:
    """Hash every non-vertical pair of grid points by its (slope, intercept).

    A line through k grid points receives exactly k(k-1)/2 hits.
    """
    counts: Counter = Counter()
    xs, ys = g.a.elements, g.b.elements
    for i, x1 in enumerate(xs):
        for x2 in xs[i + 1 :]:
            dx = x2 - x1
            slopes = {dy: dy / dx for dy in {y2 - y1 for y1 in ys for y2 in ys}}
            for y1 in ys:
                for y2 in ys:
                    s = slopes[y2 - y1]
                    counts[(s, y1 - s * x1)] += 1
    return counts


def enumerate_rich_lines(g: Grid, r: int) -> RichFamily:
    """Every non-vertical line with at least ``r`` points in ``g``."""
    if r < 2:
        raise ThresholdTooSmallError()
    log.info("enumerating %d-rich lines in a %dx%d grid", r, len(g.a), len(g.b))
    need = r * (r - 1) // 2
    classes: dict = {}
    for (slope, intercept), hits in _pair_counts(g).items():
        if hits < need:
            continue
        line = Line(slope, intercept)
        if richness(line, g) >= r:
            classes.setdefault(slope, []).append(intercept)
    vertical = len(g.a) if len(g.b) >= r else 0
    family = RichFamily(g, r, classes, vertical)
    log.info("found %d lines in %d slope classes", len(family), family.slope_count)
    return family


def count_two_rich(g: Grid) -> int:
    """Distinct non-vertical lines through at least two grid points."""
    return len(_pair_counts(g))


def overlap_pairs(
    ls: Sequence[Line], g: Grid, tau: int, max_witnesses: int = DEFAULT_MAX_WITNESSES
) -> OverlapStats:
    """Count ordered pairs (i, j), i == j included, with ``|Y(l_i) & Y(l_j)| >= tau``."""
    ys = [y_projection(l, g).members for l in ls]
    above = 0
    witnesses = []
    for i, yi in enumerate(ys):
        for j, yj in enumerate(ys):
            if len(yi & yj) >= tau:
                above += 1
                if len(witnesses) < max_witnesses:
                    witnesses.append((ls[i], ls[j]))
    return OverlapStats(above, tau, len(ys) ** 2, tuple(witnesses))


def theorem2_check(g: Grid, f: RichFamily, epsilon: ScalarLike, delta: ScalarLike) -> Theorem2Report:
    if not g.is_square:
        raise NotSquareError()
    epsilon, delta = as_scalar(epsilon), as_scalar(delta)
    n = len(g.a)
    sizes = [len(ms) for ms in f.classes.values()]
    slopes_ok = n >= 1 and at_least_power(f.slope_count, n, epsilon)
    classes_ok = bool(sizes) and all(at_least_power(s, n, epsilon) for s in sizes)
    met = slopes_ok and classes_ok

    max_uniform = 0
    witness = None
    if len(f):
        weakest = min(f.lines(), key=lambda l: (richness(l, g), l))
        max_uniform = richness(weakest, g)
        witness = f"y = {format_scalar(weakest.slope)}x + {format_scalar(weakest.intercept)} has {max_uniform} points"
    below = n >= 1 and not at_least_power(max_uniform, n, 1 - delta)
    return Theorem2Report(
        n=n,
        epsilon=epsilon,
        delta=delta,
        slope_count=f.slope_count,
        min_class_size=min(sizes, default=0),
        slopes_ok=slopes_ok,
        classes_ok=classes_ok,
        hypotheses_met=met,
        max_uniform_richness=max_uniform,
        richness_below_bound=below,
        witness=witness,
    )


def amplify(class_a, class_b, g: Grid, tau: int) -> RichFamily:
    """Combine two slope classes into lines of slope ``λ/λ'``.

    ``class_a`` and ``class_b`` are ``(slope, intercepts)`` pairs.  Every
    ordered pair ``(l, l')`` whose Y-projections share at least ``tau`` values
    contributes ``combine(l, l')``, which is then at least ``tau``-rich.
    """
    if not g.is_square:
        raise NotSquareError()
    if as_scalar(class_a[0]) == 0 or as_scalar(class_b[0]) == 0:
        raise NonInvertibleMapError()
    lines_a = _class_lines(class_a)
    lines_b = _class_lines(class_b)
    ya = [y_projection(l, g).members for l in lines_a]
    yb = [y_projection(l, g).members for l in lines_b]
    classes: dict = {}
    for l, yl in zip(lines_a, ya):
        for lp, ylp in zip(lines_b, yb):
            if len(yl & ylp) < tau:
                continue
            z = combine(l, lp)
            if richness(z, g) < tau:  # pragma: no cover - ruled out by construction
                raise AssertionError(f"combined line {z} is not {tau}-rich")
            classes.setdefault(z.slope, []).append(z.intercept)
    return RichFamily(g, tau, classes, 0)


def _class_lines(cls) -> list[Line]:
    slope, intercepts = cls
    slope = as_scalar(slope)
    return [Line(slope, m) for m in intercepts]


def slope_classes(f: RichFamily) -> Iterable[tuple]:
    """``(slope, intercepts)`` pairs in slope order, as accepted by :func:`amplify`."""
    return list(f.classes.items())
