"""Additive energy, translates, and the quadruple convolution of measures.

All weights are exact Fractions, so "sums to one" is an equality check.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Mapping

from .errors import (
    DegenerateMeasureError,
    EmptySetError,
    InvalidMeasureError,
    ParseError,
    SizeMismatchError,
    SupportBlowupError,
)
from .scalar import (
    NumberSet,
    ScalarLike,
    as_scalar,
    decimal_context,
    differenceset,
    format_scalar,
    parse_scalar,
    productset,
    working_precision,
)

DEFAULT_MAX_SUPPORT = 10**6
DEFAULT_MAX_PAIR_WORK = 10**9


@dataclass(frozen=True)
class Caps:
    """Hard limits for iterated products and convolutions."""

    max_support: int = DEFAULT_MAX_SUPPORT
    max_pair_work: int = DEFAULT_MAX_PAIR_WORK


DEFAULT_CAPS = Caps()


class Measure:
    """Finitely supported probability measure with positive rational weights."""

    __slots__ = ("_weights", "support")

    def __init__(self, weights: Mapping[ScalarLike, ScalarLike]):
        clean = {}
        for point, w in weights.items():
            point, w = as_scalar(point), as_scalar(w)
            if w <= 0:
                raise InvalidMeasureError(f"weight at {format_scalar(point)} is {format_scalar(w)}, must be > 0")
            clean[point] = clean.get(point, 0) + w
        total = sum(clean.values(), Fraction(0))
        if total != 1:
            raise InvalidMeasureError(f"total mass is {format_scalar(total)}, off by {format_scalar(total - 1)}")
        self.support = NumberSet(clean)
        self._weights = {p: clean[p] for p in self.support}

    @classmethod
    def uniform(cls, support) -> Measure:
        support = support if isinstance(support, NumberSet) else NumberSet(support)
        if not support:
            raise EmptySetError()
        w = Fraction(1, len(support))
        return cls({p: w for p in support})

    @classmethod
    def _trusted(cls, weights: dict) -> Measure:
        obj = cls.__new__(cls)
        obj.support = NumberSet._from_members(frozenset(weights))
        obj._weights = {p: weights[p] for p in obj.support}
        return obj

    @property
    def weights(self) -> dict:
        return dict(self._weights)

    def items(self):
        return self._weights.items()

    def __call__(self, x) -> Fraction:
        return self._weights.get(x, Fraction(0))

    def __len__(self):
        return len(self._weights)

    def __eq__(self, other):
        if isinstance(other, Measure):
            return self._weights == other._weights
        return NotImplemented

    __hash__ = None

    @property
    def max_weight(self) -> Fraction:
        return max(self._weights.values())

    @property
    def total_mass(self) -> Fraction:
        return sum(self._weights.values(), Fraction(0))

    def __repr__(self):
        body = ", ".join(f"{format_scalar(p)}: {format_scalar(w)}" for p, w in self.items())
        return f"Measure({{{body}}})"


def parse_measure(text: str, source: str | None = None) -> Measure:
    """Read ``value weight`` lines.  Positivity and unit mass are validated."""
    weights = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"expected 'value weight', got {line!r}", lineno, source)
        try:
            point, w = parse_scalar(parts[0]), parse_scalar(parts[1])
        except ParseError as exc:
            raise ParseError(str(exc), lineno, source) from None
        if point in weights:
            raise ParseError(f"duplicate value {format_scalar(point)}", lineno, source)
        if w <= 0:
            raise ParseError(f"weight must be positive, got {format_scalar(w)}", lineno, source)
        weights[point] = w
    try:
        return Measure(weights)
    except InvalidMeasureError as exc:
        raise ParseError(str(exc), source=source) from None


def format_measure(f: Measure) -> str:
    return "".join(f"{format_scalar(p)} {format_scalar(w)}\n" for p, w in f.items())


# ---------------------------------------------------------------- energy


def _difference_counts(x: NumberSet, y: NumberSet) -> Counter:
    return Counter(u - v for u in x for v in y)


def additive_energy(x: NumberSet, y: NumberSet) -> int:
    """``#{(x, x', y, y') : x - y = x' - y'}``, computed as ``sum_d r(d)^2``."""
    if not x or not y:
        raise EmptySetError()
    return sum(c * c for c in _difference_counts(x, y).values())


def energy_identity_check(x: NumberSet, y: NumberSet) -> bool:
    """Evaluate ``E(X, Y) = sum_{u in X, v in Y} |(X - u) & (Y - v)|`` both ways."""
    lhs = additive_energy(x, y)
    xm, ym = x.members, y.members
    rhs = 0
    for u in x:
        shifted_x = {a - u for a in xm}
        for v in y:
            rhs += sum(1 for b in ym if b - v in shifted_x)
    return lhs == rhs


def find_translate(x: NumberSet, y: NumberSet) -> tuple[Fraction, int]:
    """A shift ``u`` maximising ``|(X + u) & Y|``; ties go to the smallest ``u``.

    Only ``u`` in ``Y - X`` can give a nonzero overlap, and the overlap at
    ``u`` is the number of pairs with ``y - x = u``.  By averaging, the best
    overlap is at least ``ceil(E(X, Y) / M^2)``.
    """
    if len(x) != len(y):
        raise SizeMismatchError()
    if not x:
        raise EmptySetError()
    counts = Counter(v - u for u in x for v in y)
    best = max(counts.values())
    u = min(d for d, c in counts.items() if c == best)
    return u, best


@dataclass(frozen=True)
class EnergyReport:
    energy: int
    m: int
    best_translate: Fraction
    best_overlap: int
    identity_holds: bool = True

    def to_dict(self) -> dict:
        return {
            "energy": self.energy,
            "m": self.m,
            "best_translate": format_scalar(self.best_translate),
            "best_overlap": self.best_overlap,
            "identity_holds": self.identity_holds,
        }


def energy_report(x: NumberSet, y: NumberSet) -> EnergyReport:
    u, overlap = find_translate(x, y)
    return EnergyReport(additive_energy(x, y), len(x), u, overlap, energy_identity_check(x, y))


# ---------------------------------------------------------------- convolution


def _check(projected, cap, what):
    if projected > cap:
        raise SupportBlowupError(projected, cap, what)


def _product_measure(f: Measure, caps: Caps) -> dict:
    _check(len(f) ** 2, caps.max_pair_work, "pair work")
    p: dict = {}
    for c1, w1 in f.items():
        for c2, w2 in f.items():
            y = c1 * c2
            p[y] = p.get(y, 0) + w1 * w2
    _check(len(p), caps.max_support, "product support")
    return p


def star(f: Measure, caps: Caps = DEFAULT_CAPS) -> Measure:
    """Push-forward of ``f x f x f x f`` under ``(c1, c2, c3, c4) -> c1 c2 - c3 c4``.

    Two stages: the product measure ``p(y) = sum_{c1 c2 = y} f(c1) f(c2)``,
    then the difference convolution ``sum_{y1 - y2 = x} p(y1) p(y2)``.
    """
    p = _product_measure(f, caps)
    _check(len(p) ** 2, caps.max_pair_work, "pair work")
    items = sorted(p.items())
    out: dict = {}
    for y1, w1 in items:
        for y2, w2 in items:
            x = y1 - y2
            out[x] = out.get(x, 0) + w1 * w2
    _check(len(out), caps.max_support, "support")
    return Measure._trusted(out)


def iterate_star(theta: NumberSet, j: int, caps: Caps = DEFAULT_CAPS) -> Measure:
    """``f_j``: start uniform on ``theta`` and apply :func:`star` ``j`` times."""
    if j < 0:
        raise ValueError("j must be >= 0")
    f = Measure.uniform(theta)
    for _ in range(j):
        f = star(f, caps)
    return f


def theta_iterate(theta: NumberSet, j: int, caps: Caps = DEFAULT_CAPS) -> NumberSet:
    """Value set of ``Θ_j``, where ``Θ_{i+1} = Θ_i.Θ_i - Θ_i.Θ_i``."""
    if j < 1:
        raise ValueError("j must be >= 1")
    current = theta
    for _ in range(j):
        _check(len(current) ** 2, caps.max_pair_work, "pair work")
        prod = productset(current, current)
        _check(len(prod), caps.max_support, "product support")
        _check(len(prod) ** 2, caps.max_pair_work, "pair work")
        current = differenceset(prod, prod)
        _check(len(current), caps.max_support, "support")
    return current


# ---------------------------------------------------------------- dyadic levels


def log2_floor_fifth_power(n: int) -> int:
    """``floor(5 * log2(n))`` computed exactly as ``bit_length(n**5) - 1``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return (n**5).bit_length() - 1


@dataclass(frozen=True)
class DyadicDecomposition:
    """Level sets ``C_i = {c : f(c) in (2^-i M, 2^(1-i) M]}`` for ``1 <= i <= k``.

    ``c0`` holds the points lighter than ``2^-k M``.
    """

    m_max: Fraction
    k: int
    levels: tuple
    c0: NumberSet

    def level_of(self, c) -> int:
        for i, level in enumerate(self.levels, start=1):
            if c in level:
                return i
        if c in self.c0:
            return 0
        raise KeyError(c)


def dyadic_level(weight: Fraction, m_max: Fraction) -> int:
    """The ``i >= 1`` with ``weight in (2^-i M, 2^(1-i) M]``."""
    ratio = m_max / weight
    if ratio < 1:
        raise ValueError("weight exceeds the maximum")
    # 2^(i-1) <= M/w < 2^i, and 2^m <= q iff 2^m <= floor(q)
    return (ratio.numerator // ratio.denominator).bit_length()


def dyadic_decompose(f: Measure) -> DyadicDecomposition:
    m = f.max_weight
    k = log2_floor_fifth_power(len(f)) + 1
    buckets = [[] for _ in range(k + 1)]
    for c, w in f.items():
        i = dyadic_level(w, m)
        buckets[i if i <= k else 0].append(c)
    return DyadicDecomposition(
        m_max=m,
        k=k,
        levels=tuple(NumberSet(b) for b in buckets[1:]),
        c0=NumberSet(buckets[0]),
    )


# ---------------------------------------------------------------- flattening


@dataclass(frozen=True)
class FlatteningReport:
    """``ratio = M* / (M^(4/3) (log2 |C|)^2)`` with ``M = max f`` and ``M* = max f*``."""

    support_size: int
    m_max: Fraction
    m_star: Fraction
    ratio: Decimal
    precision: int

    def to_dict(self) -> dict:
        return {
            "support_size": self.support_size,
            "m_max": format_scalar(self.m_max),
            "m_star": format_scalar(self.m_star),
            "ratio": str(self.ratio),
            "precision": self.precision,
        }


GUARD_DIGITS = 15


def _flattening_denominator(m: Fraction, support_size: int) -> Decimal:
    # caller sets the decimal context
    m4 = Decimal(m.numerator**4) / Decimal(m.denominator**4)
    cube_root = (m4.ln() / 3).exp()
    log2n = Decimal(support_size).ln() / Decimal(2).ln()
    return cube_root * log2n * log2n


def flattening_report(f: Measure, caps: Caps = DEFAULT_CAPS, prec: int | None = None) -> FlatteningReport:
    if len(f) < 2:
        raise DegenerateMeasureError()
    prec = prec if prec is not None else working_precision()
    m = f.max_weight
    m_star = star(f, caps).max_weight
    with localcontext(decimal_context(prec + GUARD_DIGITS)):
        ratio = Decimal(m_star.numerator) / Decimal(m_star.denominator) / _flattening_denominator(m, len(f))
    with localcontext(decimal_context(prec)):
        ratio = +ratio
    return FlatteningReport(len(f), m, m_star, ratio, prec)
