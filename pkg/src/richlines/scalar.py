"""Exact rational scalars, number sets and grids.

Scalars are :class:`fractions.Fraction` values.  A :class:`NumberSet` is an
immutable, strictly increasing tuple of distinct scalars; a :class:`Grid` is
the point set ``a x b`` of two number sets.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass
from decimal import Context, Decimal, localcontext
from fractions import Fraction
from typing import Iterable, Iterator, Union

from .errors import DegenerateGeneratorError, EmptySetError, ParseError

Scalar = Fraction
ScalarLike = Union[Fraction, int, str]

DEFAULT_PRECISION = 50
PRECISION_ENV = "RICHLINES_PRECISION"


def as_scalar(value: ScalarLike) -> Fraction:
    """Coerce ints, Fractions and scalar-syntax strings to a Fraction.

    Floats are refused: the library never works with inexact coordinates.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_scalar(value)
    raise TypeError(f"cannot use {type(value).__name__} as an exact scalar")


def parse_scalar(text: str) -> Fraction:
    """Parse ``"12"``, ``"-3"`` or a reduced fraction ``"7/2"`` (denominator > 0)."""
    s = text.strip()
    if not s:
        raise ParseError("empty scalar")
    num, sep, den = s.partition("/")
    try:
        p = int(num)
        q = int(den) if sep else 1
    except ValueError:
        raise ParseError(f"not a scalar: {text!r}") from None
    if not _plain_int(num) or (sep and not _plain_int(den, signed=False)):
        raise ParseError(f"not a scalar: {text!r}")
    if q <= 0:
        raise ParseError(f"denominator must be positive: {text!r}")
    value = Fraction(p, q)
    if value.denominator != q:
        raise ParseError(f"fraction not in lowest terms: {text!r}")
    return value


def _plain_int(s, signed=True):
    s = s.strip()
    if signed and s[:1] == "-":
        s = s[1:]
    return s.isdigit() and s.isascii()


def format_scalar(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def working_precision() -> int:
    """Decimal digits for diagnostics; ``RICHLINES_PRECISION`` overrides the default."""
    raw = os.environ.get(PRECISION_ENV)
    if not raw:
        return DEFAULT_PRECISION
    try:
        prec = int(raw)
    except ValueError:
        raise ParseError(f"{PRECISION_ENV} must be a positive integer, got {raw!r}") from None
    if prec < 1:
        raise ParseError(f"{PRECISION_ENV} must be a positive integer, got {raw!r}")
    return prec


def decimal_context(prec: int | None = None) -> Context:
    return Context(prec=prec if prec is not None else working_precision())


def to_decimal(value: Fraction, prec: int | None = None) -> Decimal:
    with localcontext(decimal_context(prec)):
        return Decimal(value.numerator) / Decimal(value.denominator)


class NumberSet:
    """Immutable sorted set of distinct exact scalars.

    >>> NumberSet([3, 1, 2, 1]).elements
    (Fraction(1, 1), Fraction(2, 1), Fraction(3, 1))
    """

    __slots__ = ("_elements", "_members", "_hash")

    def __init__(self, values: Iterable[ScalarLike] = ()):
        members = frozenset(as_scalar(v) for v in values)
        self._members = members
        self._elements = tuple(sorted(members))
        self._hash = None

    @classmethod
    def _from_members(cls, members: frozenset) -> NumberSet:
        obj = cls.__new__(cls)
        obj._members = members
        obj._elements = tuple(sorted(members))
        obj._hash = None
        return obj

    @property
    def elements(self) -> tuple:
        return self._elements

    @property
    def n(self) -> int:
        return len(self._elements)

    @property
    def members(self) -> frozenset:
        return self._members

    def __len__(self):
        return len(self._elements)

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self._elements)

    def __contains__(self, value):
        return value in self._members

    def __getitem__(self, i):
        return self._elements[i]

    def __eq__(self, other):
        if isinstance(other, NumberSet):
            return self._members == other._members
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._members)
        return self._hash

    def __bool__(self):
        return bool(self._elements)

    def __repr__(self):
        return "NumberSet({" + ", ".join(format_scalar(v) for v in self._elements) + "})"


@dataclass(frozen=True)
class Grid:
    """The Cartesian point set ``a x b``."""

    a: NumberSet
    b: NumberSet

    def __post_init__(self):
        if not isinstance(self.a, NumberSet):
            object.__setattr__(self, "a", NumberSet(self.a))
        if not isinstance(self.b, NumberSet):
            object.__setattr__(self, "b", NumberSet(self.b))

    @classmethod
    def square(cls, c) -> Grid:
        c = c if isinstance(c, NumberSet) else NumberSet(c)
        return cls(c, c)

    @property
    def n_points(self) -> int:
        return len(self.a) * len(self.b)

    @property
    def is_square(self) -> bool:
        return self.a == self.b

    def points(self):
        return [(x, y) for x in self.a for y in self.b]


def _require_nonempty(*sets):
    for s in sets:
        if not s:
            raise EmptySetError()


def sumset(x: NumberSet, y: NumberSet) -> NumberSet:
    _require_nonempty(x, y)
    return NumberSet._from_members(frozenset(u + v for u in x for v in y))


def productset(x: NumberSet, y: NumberSet) -> NumberSet:
    _require_nonempty(x, y)
    return NumberSet._from_members(frozenset(u * v for u in x for v in y))


def differenceset(x: NumberSet, y: NumberSet) -> NumberSet:
    _require_nonempty(x, y)
    return NumberSet._from_members(frozenset(u - v for u in x for v in y))


def translate(x: NumberSet, t: ScalarLike) -> NumberSet:
    t = as_scalar(t)
    return NumberSet._from_members(frozenset(u + t for u in x))


def intersect(x: NumberSet, y: NumberSet) -> NumberSet:
    return NumberSet._from_members(x.members & y.members)


def union(x: NumberSet, y: NumberSet) -> NumberSet:
    return NumberSet._from_members(x.members | y.members)


def symmetrize(g: Grid) -> Grid:
    """Square grid ``C x C`` with ``C = a | b``.

    A family rich in ``a x b`` is at least as rich in ``C x C``.
    """
    if g.is_square:
        return g
    return Grid.square(union(g.a, g.b))


def make_ap(n: int, start: ScalarLike = 0, step: ScalarLike = 1) -> NumberSet:
    start, step = as_scalar(start), as_scalar(step)
    if n < 1:
        raise DegenerateGeneratorError(f"n={n}")
    if step == 0:
        raise DegenerateGeneratorError("step must be nonzero")
    return NumberSet(start + i * step for i in range(n))


def make_gp(n: int, start: ScalarLike = 1, ratio: ScalarLike = 2) -> NumberSet:
    start, ratio = as_scalar(start), as_scalar(ratio)
    if n < 1:
        raise DegenerateGeneratorError(f"n={n}")
    if ratio in (0, 1, -1):
        raise DegenerateGeneratorError(f"ratio {format_scalar(ratio)}")
    if start == 0:
        raise DegenerateGeneratorError("start must be nonzero")
    return NumberSet(start * ratio**i for i in range(n))


def make_random(n: int, seed: int, range_: int) -> NumberSet:
    """``n`` distinct integers drawn from ``[0, range_)``, deterministic in ``seed``."""
    if n < 1 or range_ < n:
        raise DegenerateGeneratorError(f"n={n}, range={range_}")
    rng = random.Random(seed)
    return NumberSet(rng.sample(range(range_), n))


def parse_numberset(text: str, source: str | None = None) -> NumberSet:
    """Read the one-value-per-line format.  Blank and ``#`` lines are skipped."""
    seen = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            value = parse_scalar(line)
        except ParseError as exc:
            raise ParseError(str(exc), lineno, source) from None
        if value in seen:
            raise ParseError(
                f"duplicate value {format_scalar(value)} (first on line {seen[value]})",
                lineno,
                source,
            )
        seen[value] = lineno
    return NumberSet(seen)


def format_numberset(x: NumberSet) -> str:
    return "".join(format_scalar(v) + "\n" for v in x)


def read_numberset(path) -> NumberSet:
    with open(path, encoding="utf-8") as fh:
        return parse_numberset(fh.read(), source=str(path))
