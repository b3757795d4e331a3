from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from oracles import naive_differenceset, naive_productset, naive_sumset
from richlines.errors import DegenerateGeneratorError, EmptySetError, ParseError
from richlines.scalar import (
    Grid,
    NumberSet,
    differenceset,
    format_numberset,
    format_scalar,
    intersect,
    make_ap,
    make_gp,
    make_random,
    parse_numberset,
    parse_scalar,
    productset,
    sumset,
    symmetrize,
    translate,
    union,
)

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=6)
small_sets = st.lists(rationals, min_size=1, max_size=12).map(NumberSet)


def ns(*values):
    return NumberSet(values)


def test_numberset_sorted_distinct():
    s = NumberSet([3, 1, "1/2", 1])
    assert s.elements == (Fraction(1, 2), Fraction(1), Fraction(3))
    assert s.n == 3 == len(s)


def test_numberset_equality_and_hash_follow_values():
    assert ns(1, 2) == NumberSet([Fraction(2), Fraction(2, 2)])
    assert hash(ns(1, 2)) == hash(ns(2, 1))


def test_numberset_rejects_floats():
    with pytest.raises(TypeError):
        NumberSet([0.5])


@pytest.mark.parametrize(
    "x, y, expected",
    [
        (ns(0), ns(0), ns(0)),
        (ns(1, 2, 3), ns(1, 2, 3), ns(2, 3, 4, 5, 6)),
    ],
)
def test_sumset(x, y, expected):
    assert sumset(x, y) == expected


def test_sumset_of_ap_has_seven_elements():
    a = ns(1, 2, 3, 4)
    assert len(sumset(a, a)) == 7


def test_productset():
    assert productset(ns(1), ns(1)) == ns(1)
    a = ns(1, 2, 3, 4)
    assert productset(a, a) == ns(1, 2, 3, 4, 6, 8, 9, 12, 16)
    g = ns(2, 4, 8)
    assert productset(g, g) == ns(4, 8, 16, 32, 64)


def test_differenceset():
    assert differenceset(ns(0, 1), ns(0, 1)) == ns(-1, 0, 1)
    assert differenceset(ns(5), ns(2)) == ns(3)


@pytest.mark.parametrize("op", [sumset, productset, differenceset])
def test_empty_operand_rejected(op):
    with pytest.raises(EmptySetError, match="empty set"):
        op(NumberSet(), ns(1))


def test_translate_union_intersect():
    assert translate(ns(1, 2), 0) == ns(1, 2)
    assert translate(ns(1, 2), "1/2") == ns("3/2", "5/2")
    assert union(ns(1, 2), ns(2, 3)) == ns(1, 2, 3)
    assert intersect(ns(1, 2, 3), ns(2, 3, 4)) == ns(2, 3)


def test_symmetrize():
    assert symmetrize(Grid(ns(1, 2), ns(2, 3))) == Grid(ns(1, 2, 3), ns(1, 2, 3))
    sq = Grid.square(ns(4, 5))
    assert symmetrize(sq) == sq
    g = symmetrize(Grid(make_ap(3), make_ap(4, 10)))
    assert len(g.a) == 7


def test_generators():
    assert make_ap(3, 0, 1) == ns(0, 1, 2)
    assert make_gp(3, 2, 2) == ns(2, 4, 8)
    assert make_random(5, 7, 100) == make_random(5, 7, 100)
    assert len(make_random(5, 7, 5)) == 5


@pytest.mark.parametrize(
    "call",
    [
        lambda: make_ap(0, 0, 1),
        lambda: make_ap(3, 0, 0),
        lambda: make_gp(3, 1, 1),
        lambda: make_gp(3, 1, -1),
        lambda: make_gp(3, 1, 0),
        lambda: make_random(5, 1, 4),
    ],
)
def test_degenerate_generators(call):
    with pytest.raises(DegenerateGeneratorError, match="degenerate generator"):
        call()


@settings(max_examples=60, deadline=None)
@given(small_sets, small_sets)
def test_operations_match_double_loop(x, y):
    assert list(sumset(x, y)) == naive_sumset(x, y)
    assert list(productset(x, y)) == naive_productset(x, y)
    assert list(differenceset(x, y)) == naive_differenceset(x, y)


@settings(max_examples=60, deadline=None)
@given(small_sets, small_sets)
def test_cardinality_bounds(x, y):
    s = sumset(x, y)
    assert max(len(x), len(y)) <= len(s) <= len(x) * len(y)
    if 0 not in x and 0 not in y:
        p = productset(x, y)
        assert max(len(x), len(y)) <= len(p) <= len(x) * len(y)


@settings(max_examples=40, deadline=None)
@given(small_sets)
def test_difference_set_symmetric(x):
    d = differenceset(x, x)
    assert 0 in d
    assert all(-v in d for v in d)


@settings(max_examples=40, deadline=None)
@given(small_sets, small_sets)
def test_symmetrize_idempotent(x, y):
    once = symmetrize(Grid(x, y))
    assert symmetrize(once) == once
    assert len(once.a) <= len(x) + len(y)


@pytest.mark.parametrize("text, value", [("12", 12), ("-3", -3), ("7/2", Fraction(7, 2)), ("-1/3", Fraction(-1, 3))])
def test_parse_scalar(text, value):
    assert parse_scalar(text) == value
    assert format_scalar(value) == text


@pytest.mark.parametrize("text", ["", "1.5", "1/0", "1/-2", "6/4", "a", "1/2/3", "+3", "1e3"])
def test_parse_scalar_rejects(text):
    with pytest.raises(ParseError):
        parse_scalar(text)


def test_numberset_file_format_round_trip():
    text = "# header\n3\n\n-1/2\n7\n"
    s = parse_numberset(text)
    assert s == ns(3, "-1/2", 7)
    assert format_numberset(s) == "-1/2\n3\n7\n"
    assert parse_numberset(format_numberset(s)) == s


def test_numberset_file_duplicate_names_line():
    with pytest.raises(ParseError, match=r"4:.*duplicate value 2 \(first on line 2\)"):
        parse_numberset("1\n2\n# c\n2\n")


def test_numberset_file_bad_value_names_line():
    with pytest.raises(ParseError, match=r"^3:"):
        parse_numberset("1\n2\nx\n")
