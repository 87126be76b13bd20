import itertools
import random
from functools import reduce
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fockprove.errors import ParseError
from fockprove.unary import (GapResult, LinearForm, Singleton, Star, Sum,
                             canonicalize, enumerate_set, format_set_expr,
                             frobenius_gap, member_with_witness,
                             parse_set_expr)

from oracles import brute_linear, closure_linear, brute_set, random_set_expr


@pytest.mark.parametrize("text, expected", [
    ("{3}", Singleton(3)),
    ("{2}* + {3}* + {1}", Sum(Sum(Star(Singleton(2)), Star(Singleton(3))), Singleton(1))),
    ("({2} + {3})*", Star(Sum(Singleton(2), Singleton(3)))),
    (" { 7 } * * ", Star(Star(Singleton(7)))),
    ("{0}", Singleton(0)),
])
def test_parse(text, expected):
    assert parse_set_expr(text) == expected


@pytest.mark.parametrize("text, offset", [
    ("", 0),
    ("{", 1),
    ("{2} +", 5),
    ("{2}} ", 3),
    ("{-1}", 1),
    ("({1}", 4),
    ("{1} {2}", 4),
    ("é{1}", 0),
    ("{1}+é", 4),
])
def test_parse_errors_report_byte_offset(text, offset):
    with pytest.raises(ParseError) as info:
        parse_set_expr(text)
    assert info.value.offset == offset


def test_literal_overflow():
    assert parse_set_expr("{9223372036854775807}") == Singleton(2**63 - 1)
    with pytest.raises(ParseError, match="exceeds"):
        parse_set_expr("{9223372036854775808}")


def test_format_round_trip():
    rng = random.Random(3)
    for _ in range(100):
        e = random_set_expr(rng, 5)
        assert parse_set_expr(format_set_expr(e)) == e


def test_linear_form_normalizes_generators():
    f = LinearForm((3, 0, 2, 3), 1)
    assert f.coeffs == (2, 3)
    assert f.k == 2
    with pytest.raises(ValueError):
        LinearForm((1,), -1)


@pytest.mark.parametrize("expr, expected", [
    (Singleton(5), LinearForm((), 5)),
    (Sum(Sum(Star(Singleton(2)), Singleton(1)), Sum(Star(Singleton(3)), Singleton(2))),
     LinearForm((2, 3), 3)),
    (Star(Singleton(4)), LinearForm((4,), 0)),
    (Star(Singleton(0)), LinearForm((), 0)),
    (Star(Star(Singleton(2))), LinearForm((2,), 0)),
    # a + <x> with a > 0: generators are a + Apery(<x, a>, a)
    (Star(Sum(Star(Singleton(2)), Singleton(3))), LinearForm((3, 5, 7), 0)),
    (Star(Sum(Star(Singleton(6)), Singleton(3))), LinearForm((3,), 0)),
])
def test_canonicalize(expr, expected):
    assert canonicalize(expr) == expected


def test_star_with_offset_matches_closure():
    # star of {3, 5, 7, ...}: 2 is not a sum of elements of the set
    e = parse_set_expr("({2}* + {3})*")
    members = enumerate_set(canonicalize(e), 20)
    assert members == sorted(brute_set(e, 20))
    assert 2 not in members and members[:4] == [0, 3, 5, 6]


@pytest.mark.parametrize("form, bound, expected", [
    (LinearForm((), 4), 10, [4]),
    (LinearForm((), 4), 3, []),
    (LinearForm((2, 3), 1), 8, [1, 3, 4, 5, 6, 7, 8]),
    (LinearForm((3, 5), 0), 16, [0, 3, 5, 6, 8, 9, 10, 11, 12, 13, 14, 15, 16]),
    (LinearForm((1,), 0), 0, [0]),
])
def test_enumerate_set(form, bound, expected):
    assert enumerate_set(form, bound) == expected


@given(st.lists(st.integers(1, 9), max_size=3), st.integers(0, 6), st.integers(0, 40))
def test_enumerate_matches_tuple_iteration(coeffs, offset, bound):
    assert enumerate_set(LinearForm(tuple(coeffs), offset), bound) == \
        brute_linear(sorted(set(coeffs)), offset, bound)


@pytest.mark.parametrize("form, m, expected", [
    (LinearForm((2, 3), 1), 2, None),
    (LinearForm((2, 3), 1), 7, (0, 2)),
    (LinearForm((), 4), 4, ()),
    (LinearForm((), 4), 5, None),
    (LinearForm((2, 3), 1), 0, None),
    (LinearForm((2, 3, 5), 0), 10, (0, 0, 2)),
])
def test_member_with_witness(form, m, expected):
    assert member_with_witness(form, m) == expected


@given(st.lists(st.integers(1, 7), max_size=3), st.integers(0, 5), st.integers(0, 40))
def test_witness_is_lexicographically_smallest(coeffs, offset, m):
    form = LinearForm(tuple(coeffs), offset)
    ranges = [range(m // c + 1) for c in form.coeffs]
    solutions = [t for t in itertools.product(*ranges)
                 if sum(c * n for c, n in zip(form.coeffs, t)) + offset == m]
    w = member_with_witness(form, m)
    assert w == (min(solutions) if solutions else None)
    if w is not None:
        assert sum(c * n for c, n in zip(form.coeffs, w)) + form.offset == m


def _scan_gap(form, limit=400):
    members = set(closure_linear(form.coeffs, form.offset, limit))
    gaps = [m for m in range(form.offset, limit + 1) if m not in members]
    return gaps[-1] if gaps else None


@pytest.mark.parametrize("form, expected", [
    (LinearForm((3, 5), 0), GapResult("gap", 7)),
    (LinearForm((1,), 0), GapResult("cofinite-none")),
    (LinearForm((2, 4), 0), GapResult("not-applicable")),
    (LinearForm((), 3), GapResult("not-applicable")),
    (LinearForm((2, 3), 1), GapResult("gap", 2)),
    (LinearForm((6, 9, 20), 0), GapResult("gap", 43)),
])
def test_frobenius_gap(form, expected):
    assert frobenius_gap(form) == expected


@given(st.lists(st.integers(2, 12), min_size=1, max_size=3), st.integers(0, 5))
def test_frobenius_gap_matches_scan(coeffs, offset):
    form = LinearForm(tuple(coeffs), offset)
    result = frobenius_gap(form)
    if reduce(gcd, form.coeffs) != 1:
        assert result.kind == "not-applicable"
    else:
        assert result == GapResult("gap", _scan_gap(form))


def test_canonicalization_soundness_small_exprs():
    rng = random.Random(11)
    for _ in range(150):
        e = random_set_expr(rng, 4)
        assert enumerate_set(canonicalize(e), 200) == sorted(brute_set(e, 200))


@settings(max_examples=60)
@given(st.integers(0, 10**6))
def test_star_idempotent(seed):
    e = random_set_expr(random.Random(seed), 4)
    once = canonicalize(Star(e))
    twice = canonicalize(Star(Star(e)))
    assert enumerate_set(once, 200) == enumerate_set(twice, 200)


@given(st.lists(st.integers(1, 7), max_size=3), st.integers(0, 5))
def test_monotone_closure(coeffs, offset):
    form = LinearForm(tuple(coeffs), offset)
    members = enumerate_set(form, 50)
    member_set = set(enumerate_set(form, 100))
    for m in members:
        for m2 in members:
            assert m + (m2 - offset) in member_set
