from __future__ import annotations

import pytest
from hypothesis import given

from charvar.words import ParseError, Word, parse_word

from .strategies import words


def test_parse_meridian_word():
    w = parse_word("a^3 b a b a b")
    assert w.letters == (("a", 3), ("b", 1), ("a", 1), ("b", 1), ("a", 1), ("b", 1))
    assert len(w) == 8


def test_parse_cancels_to_empty():
    assert parse_word("a a^-1") == Word()
    assert len(parse_word("a a^-1")) == 0


def test_parse_inverse_prefix_word():
    w = parse_word("b^-1 a b a b")
    assert len(w) == 5
    assert w.letters[0] == ("b", -1)


def test_parse_whitespace_tolerant():
    assert parse_word("a^3babab", ["a", "b"]) == parse_word("  a^3 b a  b a b ")


@pytest.mark.parametrize("text,position", [("a q", 2), ("a^x", 2), ("a^", 2)])
def test_parse_errors_report_position(text, position):
    with pytest.raises(ParseError) as info:
        parse_word(text, ["a", "b"])
    assert info.value.position == position


@given(words())
def test_print_round_trip(w):
    text = str(w) if w else ""
    assert parse_word(text, ["a", "b"]) == w


@given(words())
def test_freely_reduced(w):
    assert all(x[0] != y[0] for x, y in zip(w.letters, w.letters[1:]))
    assert all(e != 0 for _, e in w.letters)


@given(words(), words())
def test_inverse_and_product(u, w):
    assert u * u.inverse() == Word()
    assert (u * w).inverse() == w.inverse() * u.inverse()


@given(words())
def test_cyclic_reduce_is_idempotent(w):
    c = w.cyclic_reduce()
    assert c.cyclic_reduce() == c
    assert len(c) <= len(w)
