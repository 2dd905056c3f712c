import pytest
from hypothesis import given, settings, strategies as st

from twowaycg.core import (
    LEFT,
    RIGHT,
    FormatError,
    OneWayNfa,
    TwoWayNfa,
    format_annotated,
    normalize_accepting,
    parse,
    parse_annotated,
    serialize,
    validate,
    word_from_text,
)
from twowaycg.verify import random_1nfa, random_2nfa


def test_fixtures_are_well_formed(a1, a2):
    assert validate(a1) == []
    assert validate(a2) == []


def test_accept_equals_reject_is_flagged():
    bad = TwoWayNfa(2, ("a",), {}, 0, 1, reject=1)
    assert validate(bad) == ["accept equals reject"]


def test_out_of_range_target():
    bad = OneWayNfa(2, ("a",), {(0, "a"): {5}}, 0, 1)
    assert "target out of range" in validate(bad)


def test_roundtrip_fixtures(a1, a2):
    assert parse(serialize(a1)) == a1
    assert parse(serialize(a2)) == a2


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.integers(0, 2**32 - 1), st.booleans())
def test_roundtrip_random(n, seed, two_way):
    import random

    make = random_2nfa if two_way else random_1nfa
    automaton = make(n, rng=random.Random(seed))
    assert parse(serialize(automaton)) == automaton


def test_comments_and_blank_lines_ignored():
    text = "# header\ntype 1nfa\n\nstates 1\nstart 0\naccept 0 # same\nalphabet x\n"
    assert parse(text) == OneWayNfa(1, ("x",), {}, 0, 0)


@pytest.mark.parametrize(
    "text",
    [
        "type 3nfa\nstates 1\nstart 0\naccept 0\nalphabet a\n",
        "type 1nfa\nstates 1\nstart 0\nalphabet a\n",
        "type 1nfa\nstates 1\nstart 0\naccept 0\naccept 0\nalphabet a\n",
        "type 1nfa\nstates 1\nstart 0\naccept 0\nalphabet a\nbogus 1\n",
        "type 1nfa\nstates x\nstart 0\naccept 0\nalphabet a\n",
    ],
)
def test_parse_errors(text):
    with pytest.raises(FormatError):
        parse(text)


def test_two_way_directions_roundtrip():
    m = TwoWayNfa(1, ("a",), {(0, "a"): {(0, LEFT), (0, RIGHT)}}, 0, 0)
    assert "trans 0 a 0 L" in serialize(m)
    assert parse(serialize(m)) == m


def test_normalize_accepting_adds_sink():
    nfa = normalize_accepting(3, ("a",), {(0, "a"): {1}, (1, "a"): {2}}, 0, {1, 2})
    assert nfa.n == 4 and nfa.accept == 3
    assert nfa.targets(0, "a") == {1, 3}
    assert validate(nfa) == []
    with pytest.raises(ValueError):
        normalize_accepting(2, ("a",), {}, 0, {0})


def test_word_from_text():
    assert word_from_text("ab", ("a", "b")) == ("a", "b")
    assert word_from_text("a b", ("a", "b")) == ("a", "b")
    assert word_from_text("", ("a",)) == ()
    with pytest.raises(FormatError):
        word_from_text("ac", ("a", "b"))


def test_annotated_text_roundtrip():
    x = (("a", 1), ("b", 0))
    assert format_annotated(x) == "a/1 b/0"
    assert parse_annotated("a/1 b/0") == x
    with pytest.raises(FormatError):
        parse_annotated("a/2")
