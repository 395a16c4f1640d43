import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from evweight.errors import FrameError, ParseError
from evweight.frames import (
    Frame,
    LogWeight,
    format_rational,
    log10_exact,
    make_interval_hypothesis,
    make_rate_hypothesis,
    parse_hypothesis,
    parse_rational,
    render_set,
)


def test_interval_hypothesis():
    frame = Frame.range(0, 4)
    assert make_interval_hypothesis(frame, 1, 2).labels == (1, 2)
    h = make_interval_hypothesis(frame, 3, 3)
    assert h.labels == (3,) and h.is_simple and not h.is_composite


def test_interval_upper_tail():
    frame = Frame.range(0, 250)
    assert make_interval_hypothesis(frame, 200, 250).labels == tuple(range(200, 251))


def test_interval_rejects_out_of_frame():
    with pytest.raises(FrameError, match="bound outside frame"):
        make_interval_hypothesis(Frame.range(0, 4), 3, 5)
    with pytest.raises(FrameError, match="bound outside frame"):
        make_interval_hypothesis(Frame.range(0, 4), -1, 2)


def test_rate_hypotheses():
    frame = Frame.range(0, 250)
    assert make_rate_hypothesis(frame, Fraction(4, 5), "at-least").labels == tuple(range(200, 251))
    assert make_rate_hypothesis(frame, Fraction(1, 5), "exactly").labels == (50,)
    with pytest.raises(FrameError, match="rate does not align with frame"):
        make_rate_hypothesis(Frame.range(0, 10), Fraction(1, 3), "at-least")


def test_rate_hypothesis_needs_integer_frame():
    with pytest.raises(FrameError):
        make_rate_hypothesis(Frame(("a", "b")), "1/2")


def test_frame_invariants():
    with pytest.raises(FrameError):
        Frame(())
    with pytest.raises(FrameError):
        Frame((1, 2, 1))


def test_hypotheses_on_different_frames_do_not_mix():
    h = Frame.range(0, 3).singleton(1)
    with pytest.raises(FrameError):
        h.check_frame(Frame.range(0, 4))


@given(st.fractions())
def test_rational_round_trip(q):
    assert parse_rational(format_rational(q)) == q


def test_rational_format():
    assert format_rational(Fraction(6, 64)) == "3/32"
    assert format_rational(Fraction(4, 2)) == "2"
    assert parse_rational("3/32") == Fraction(3, 32)
    assert parse_rational("0.8") == Fraction(4, 5)
    with pytest.raises(ParseError):
        parse_rational("three")
    with pytest.raises(ParseError):
        parse_rational("1/0")


@given(st.integers(0, 12).flatmap(lambda n: st.tuples(st.just(n), st.sets(st.integers(0, n)))))
def test_complement_involution(case):
    n, labels = case
    frame = Frame.range(0, n)
    h = frame.hypothesis(labels)
    assert h.complement().complement() == h
    assert set(h.complement().labels) == set(range(n + 1)) - labels


@given(st.integers(0, 20).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, n), st.integers(0, n))))
def test_interval_members(case):
    n, a, b = case
    lo, hi = min(a, b), max(a, b)
    assert set(make_interval_hypothesis(Frame.range(0, n), lo, hi).labels) == set(range(lo, hi + 1))


def test_log_weight():
    w = LogWeight.of(Fraction(5) ** 39)
    assert abs(w.log10 - 39 * 0.69897000433601880479) < 1e-9 * 39
    assert LogWeight.of(0).log10 is None
    assert str(LogWeight.infinite()) == "inf"
    # far outside float range
    huge = Fraction(10**400 * 3, 7)
    assert abs(log10_exact(huge) - (400 + math.log10(3 / 7))) < 1e-9 * 400


def test_render_set():
    assert render_set([1, 2, 3]) == "[1..3]"
    assert render_set([1, 3]) == "{1,3}"
    assert render_set([4]) == "{4}"
    assert render_set(["a", "b"]) == "{a,b}"


@pytest.mark.parametrize(
    "text, expected",
    [
        ("{1,3}", {1, 3}),
        (" { 2 } ", {2}),
        ("[2..4]", {2, 3, 4}),
        (">=4/5", {8, 9, 10}),
        ("=1/5", {2}),
        (">=0.5", {5, 6, 7, 8, 9, 10}),
    ],
)
def test_parse_hypothesis(text, expected):
    assert set(parse_hypothesis(text, Frame.range(0, 10)).labels) == expected


@pytest.mark.parametrize("text", ["", "{}", "{1,}", "[1-3]", "[a..b]", "<=1/2", "1,2", "=-1/2", "= 1/2 1"])
def test_parse_hypothesis_rejects(text):
    with pytest.raises((ParseError, FrameError)):
        parse_hypothesis(text, Frame.range(0, 10))


def test_parse_hypothesis_text_labels():
    frame = Frame(("low", "mid", "high"))
    assert parse_hypothesis("{low,high}", frame).labels == ("low", "high")
