"""Finite parameter frames, hypotheses and exact rational scalars."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Union

from .errors import FrameError, ParseError

Rational = Fraction
RationalLike = Union[Fraction, int, str]


def parse_rational(text: RationalLike) -> Fraction:
    """Parse ``"p/q"``, an integer string or a terminating decimal exactly."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, bool):
        raise ParseError(f"not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise ParseError(f"not a rational: {text!r}")
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"not a rational: {text!r}") from None


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class Frame:
    """An ordered, finite set of parameter labels.

    The position of a label in ``elements`` is its index; hypotheses and
    mass functions refer to labels through these indices.
    """

    elements: tuple
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        elements = tuple(self.elements)
        if not elements:
            raise FrameError("frame must be non-empty")
        index = {}
        for i, label in enumerate(elements):
            if label in index:
                raise FrameError(f"duplicate label {label!r} in frame")
            index[label] = i
        object.__setattr__(self, "elements", elements)
        object.__setattr__(self, "_index", index)

    @classmethod
    def range(cls, lo: int, hi: int) -> Frame:
        return cls(tuple(range(lo, hi + 1)))

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, label) -> bool:
        return label in self._index

    def index(self, label: Hashable) -> int:
        try:
            return self._index[label]
        except (KeyError, TypeError):
            raise FrameError(f"label {label!r} not in frame") from None

    def lookup(self, token) -> Hashable:
        """Resolve a label given possibly as text (``"3"`` matches ``3``)."""
        if token in self._index:
            return token
        text = str(token).strip()
        for label in self.elements:
            if str(label) == text:
                return label
        raise FrameError(f"label {token!r} not in frame")

    def full(self) -> Hypothesis:
        return Hypothesis(self, frozenset(range(len(self))))

    def hypothesis(self, labels: Iterable[Hashable]) -> Hypothesis:
        return Hypothesis(self, frozenset(self.index(x) for x in labels))

    def singleton(self, label: Hashable) -> Hypothesis:
        return Hypothesis(self, frozenset((self.index(label),)))

    def integer_span(self) -> int | None:
        """Return N when the frame is exactly ``0, 1, ..., N``, else None."""
        if self.elements == tuple(range(len(self))):
            return len(self) - 1
        return None


@dataclass(frozen=True)
class Hypothesis:
    """A subset of a frame, stored as a set of frame indices."""

    frame: Frame
    members: frozenset

    def __post_init__(self):
        members = frozenset(self.members)
        n = len(self.frame)
        for i in members:
            if not isinstance(i, int) or not 0 <= i < n:
                raise FrameError(f"index {i!r} outside frame")
        object.__setattr__(self, "members", members)

    @property
    def labels(self) -> tuple:
        return tuple(self.frame.elements[i] for i in sorted(self.members))

    @property
    def is_simple(self) -> bool:
        return len(self.members) == 1

    @property
    def is_composite(self) -> bool:
        return len(self.members) > 1

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.labels)

    def complement(self) -> Hypothesis:
        return Hypothesis(self.frame, frozenset(range(len(self.frame))) - self.members)

    def check_frame(self, frame: Frame) -> None:
        if self.frame != frame:
            raise FrameError("frame mismatch: hypothesis belongs to a different frame")

    def __str__(self) -> str:
        return render_set(self.labels)


def render_set(labels: Iterable) -> str:
    """Render labels as ``[a..b]`` when they form an integer run, else ``{...}``."""
    labels = list(labels)
    if len(labels) > 1 and all(isinstance(x, int) and not isinstance(x, bool) for x in labels):
        ordered = sorted(labels)
        if ordered[-1] - ordered[0] == len(ordered) - 1:
            return f"[{ordered[0]}..{ordered[-1]}]"
    return "{" + ",".join(str(x) for x in labels) + "}"


def make_interval_hypothesis(frame: Frame, lo: int, hi: int) -> Hypothesis:
    """The hypothesis ``[lo..hi]``; both bounds must be frame labels."""
    if lo > hi:
        raise FrameError(f"empty interval [{lo}..{hi}]")
    if lo not in frame or hi not in frame:
        raise FrameError("bound outside frame")
    labels = range(lo, hi + 1)
    missing = [x for x in labels if x not in frame]
    if missing:
        raise FrameError(f"bound outside frame: {missing[0]} missing")
    return frame.hypothesis(labels)


def make_rate_hypothesis(frame: Frame, rate: RationalLike, direction: str = "at-least") -> Hypothesis:
    """Hypothesis on a frame ``{0..N}`` defined by a survival-style rate.

    ``direction`` is ``"at-least"`` for ``{θ : θ >= rate·N}`` or
    ``"exactly"`` for ``{rate·N}``. ``rate·N`` must be an integer.
    """
    n = frame.integer_span()
    if n is None:
        raise FrameError("rate hypotheses need a frame of the form {0..N}")
    rate = parse_rational(rate)
    if not 0 <= rate <= 1:
        raise FrameError(f"rate {format_rational(rate)} outside [0, 1]")
    target = rate * n
    if target.denominator != 1:
        raise FrameError("rate does not align with frame")
    k = int(target)
    if direction == "at-least":
        return make_interval_hypothesis(frame, k, n)
    if direction == "exactly":
        return frame.singleton(k)
    raise ValueError(f"unknown direction {direction!r}")


@dataclass(frozen=True)
class LogWeight:
    """A weight of evidence: exact value plus a base-10 log view.

    ``exact is None`` encodes +infinity. ``log10`` is None for zero and
    for +infinity.
    """

    exact: Fraction | None
    log10: float | None

    @classmethod
    def of(cls, value: RationalLike) -> LogWeight:
        value = parse_rational(value)
        if value < 0:
            raise ValueError("weights are non-negative")
        return cls(value, log10_exact(value) if value > 0 else None)

    @classmethod
    def infinite(cls) -> LogWeight:
        return cls(None, None)

    @property
    def is_infinite(self) -> bool:
        return self.exact is None

    def __str__(self) -> str:
        return "inf" if self.exact is None else format_rational(self.exact)


def log10_exact(q: Fraction) -> float:
    """log10 of a positive rational, accurate for numbers far beyond float range."""
    if q <= 0:
        raise ValueError("log10 of a non-positive number")
    if 1e-300 < q < 1e300:
        return math.log10(float(q))
    return math.log10(q.numerator) - math.log10(q.denominator)


def parse_hypothesis(text: str, frame: Frame) -> Hypothesis:
    """Parse a hypothesis expression against a frame.

    Accepted forms are ``{a,b,...}``, ``[lo..hi]``, ``>=p/q`` (rate at least)
    and ``=p/q`` (rate exactly); the rate forms need a ``{0..N}`` frame.
    """
    s = text.strip()
    if s.startswith("{") and s.endswith("}"):
        tokens = [t.strip() for t in s[1:-1].split(",")]
        if not tokens or any(not t for t in tokens):
            raise ParseError(f"bad set expression {text!r}")
        return frame.hypothesis(frame.lookup(t) for t in tokens)
    if s.startswith("[") and s.endswith("]"):
        lo, sep, hi = s[1:-1].partition("..")
        try:
            lo_i, hi_i = int(lo), int(hi)
        except ValueError:
            raise ParseError(f"bad interval expression {text!r}") from None
        if not sep:
            raise ParseError(f"bad interval expression {text!r}")
        return make_interval_hypothesis(frame, lo_i, hi_i)
    if s.startswith(">="):
        return make_rate_hypothesis(frame, _rate_token(s[2:], text), "at-least")
    if s.startswith("="):
        return make_rate_hypothesis(frame, _rate_token(s[1:], text), "exactly")
    raise ParseError(f"unrecognised hypothesis expression {text!r}; use {{a,b}}, [lo..hi], >=p/q or =p/q")


def _rate_token(token: str, text: str) -> Fraction:
    token = token.strip()
    if not token or token[0] in "+-" or any(c.isspace() for c in token):
        raise ParseError(f"bad rate in {text!r}")
    return parse_rational(token)
