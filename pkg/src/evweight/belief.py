"""Mass functions, belief/plausibility and Dempster's rule of combination.

Focal sets are frozensets of frame indices. Every mass function is kept in
normalized form: masses are positive exact rationals summing to one and the
empty set never carries mass. Conflict produced by a combination is only
reported through :class:`CombinationReport`.
"""

from __future__ import annotations

import enum
import json
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import FocalLimitExceeded, FrameError, IncompatibleEvidence, InvalidMassFunction, ParseError
from .frames import Frame, Hypothesis, format_rational, parse_rational, render_set

DEFAULT_MAX_FOCAL = 1_000_000


class Kind(str, enum.Enum):
    PRECISE = "precise"
    CONSONANT = "consonant"
    GENERAL = "general"

    def __str__(self):
        return self.value


class MassFunction:
    """A normalized basic probability assignment on a finite frame.

    >>> frame = Frame((0, 1, 2))
    >>> m = MassFunction(frame, {(2,): Fraction(1, 2), (1, 2): Fraction(1, 2)})
    >>> plausibility(m, frame.singleton(1))
    Fraction(1, 2)
    """

    __slots__ = ("frame", "_focal")

    def __init__(self, frame: Frame, focal: Mapping[Iterable[int], Fraction | int | str]):
        self.frame = frame
        acc: dict[frozenset, Fraction] = {}
        n = len(frame)
        for subset, mass in dict(focal).items():
            key = frozenset(subset)
            if not key:
                raise InvalidMassFunction("the empty set cannot carry mass")
            if any(not 0 <= i < n for i in key):
                raise InvalidMassFunction(f"focal set {sorted(key)} outside frame")
            mass = parse_rational(mass)
            if mass < 0:
                raise InvalidMassFunction(f"negative mass on {sorted(key)}")
            if mass:
                acc[key] = acc.get(key, Fraction(0)) + mass
        if not acc:
            raise InvalidMassFunction("mass function has no focal sets")
        total = sum(acc.values())
        if total != 1:
            raise InvalidMassFunction(f"masses sum to {format_rational(total)}, not 1")
        self._focal = acc

    @classmethod
    def _trusted(cls, frame: Frame, focal: dict) -> MassFunction:
        # caller guarantees the invariants; skips validation on hot paths
        obj = cls.__new__(cls)
        obj.frame = frame
        obj._focal = focal
        return obj

    @classmethod
    def from_labels(cls, frame: Frame, focal: Mapping[Iterable, Fraction | int | str]) -> MassFunction:
        return cls(frame, {tuple(frame.index(x) for x in subset): mass for subset, mass in focal.items()})

    @classmethod
    def vacuous(cls, frame: Frame) -> MassFunction:
        return cls._trusted(frame, {frozenset(range(len(frame))): Fraction(1)})

    def __len__(self) -> int:
        return len(self._focal)

    def __getitem__(self, subset: Iterable[int]) -> Fraction:
        return self._focal.get(frozenset(subset), Fraction(0))

    def items(self) -> list[tuple[tuple[int, ...], Fraction]]:
        """Focal sets (sorted index tuples) with their masses, in canonical order."""
        return sorted(((tuple(sorted(s)), v) for s, v in self._focal.items()), key=lambda kv: (len(kv[0]), kv[0]))

    def focal_sets(self) -> list[frozenset]:
        return list(self._focal)

    def label_items(self) -> list[tuple[tuple, Fraction]]:
        els = self.frame.elements
        return [(tuple(els[i] for i in s), v) for s, v in self.items()]

    def __eq__(self, other):
        if not isinstance(other, MassFunction):
            return NotImplemented
        return self.frame == other.frame and self._focal == other._focal

    def __hash__(self):
        return hash((self.frame, frozenset(self._focal.items())))

    def __repr__(self):
        body = ", ".join(f"{render_set(s)}: {format_rational(v)}" for s, v in self.label_items())
        return f"MassFunction({{{body}}})"

    def to_json(self) -> dict:
        return {
            "frame": list(self.frame.elements),
            "focal": [{"set": list(s), "mass": format_rational(v)} for s, v in self.label_items()],
        }

    @classmethod
    def from_json(cls, data: dict | str) -> MassFunction:
        if isinstance(data, str):
            try:
                data = json.loads(data)
            except json.JSONDecodeError as exc:
                raise ParseError(f"invalid JSON: {exc}") from None
        try:
            frame = Frame(tuple(data["frame"]))
            focal: dict[frozenset, Fraction] = {}
            for entry in data["focal"]:
                labels = entry["set"]
                if not labels:
                    raise InvalidMassFunction("empty focal set in mass-function file")
                key = frozenset(frame.index(x) for x in labels)
                focal[key] = focal.get(key, Fraction(0)) + parse_rational(entry["mass"])
        except (KeyError, TypeError) as exc:
            raise ParseError(f"malformed mass-function JSON: missing {exc}") from None
        return cls(frame, focal)


@dataclass(frozen=True)
class CombinationReport:
    result: MassFunction
    conflict_mass: Fraction
    normalization_constant: Fraction

    def __post_init__(self):
        assert self.normalization_constant == 1 - self.conflict_mass
        assert 0 < self.normalization_constant <= 1


def _check(m: MassFunction, h: Hypothesis) -> None:
    if h.frame != m.frame:
        raise FrameError("frame mismatch between mass function and hypothesis")


def belief(m: MassFunction, h: Hypothesis) -> Fraction:
    _check(m, h)
    return sum((v for s, v in m._focal.items() if s <= h.members), Fraction(0))


def plausibility(m: MassFunction, h: Hypothesis) -> Fraction:
    _check(m, h)
    return sum((v for s, v in m._focal.items() if not s.isdisjoint(h.members)), Fraction(0))


def max_focal() -> int:
    raw = os.environ.get("EVW_MAX_FOCAL")
    if raw is None:
        return DEFAULT_MAX_FOCAL
    try:
        return int(raw.replace("_", ""))
    except ValueError:
        raise ParseError(f"EVW_MAX_FOCAL must be an integer, got {raw!r}") from None


def combine(a: MassFunction, b: MassFunction) -> CombinationReport:
    """Dempster's rule: intersect focal sets, multiply masses, renormalize.

    Exact and exhaustive, so the cost is ``len(a) * len(b)`` set
    intersections; that product is capped by ``EVW_MAX_FOCAL``.
    """
    if a.frame != b.frame:
        raise FrameError("cannot combine mass functions on different frames")
    limit = max_focal()
    if len(a) * len(b) > limit:
        raise FocalLimitExceeded(
            f"combination needs {len(a) * len(b)} focal products, above EVW_MAX_FOCAL={limit}; "
            "use a canned model with closed forms"
        )
    acc: dict[frozenset, Fraction] = {}
    conflict = Fraction(0)
    for s, u in a._focal.items():
        for t, v in b._focal.items():
            both = s & t
            if both:
                acc[both] = acc.get(both, 0) + u * v
            else:
                conflict += u * v
    k = 1 - conflict
    if k == 0:
        raise IncompatibleEvidence("incompatible evidence: total conflict in Dempster combination")
    if k != 1:
        acc = {s: v / k for s, v in acc.items()}
    return CombinationReport(MassFunction._trusted(a.frame, acc), conflict, k)


def combine_power(m: MassFunction, k: int) -> CombinationReport:
    """Combine ``k`` copies of ``m``; the constant is the product of the step constants."""
    if k < 1:
        raise ValueError("k must be at least 1")
    result, norm = m, Fraction(1)
    for _ in range(k - 1):
        step = combine(result, m)
        result, norm = step.result, norm * step.normalization_constant
    return CombinationReport(result, 1 - norm, norm)


def combine_all(reports: Iterable[CombinationReport]) -> CombinationReport:
    """Fold combination over reports, multiplying their normalization constants."""
    result, norm = None, Fraction(1)
    for rep in reports:
        norm *= rep.normalization_constant
        if result is None:
            result = rep.result
        else:
            step = combine(result, rep.result)
            result, norm = step.result, norm * step.normalization_constant
    if result is None:
        raise ValueError("nothing to combine")
    return CombinationReport(result, 1 - norm, norm)


def classify(m: MassFunction) -> Kind:
    sets = sorted(m._focal, key=len)
    if all(len(s) == 1 for s in sets):
        return Kind.PRECISE
    if all(a <= b for a, b in zip(sets, sets[1:])):
        return Kind.CONSONANT
    return Kind.GENERAL
