"""Generalized functional models as finite tables.

A model maps each (parameter, disturbance) pair to the outcome that must be
observed; the disturbance has a known distribution. Observing an outcome
induces a belief function on the parameter frame, and several independent
observations are pooled with Dempster's rule.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Mapping

from .belief import CombinationReport, MassFunction, combine_all, combine_power, plausibility
from .errors import (
    FrameError,
    ImpossibleObservation,
    InvalidModel,
    ParseError,
    ProportionalityViolated,
)
from .frames import Frame, format_rational, parse_rational


@dataclass(frozen=True, eq=False)
class GeneralizedFunctionalModel:
    theta: Frame
    omega: tuple
    outcomes: tuple
    p_omega: Mapping[Hashable, Fraction]
    f_table: Mapping[tuple, Hashable]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "omega", tuple(self.omega))
        object.__setattr__(self, "outcomes", tuple(self.outcomes))
        if len(set(self.omega)) != len(self.omega) or not self.omega:
            raise InvalidModel("omega must be a non-empty sequence of distinct labels")
        if len(set(self.outcomes)) != len(self.outcomes) or not self.outcomes:
            raise InvalidModel("outcomes must be a non-empty sequence of distinct labels")
        p = {w: parse_rational(self.p_omega[w]) if w in self.p_omega else None for w in self.omega}
        missing = [w for w, v in p.items() if v is None]
        if missing:
            raise InvalidModel(f"p_omega has no probability for {missing[0]!r}")
        if set(self.p_omega) - set(self.omega):
            raise InvalidModel("p_omega mentions labels outside omega")
        if any(v <= 0 for v in p.values()):
            raise InvalidModel("p_omega values must be positive")
        if sum(p.values()) != 1:
            raise InvalidModel(f"p_omega sums to {format_rational(sum(p.values()))}, not 1")
        table = dict(self.f_table)
        outcomes = set(self.outcomes)
        for t in self.theta:
            for w in self.omega:
                if (t, w) not in table:
                    raise InvalidModel(f"f is not defined at ({t!r}, {w!r})")
                if table[(t, w)] not in outcomes:
                    raise InvalidModel(f"f({t!r}, {w!r}) = {table[(t, w)]!r} is not an outcome")
        if len(table) != len(self.theta) * len(self.omega):
            raise InvalidModel("f has entries outside theta x omega")
        object.__setattr__(self, "p_omega", p)
        object.__setattr__(self, "f_table", table)

    def f(self, theta, omega):
        return self.f_table[(theta, omega)]

    def same_tables(self, other: GeneralizedFunctionalModel) -> bool:
        return (
            self.theta == other.theta
            and self.omega == other.omega
            and self.outcomes == other.outcomes
            and self.p_omega == other.p_omega
            and self.f_table == other.f_table
        )

    def to_json(self) -> dict:
        return {
            "theta": list(self.theta),
            "omega": list(self.omega),
            "outcomes": list(self.outcomes),
            "p_omega": {str(w): format_rational(p) for w, p in self.p_omega.items()},
            "f": {f"{t},{w}": x for (t, w), x in self.f_table.items()},
        }

    @classmethod
    def from_json(cls, data: dict | str, name: str = "") -> GeneralizedFunctionalModel:
        if isinstance(data, str):
            try:
                data = json.loads(data)
            except json.JSONDecodeError as exc:
                raise ParseError(f"invalid JSON: {exc}") from None
        try:
            theta = Frame(tuple(data["theta"]))
            omega = tuple(data["omega"])
            outcomes = tuple(data["outcomes"])
            by_text = {str(w): w for w in omega}
            if len(by_text) != len(omega):
                raise InvalidModel("omega labels must be distinct as text")
            p_omega = {}
            for key, value in data["p_omega"].items():
                if key not in by_text:
                    raise InvalidModel(f"p_omega mentions unknown omega {key!r}")
                p_omega[by_text[key]] = parse_rational(value)
            theta_text = {str(t): t for t in theta}
            f_table = {}
            for key, x in data["f"].items():
                t_text, sep, w_text = key.rpartition(",")
                if not sep or t_text.strip() not in theta_text or w_text.strip() not in by_text:
                    raise InvalidModel(f"bad f key {key!r}; expected 'theta,omega'")
                f_table[(theta_text[t_text.strip()], by_text[w_text.strip()])] = x
        except (KeyError, TypeError, AttributeError) as exc:
            raise ParseError(f"malformed GFM JSON: {exc}") from None
        return cls(theta, omega, outcomes, p_omega, f_table, name=name)


@dataclass(frozen=True)
class ObservationTally:
    """Counts of independent observations per outcome. Zero counts are dropped."""

    counts: tuple

    def __init__(self, counts: Mapping[Hashable, int]):
        items = []
        for x, c in dict(counts).items():
            if not isinstance(c, int) or isinstance(c, bool) or c < 0:
                raise ParseError(f"count for {x!r} must be a non-negative integer")
            if c:
                items.append((x, c))
        if not items:
            raise ParseError("empty tally: at least one count must be positive")
        object.__setattr__(self, "counts", tuple(items))

    def __getitem__(self, x) -> int:
        return dict(self.counts).get(x, 0)

    def as_dict(self) -> dict:
        return dict(self.counts)

    @property
    def total(self) -> int:
        return sum(c for _, c in self.counts)

    def check(self, model: GeneralizedFunctionalModel) -> None:
        unknown = [x for x, _ in self.counts if x not in model.outcomes]
        if unknown:
            raise ParseError(f"outcome {unknown[0]!r} is not an outcome of the model")


def focal_element(model: GeneralizedFunctionalModel, x, omega) -> frozenset:
    """Indices of the parameters that force outcome ``x`` under disturbance ``omega``."""
    return frozenset(i for i, t in enumerate(model.theta) if model.f_table[(t, omega)] == x)


def observe_one(model: GeneralizedFunctionalModel, x) -> CombinationReport:
    if x not in model.outcomes:
        raise ParseError(f"outcome {x!r} is not an outcome of the model")
    acc: dict[frozenset, Fraction] = {}
    reachable = Fraction(0)
    for w in model.omega:
        focal = focal_element(model, x, w)
        if focal:
            acc[focal] = acc.get(focal, 0) + model.p_omega[w]
            reachable += model.p_omega[w]
    if not reachable:
        raise ImpossibleObservation(f"observation impossible under model: no disturbance produces {x!r}")
    if reachable != 1:
        acc = {s: v / reachable for s, v in acc.items()}
    return CombinationReport(MassFunction._trusted(model.theta, acc), 1 - reachable, reachable)


def observe_tally(model: GeneralizedFunctionalModel, tally: ObservationTally) -> CombinationReport:
    """Pool all observations in the tally with Dempster's rule.

    The reported normalization constant multiplies every renormalization
    along the way, including each single observation's, so that
    ``Pl(θ) = l(θ) / normalization_constant``.
    """
    tally.check(model)
    counts = tally.as_dict()
    reports = []
    for x in model.outcomes:
        if counts.get(x):
            single = observe_one(model, x)
            power = combine_power(single.result, counts[x])
            norm = power.normalization_constant * single.normalization_constant ** counts[x]
            reports.append(CombinationReport(power.result, 1 - norm, norm))
    return combine_all(reports)


def induced_distribution(model: GeneralizedFunctionalModel, theta) -> dict:
    if theta not in model.theta:
        raise FrameError(f"unknown parameter value {theta!r}")
    dist = {x: Fraction(0) for x in model.outcomes}
    for w in model.omega:
        dist[model.f_table[(theta, w)]] += model.p_omega[w]
    return dist


def likelihood(model: GeneralizedFunctionalModel, tally: ObservationTally, theta) -> Fraction:
    tally.check(model)
    dist = induced_distribution(model, theta)
    value = Fraction(1)
    for x, c in tally.counts:
        value *= dist[x] ** c
    return value


def likelihoods(model: GeneralizedFunctionalModel, tally: ObservationTally) -> dict:
    return {t: likelihood(model, tally, t) for t in model.theta}


def proportionality_constant(
    model: GeneralizedFunctionalModel,
    tally: ObservationTally,
    report: CombinationReport | None = None,
) -> Fraction:
    """Return c with ``Pl(θ) = c · l(θ)`` for every θ, checking it exactly."""
    if report is None:
        report = observe_tally(model, tally)
    pl = {t: plausibility(report.result, model.theta.singleton(t)) for t in model.theta}
    lk = likelihoods(model, tally)
    ratios = {pl[t] / lk[t] for t in model.theta if lk[t]}
    if not ratios:
        raise ProportionalityViolated("likelihood vanishes on the whole frame")
    zero_mismatch = [t for t in model.theta if not lk[t] and pl[t]]
    if len(ratios) != 1 or zero_mismatch:
        raise ProportionalityViolated("proportionality violated: plausibility is not a constant multiple of likelihood")
    (c,) = ratios
    if c <= 0:
        raise ProportionalityViolated("proportionality violated: non-positive constant")
    return c
