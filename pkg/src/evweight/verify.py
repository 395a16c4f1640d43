"""Invariant suites run by ``evw verify``.

Each suite receives a grid and a ``check(ok, detail)`` callback; failures
keep the first counterexample. Built-in models are looked up through the
``models`` module at call time so a patched builder is what gets verified.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from . import models
from .belief import Kind, MassFunction, belief, classify, combine, combine_power, plausibility
from .errors import EvidenceError, IncompatibleEvidence
from .evidence import weight_consonant, weight_from_mass, weight_precise
from .frames import Frame, Hypothesis, format_rational, parse_hypothesis, parse_rational
from .gfm import (
    GeneralizedFunctionalModel,
    ObservationTally,
    induced_distribution,
    likelihoods,
    observe_one,
    observe_tally,
    proportionality_constant,
)


@dataclass(frozen=True)
class Grid:
    max_n: int
    max_m: int
    max_k: int
    max_obs: int
    random_cases: int
    markov_n: int
    markov_k: int
    evidence_frame: int
    seed: int = 20260517


GRIDS = {
    "small": Grid(max_n=5, max_m=4, max_k=3, max_obs=4, random_cases=200, markov_n=12, markov_k=6, evidence_frame=6),
    "full": Grid(max_n=7, max_m=5, max_k=4, max_obs=5, random_cases=1000, markov_n=16, markov_k=8, evidence_frame=7),
}


@dataclass
class SuiteResult:
    name: str
    passed: int = 0
    failed: int = 0
    counterexample: str | None = None

    @property
    def ok(self) -> bool:
        return self.failed == 0


Check = Callable[[bool, str], None]


def nonempty_subsets(frame: Frame):
    idx = range(len(frame))
    for r in range(1, len(frame) + 1):
        for c in itertools.combinations(idx, r):
            yield Hypothesis(frame, frozenset(c))


def random_mass(rng: random.Random, frame: Frame, max_focal: int = 5) -> MassFunction:
    n = len(frame)
    focal: dict[frozenset, Fraction] = {}
    for _ in range(rng.randint(1, max_focal)):
        s = frozenset(i for i in range(n) if rng.random() < 0.5) or frozenset((rng.randrange(n),))
        focal[s] = focal.get(s, Fraction(0)) + rng.randint(1, 9)
    total = sum(focal.values())
    return MassFunction(frame, {s: v / total for s, v in focal.items()})


def two_outcome_tallies(model: GeneralizedFunctionalModel, max_total: int, max_each=None):
    a, b = model.outcomes
    for m in range(max_total + 1):
        for k in range(max_total + 1 - m):
            if m + k == 0:
                continue
            if max_each and (m > max_each[0] or k > max_each[1]):
                continue
            yield m, k, ObservationTally({a: m, b: k})


def builtin_models(grid: Grid) -> list[GeneralizedFunctionalModel]:
    out = [models.build_urn_gfm1(), models.build_urn_gfm2()]
    out += [models.build_survival_gfm(n) for n in range(4, grid.max_n + 2)]
    return out


# -- suites ----------------------------------------------------------------


def suite_frames(grid: Grid, check: Check) -> None:
    rng = random.Random(grid.seed)
    for _ in range(grid.random_cases):
        q = Fraction(rng.randint(-10**6, 10**6), rng.randint(1, 10**6))
        check(parse_rational(format_rational(q)) == q, f"rational round-trip failed for {q}")
    for n in range(1, grid.max_n + 2):
        frame = Frame.range(0, n)
        for h in nonempty_subsets(frame):
            check(h.complement().complement() == h, f"double complement changed {h}")
        for lo in range(n + 1):
            for hi in range(lo, n + 1):
                h = parse_hypothesis(f"[{lo}..{hi}]", frame)
                check(set(h.labels) == set(range(lo, hi + 1)), f"interval [{lo}..{hi}] gave {h}")


def suite_belief(grid: Grid, check: Check) -> None:
    rng = random.Random(grid.seed + 1)
    done = 0
    while done < grid.random_cases:
        frame = Frame.range(0, rng.randint(0, 5))
        a, b, c = (random_mass(rng, frame) for _ in range(3))
        try:
            ab_c = combine(combine(a, b).result, c).result
            a_bc = combine(a, combine(b, c).result).result
            ab, ba = combine(a, b).result, combine(b, a).result
        except IncompatibleEvidence:
            continue
        done += 1
        check(ab == ba, f"combine not commutative: {a!r} vs {b!r}")
        check(ab_c == a_bc, f"combine not associative: {a!r}, {b!r}, {c!r}")
        check(sum(v for _, v in ab.items()) == 1, f"combined masses do not sum to 1: {ab!r}")
        check(combine(a, MassFunction.vacuous(frame)).result == a, f"vacuous is not neutral for {a!r}")
        for h in nonempty_subsets(frame):
            bel, pl = belief(a, h), plausibility(a, h)
            check(bel <= pl, f"Bel > Pl on {h} for {a!r}")
            check(pl == 1 - belief(a, h.complement()), f"Pl != 1 - Bel(complement) on {h} for {a!r}")
            if classify(a) is Kind.CONSONANT or len(a) == 1:
                best = max(plausibility(a, frame.singleton(x)) for x in h.labels)
                check(pl == best, f"consonant max rule fails on {h} for {a!r}")


def suite_gfm(grid: Grid, check: Check) -> None:
    gfm1, gfm2 = models.build_urn_gfm1(), models.build_urn_gfm2()
    for model in builtin_models(grid):
        for t in model.theta:
            dist = induced_distribution(model, t)
            check(sum(dist.values()) == 1, f"{model.name}: P_{t} does not sum to 1")
        for m, k, tally in two_outcome_tallies(model, grid.max_obs):
            try:
                rep = observe_tally(model, tally)
            except IncompatibleEvidence:
                continue
            try:
                c = proportionality_constant(model, tally, rep)
                check(c == 1 / rep.normalization_constant, f"{model.name} {tally.as_dict()}: c != 1/K")
            except AssertionError as exc:
                check(False, f"{model.name} {tally.as_dict()}: {exc}")
                continue
            # combining in the opposite outcome order
            a, b = model.outcomes
            parts = [combine_power(observe_one(model, x).result, n).result for x, n in ((b, k), (a, m)) if n]
            other = parts[0] if len(parts) == 1 else combine(parts[0], parts[1]).result
            check(other == rep.result, f"{model.name} {tally.as_dict()}: order changes the result")
    for t in range(5):
        expected = {models.WHITE: Fraction(t, 4), models.BLACK: 1 - Fraction(t, 4)}
        check(induced_distribution(gfm1, t) == expected, f"urn-gfm1 distribution wrong at {t}")
        check(induced_distribution(gfm2, t) == expected, f"urn-gfm2 distribution wrong at {t}")


def suite_evidence(grid: Grid, check: Check) -> None:
    for model in builtin_models(grid):
        if len(model.theta) > grid.evidence_frame:
            continue
        for m, k, tally in two_outcome_tallies(model, min(grid.max_obs, 3)):
            try:
                mass = observe_tally(model, tally).result
            except IncompatibleEvidence:
                continue
            lk = likelihoods(model, tally)
            kind = classify(mass)
            subsets = list(nonempty_subsets(model.theta))
            pl = {h: plausibility(mass, h) for h in subsets}
            for h, h2 in itertools.product(subsets, repeat=2):
                if not (pl[h] or pl[h2]):
                    continue
                w = weight_from_mass(mass, h, h2)
                tag = f"{model.name} {tally.as_dict()} {h} vs {h2}"
                if h.is_simple and h2.is_simple:
                    simple = _ratio(lk[h.labels[0]], lk[h2.labels[0]])
                    check(w.exact == simple, f"{tag}: general weight != likelihood ratio")
                if kind is Kind.PRECISE:
                    check(w == weight_precise(lk, h, h2), f"{tag}: sum rule fails")
                elif kind is Kind.CONSONANT:
                    check(w == weight_consonant(lk, h, h2), f"{tag}: max rule fails")
                if pl[h] and pl[h2]:
                    back = weight_from_mass(mass, h2, h)
                    check(w.exact * back.exact == 1, f"{tag}: weights are not reciprocal")
                if h.members < h2.members:
                    check(pl[h] <= pl[h2], f"{tag}: plausibility not monotone")


def _ratio(a: Fraction, b: Fraction):
    return None if b == 0 else a / b


def suite_canned(grid: Grid, check: Check) -> None:
    for n in range(1, grid.max_n + 1):
        model = models.build_survival_gfm(n)
        for m in range(grid.max_m + 1):
            for k in range(grid.max_k + 1):
                if m + k == 0:
                    continue
                tag = f"survival:{n} m={m} n={k}"
                try:
                    generic = observe_tally(model, ObservationTally({models.LIVE: m, models.DIE: k})).result
                except IncompatibleEvidence:
                    try:
                        models.survival_mass(n, m, k)
                    except IncompatibleEvidence:
                        check(True, "")
                    else:
                        check(False, f"{tag}: closed form accepted conflicting evidence")
                    continue
                check(models.survival_mass(n, m, k) == generic, f"{tag}: closed form differs from Dempster oracle")
                check(models.survival_classification(n, m, k) == classify(generic), f"{tag}: classification differs")
                post = models.SurvivalPosterior(n, m, k)
                for h in nonempty_subsets(post.frame):
                    check(post.plausibility(h) == plausibility(generic, h), f"{tag}: closed-form Pl wrong on {h}")
                if m and k:
                    for r in range(n + 1):
                        for s in range(r, n + 1):
                            got = models.survival_plausibility_interval(n, m, k, r, s)
                            want = plausibility(generic, Frame.range(0, n).hypothesis(range(r, s + 1)))
                            check(got == want, f"{tag}: interval identity fails on [{r}..{s}]")
    for n in range(1, 13):
        for m in range(1, 6):
            for k in range(1, 6):
                check(
                    models.survival_normalizer(n, m, k) == models.survival_normalizer(n, m, k, swap=True),
                    f"K forms differ at N={n} m={m} n={k}",
                )
    _urn_formulas(grid, check)


def _urn_formulas(grid: Grid, check: Check) -> None:
    gfm1, gfm2 = models.build_urn_gfm1(), models.build_urn_gfm2()
    q = Fraction
    frame = Frame.range(0, 4)
    h12, h23, h13 = (frame.hypothesis(s) for s in ((1, 2), (2, 3), (1, 3)))
    for m in range(1, 6):
        pl1 = plausibility(observe_tally(gfm1, ObservationTally({"white": m})).result, h12)
        pl2 = plausibility(observe_tally(gfm2, ObservationTally({"white": m})).result, h12)
        check(pl1 == q(1, 4) ** m + q(1, 2) ** m - q(1, 8) ** m, f"urn-gfm1 Pl({{1,2}}) wrong at m={m}")
        check(pl2 == q(1, 2) ** m, f"urn-gfm2 Pl({{1,2}}) wrong at m={m}")
        check(pl1 != pl2, f"urn models agree at m={m}")
    for m in range(1, 4):
        for k in range(1, 4):
            r = m + k
            numerators1 = (
                q(1, 4) ** m * q(3, 4) ** k - q(1, 8) ** m * q(3, 8) ** k + q(1, 2) ** r,
                q(1, 4) ** k * q(3, 4) ** m - q(1, 8) ** k * q(3, 8) ** m + q(1, 2) ** r,
                q(1, 4) ** k * q(3, 4) ** m + q(1, 4) ** m * q(3, 4) ** k - q(3, 16) ** r,
            )
            numerators2 = (
                q(1, 4) ** m * q(3, 4) ** k + q(1, 2) ** k * (q(1, 2) ** m - q(1, 4) ** m),
                q(1, 4) ** k * q(3, 4) ** m + q(1, 2) ** m * (q(1, 2) ** k - q(1, 4) ** k),
                q(1, 4) ** m * q(3, 4) ** k + q(1, 4) ** k * (q(3, 4) ** m - q(1, 4) ** m),
            )
            for model, nums in ((gfm1, numerators1), (gfm2, numerators2)):
                mass = observe_tally(model, ObservationTally({"white": m, "black": k})).result
                ratios = {plausibility(mass, h) / num for h, num in zip((h12, h23, h13), nums)}
                check(len(ratios) == 1, f"{model.name} m={m} n={k}: displayed numerators not proportional")


def suite_markov(grid: Grid, check: Check) -> None:
    for n in range(1, grid.markov_n + 1):
        t = models.build_transition_matrix(n)
        check(all(s == 1 for s in t.column_sums()), f"T not stochastic at N={n}")
        check(all(x >= 0 for row in t.entries for x in row), f"negative entry in T at N={n}")
        direct = models.identity(n)
        for k in range(grid.markov_k + 1):
            check(models.jordan_power(n, k) == direct, f"M L^k M^-1 != T^k at N={n} k={k}")
            vec = models.mat_vec(direct, [Fraction(1, n)] * n)
            closed = [models.survival_mass_all_live(n, k + 1)[range(i, n + 1)] for i in range(1, n + 1)]
            check(vec == closed, f"chain mass vector differs from closed form at N={n} m={k + 1}")
            direct = models.mat_mul(direct, t.entries)


def suite_cli(grid: Grid, check: Check) -> None:
    from .cli import generate_expression

    rng = random.Random(grid.seed + 2)
    for _ in range(grid.random_cases):
        n = rng.choice([5, 10, 20])
        frame = Frame.range(0, n)
        text, expected = generate_expression(rng, n)
        try:
            got = set(parse_hypothesis(text, frame).labels)
        except EvidenceError as exc:
            check(False, f"{text!r} rejected: {exc}")
            continue
        check(got == expected, f"{text!r} parsed to {sorted(got)}")


SUITES = {
    "frames": suite_frames,
    "belief-core": suite_belief,
    "gfm": suite_gfm,
    "evidence": suite_evidence,
    "canned-models": suite_canned,
    "markov": suite_markov,
    "cli": suite_cli,
}


def run_suite(name: str, grid: Grid) -> SuiteResult:
    result = SuiteResult(name)

    def check(ok: bool, detail: str) -> None:
        if ok:
            result.passed += 1
        else:
            result.failed += 1
            if result.counterexample is None:
                result.counterexample = detail

    try:
        SUITES[name](grid, check)
    except Exception as exc:  # a crash is a failed invariant, not a verifier bug
        check(False, f"{type(exc).__name__}: {exc}")
    return result


def run_all(grid_name: str = "small") -> list[SuiteResult]:
    grid = GRIDS[grid_name]
    return [run_suite(name, grid) for name in SUITES]
