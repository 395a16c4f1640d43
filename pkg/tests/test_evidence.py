import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from evweight.belief import Kind, classify, plausibility
from evweight.errors import EvidenceError, FrameError, UndefinedWeight
from evweight.evidence import (
    draws_from_log10,
    interpret_as_urn_draws,
    supports,
    weight,
    weight_consonant,
    weight_from_mass,
    weight_precise,
    weight_simple,
)
from evweight.frames import Frame, LogWeight, make_rate_hypothesis
from evweight.gfm import GeneralizedFunctionalModel, ObservationTally, likelihoods, observe_tally
from evweight.models import build_survival_gfm, build_urn_gfm1, build_urn_gfm2

Q = Fraction


def subsets(frame):
    for r in range(1, len(frame) + 1):
        for c in itertools.combinations(frame.elements, r):
            yield frame.hypothesis(c)


def test_supports():
    urn = build_urn_gfm2()
    assert supports(urn, "white", 3, 1)
    assert not supports(urn, "white", 2, 2)
    assert supports(build_survival_gfm(250), "live", 200, 50)
    with pytest.raises(UndefinedWeight, match="undefined support ratio"):
        supports(urn, "white", 3, 0)


def test_weight_simple():
    urn = build_urn_gfm2()
    for m in range(1, 6):
        assert weight_simple(urn, ObservationTally({"white": m}), 4, 2).exact == Q(1) / Q(2, 4) ** m == 2**m
    assert weight_simple(urn, ObservationTally({"white": 2, "black": 1}), 3, 3).exact == 1
    surv = build_survival_gfm(250)
    w = weight_simple(surv, ObservationTally({"live": 39, "die": 1}), 200, 50)
    # (200^39 * 50) / (50^39 * 200)
    assert w.exact == Q(200**39 * 50, 50**39 * 200) == 4**38


def test_weight_simple_infinite_and_undefined():
    urn = build_urn_gfm2()
    tally = ObservationTally({"white": 1})
    assert weight_simple(urn, tally, 2, 0).is_infinite
    assert weight_simple(urn, tally, 0, 2).exact == 0
    with pytest.raises(UndefinedWeight, match="weight undefined"):
        weight_simple(urn, ObservationTally({"white": 1, "black": 1}), 0, 4)


@pytest.mark.parametrize("n", [5, 10])
@pytest.mark.parametrize("m", [1, 2, 3])
def test_all_live_weight_is_power_of_five(n, m):
    model = build_survival_gfm(n)
    h2 = make_rate_hypothesis(model.theta, Q(4, 5), "at-least")
    h1 = make_rate_hypothesis(model.theta, Q(1, 5), "exactly")
    assert weight(model, ObservationTally({"live": m}), h2, h1).exact == 5**m


@pytest.mark.parametrize("k", [1, 2, 3])
def test_all_die_weight_is_quarter_power(k):
    # the general machinery gives (0.2 / 0.8)^n for H2 = [0.8N..N] vs H1 = {0.2N}
    model = build_survival_gfm(10)
    h2 = make_rate_hypothesis(model.theta, Q(4, 5), "at-least")
    h1 = make_rate_hypothesis(model.theta, Q(1, 5), "exactly")
    assert weight(model, ObservationTally({"die": k}), h2, h1).exact == Q(1, 4) ** k


def test_weight_same_hypothesis_is_one():
    model = build_urn_gfm1()
    tally = ObservationTally({"white": 2, "black": 1})
    for h in subsets(model.theta):
        if plausibility(observe_tally(model, tally).result, h):
            assert weight(model, tally, h, h).exact == 1


def test_weight_errors():
    model = build_urn_gfm2()
    tally = ObservationTally({"white": 1, "black": 1})
    with pytest.raises(UndefinedWeight):
        weight(model, tally, model.theta.singleton(0), model.theta.singleton(4))
    with pytest.raises(FrameError):
        weight(model, tally, Frame.range(0, 3).singleton(1), model.theta.singleton(1))


def test_weight_precise_examples():
    frame = Frame((1, 2))
    lk = {1: Q(1, 4), 2: Q(3, 4)}
    assert weight_precise(lk, frame.hypothesis([1, 2]), frame.singleton(1)).exact == 4
    assert weight_precise(lk, frame.singleton(2), frame.singleton(2)).exact == 1
    with pytest.raises(UndefinedWeight):
        weight_precise({1: 0, 2: 0}, frame.singleton(1), frame.singleton(2))


def test_weight_precise_toy_model():
    theta = Frame((1, 2))
    f = {(t, w): 1 if t == w else 0 for t in (1, 2) for w in (1, 2)}
    model = GeneralizedFunctionalModel(theta, (1, 2), (0, 1), {1: Q(1, 2), 2: Q(1, 2)}, f)
    tally = ObservationTally({1: 1})
    assert classify(observe_tally(model, tally).result) is Kind.PRECISE
    h, h2 = theta.hypothesis([1, 2]), theta.singleton(1)
    general = weight(model, tally, h, h2)
    assert general.exact == 2
    assert general == weight_precise(likelihoods(model, tally), h, h2)


def test_weight_consonant_examples():
    model = build_urn_gfm2()
    frame = model.theta
    for m in range(1, 5):
        lk = likelihoods(model, ObservationTally({"white": m}))
        assert weight_consonant(lk, frame.hypothesis([2, 3]), frame.hypothesis([1, 2])).exact == Q(3, 2) ** m
        assert weight_consonant(lk, frame.singleton(3), frame.singleton(1)).exact == 3**m


@pytest.mark.parametrize("n", range(1, 6))
@pytest.mark.parametrize("m", range(1, 4))
def test_weight_consonant_agrees_with_general_on_survival(n, m):
    model = build_survival_gfm(n)
    tally = ObservationTally({"live": m})
    mass = observe_tally(model, tally).result
    lk = likelihoods(model, tally)
    hyps = list(subsets(model.theta))
    for h, h2 in itertools.product(hyps, repeat=2):
        if plausibility(mass, h) or plausibility(mass, h2):
            assert weight_from_mass(mass, h, h2) == weight_consonant(lk, h, h2)
    assert weight(model, tally, model.theta.full(), model.theta.singleton(n)).exact == 1


def test_interpret_examples():
    assert interpret_as_urn_draws(LogWeight.of(5 * Q(10) ** 25)) == 85
    assert interpret_as_urn_draws(LogWeight.of(2)) == 1
    assert interpret_as_urn_draws(LogWeight.of(1024)) == 10
    # 2^10.5 = 1448.15...
    assert interpret_as_urn_draws(LogWeight.of(1448)) == 10
    assert interpret_as_urn_draws(LogWeight.of(1449)) == 11
    assert interpret_as_urn_draws(LogWeight.of(Q(3, 2))) == 1
    for bad in (LogWeight.of(1), LogWeight.of(Q(1, 2)), LogWeight.infinite()):
        with pytest.raises(EvidenceError):
            interpret_as_urn_draws(bad)


def test_draws_from_log10():
    assert draws_from_log10(25.7) == 85
    assert draws_from_log10(3.0103) == 10
    with pytest.raises(EvidenceError):
        draws_from_log10(-0.3)


@given(st.integers(1, 300))
def test_interpret_exact_powers_of_two(k):
    assert interpret_as_urn_draws(LogWeight.of(2**k)) == k


MODELS = [build_urn_gfm1(), build_urn_gfm2(), build_survival_gfm(4)]


@given(st.sampled_from(MODELS), st.integers(0, 3), st.integers(0, 3), st.data())
@settings(max_examples=150, deadline=None)
def test_antisymmetry_and_monotonicity(model, m, k, data):
    if m + k == 0:
        m = 1
    a, b = model.outcomes
    tally = ObservationTally({a: m, b: k})
    mass = observe_tally(model, tally).result
    labels = model.theta.elements
    h = model.theta.hypothesis(data.draw(st.sets(st.sampled_from(labels), min_size=1)))
    h2 = model.theta.hypothesis(data.draw(st.sets(st.sampled_from(labels), min_size=1)))
    bigger = model.theta.hypothesis(set(h.labels) | data.draw(st.sets(st.sampled_from(labels))))
    if plausibility(mass, h) and plausibility(mass, h2):
        assert weight(model, tally, h, h2).exact * weight(model, tally, h2, h).exact == 1
    assert plausibility(mass, h) <= plausibility(mass, bigger)
    if plausibility(mass, h2):
        assert weight(model, tally, bigger, h2).exact >= weight(model, tally, h, h2).exact
