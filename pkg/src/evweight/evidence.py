"""Weights of evidence for simple and composite hypotheses."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Mapping

from .belief import MassFunction, plausibility
from .errors import EvidenceError, FrameError, UndefinedWeight
from .frames import Hypothesis, LogWeight
from .gfm import GeneralizedFunctionalModel, ObservationTally, induced_distribution, likelihood, observe_tally


def ratio_weight(num: Fraction, den: Fraction) -> LogWeight:
    """``num / den`` as a weight, +inf when only the denominator vanishes."""
    if den == 0:
        if num == 0:
            raise UndefinedWeight("weight undefined: both sides have zero plausibility")
        return LogWeight.infinite()
    return LogWeight.of(Fraction(num) / den)


def supports(model: GeneralizedFunctionalModel, x, theta, theta2) -> bool:
    """Whether observing ``x`` supports ``theta`` over ``theta2`` (likelihood ratio > 1)."""
    den = induced_distribution(model, theta2)[x]
    if den == 0:
        raise UndefinedWeight("undefined support ratio: zero likelihood for the alternative")
    return induced_distribution(model, theta)[x] / den > 1


def weight_simple(model: GeneralizedFunctionalModel, tally: ObservationTally, theta, theta2) -> LogWeight:
    return ratio_weight(likelihood(model, tally, theta), likelihood(model, tally, theta2))


def _check_pair(h: Hypothesis, h2: Hypothesis, frame) -> None:
    h.check_frame(frame)
    h2.check_frame(frame)
    if not h.members or not h2.members:
        raise EvidenceError("hypotheses must be non-empty")


def weight_from_mass(m: MassFunction, h: Hypothesis, h2: Hypothesis) -> LogWeight:
    _check_pair(h, h2, m.frame)
    return ratio_weight(plausibility(m, h), plausibility(m, h2))


def weight(model: GeneralizedFunctionalModel, tally: ObservationTally, h: Hypothesis, h2: Hypothesis) -> LogWeight:
    """Plausibility ratio ``Pl(h) / Pl(h2)`` after pooling the tally."""
    _check_pair(h, h2, model.theta)
    return weight_from_mass(observe_tally(model, tally).result, h, h2)


def _likelihood_lookup(likelihoods: Mapping, h: Hypothesis) -> list[Fraction]:
    try:
        return [Fraction(likelihoods[x]) for x in h.labels]
    except KeyError as exc:
        raise FrameError(f"no likelihood for {exc.args[0]!r}") from None


def weight_precise(likelihoods: Mapping, h: Hypothesis, h2: Hypothesis) -> LogWeight:
    """Sum-rule weight, valid when the pooled belief function is precise."""
    if h.frame != h2.frame:
        raise FrameError("frame mismatch between hypotheses")
    return ratio_weight(sum(_likelihood_lookup(likelihoods, h)), sum(_likelihood_lookup(likelihoods, h2)))


def weight_consonant(likelihoods: Mapping, h: Hypothesis, h2: Hypothesis) -> LogWeight:
    """Max-rule weight, valid when the pooled belief function is consonant."""
    if h.frame != h2.frame:
        raise FrameError("frame mismatch between hypotheses")
    if not h.members or not h2.members:
        raise EvidenceError("hypotheses must be non-empty")
    return ratio_weight(max(_likelihood_lookup(likelihoods, h)), max(_likelihood_lookup(likelihoods, h2)))


def interpret_as_urn_draws(w: LogWeight) -> int:
    """Number of all-white draws from a two-ball urn giving the same weight.

    Observing k white balls in k draws weighs WW against BW by 2**k, so the
    answer is the integer nearest to log2(w); exact halves round down.
    """
    if w.is_infinite:
        raise EvidenceError("no supporting interpretation for an infinite weight")
    q = w.exact
    if q <= 1:
        raise EvidenceError("no supporting interpretation: weight must exceed 1")
    # floor(log2 q), exact
    k = q.numerator.bit_length() - q.denominator.bit_length()
    if Fraction(2) ** k > q:
        k -= 1
    elif Fraction(2) ** (k + 1) <= q:
        k += 1
    # round up iff log2 q > k + 1/2, i.e. q**2 > 2**(2k+1)
    return k + 1 if q * q > Fraction(2) ** (2 * k + 1) else k


def draws_from_log10(log10_weight: float) -> int:
    """Same as :func:`interpret_as_urn_draws` for a weight known only by its log10."""
    if not math.isfinite(log10_weight) or log10_weight <= 0:
        raise EvidenceError("no supporting interpretation: weight must exceed 1")
    bits = log10_weight / math.log10(2)
    k = math.floor(bits)
    return k + 1 if bits - k > 0.5 else k
