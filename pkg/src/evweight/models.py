"""Built-in models: two urn GFMs and the survival-rate model.

The survival model has closed forms for its pooled mass function and for
the plausibility of any hypothesis; those are the production path; the
generic Dempster engine is only practical for tiny populations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .belief import Kind, MassFunction
from .errors import FrameError, IncompatibleEvidence, ParseError, UndefinedWeight
from .frames import Frame, Hypothesis, LogWeight
from .gfm import GeneralizedFunctionalModel, ObservationTally

WHITE, BLACK = "white", "black"
LIVE, DIE = "live", "die"

# Indicator sets and disturbance probabilities of the conditional-embedding urn model.
GFM1_SETS = (
    {4},
    {1, 4},
    {2, 4},
    {3, 4},
    {1, 2, 4},
    {1, 3, 4},
    {2, 3, 4},
    {1, 2, 3, 4},
)
GFM1_PROBS = tuple(Fraction(k, 32) for k in (3, 1, 3, 9, 1, 3, 9, 3))


def build_urn_gfm1() -> GeneralizedFunctionalModel:
    """Four-ball urn model built from eight indicator relations ``phi1..phi8``."""
    theta = Frame.range(0, 4)
    omega = tuple(f"phi{i}" for i in range(1, 9))
    f = {(t, w): WHITE if t in s else BLACK for w, s in zip(omega, GFM1_SETS) for t in theta}
    return GeneralizedFunctionalModel(theta, omega, (WHITE, BLACK), dict(zip(omega, GFM1_PROBS)), f, name="urn-gfm1")


def _threshold_model(n: int, outcomes: tuple, name: str) -> GeneralizedFunctionalModel:
    # f(θ, ω) = first outcome iff ω <= θ, with ω uniform on 1..n
    if n < 1:
        raise ValueError("population size must be at least 1")
    theta = Frame.range(0, n)
    omega = tuple(range(1, n + 1))
    yes, no = outcomes
    f = {(t, w): yes if w <= t else no for t in theta for w in omega}
    return GeneralizedFunctionalModel(theta, omega, outcomes, {w: Fraction(1, n) for w in omega}, f, name=name)


def build_urn_gfm2() -> GeneralizedFunctionalModel:
    """Four numbered balls, white ones first: a ball numbered ``ω <= θ`` is white."""
    return _threshold_model(4, (WHITE, BLACK), "urn-gfm2")


def build_survival_gfm(n: int) -> GeneralizedFunctionalModel:
    return _threshold_model(n, (LIVE, DIE), f"survival:{n}")


def resolve_model(name: str) -> GeneralizedFunctionalModel:
    """Look up a built-in model: ``urn-gfm1``, ``urn-gfm2`` or ``survival:N``."""
    if name == "urn-gfm1":
        return build_urn_gfm1()
    if name == "urn-gfm2":
        return build_urn_gfm2()
    if name.startswith("survival:"):
        return build_survival_gfm(parse_survival_size(name))
    raise ParseError(f"unknown built-in model {name!r}")


def parse_survival_size(name: str) -> int:
    text = name.partition(":")[2]
    if not text.isdigit() or int(text) < 1:
        raise ParseError(f"bad survival model {name!r}; expected survival:N with N >= 1")
    return int(text)


# -- survival closed forms -------------------------------------------------


def _step(i: int, k: int) -> int:
    return i**k - (i - 1) ** k


def _interval(lo: int, hi: int) -> frozenset:
    return frozenset(range(lo, hi + 1))


def _check_size(n: int) -> None:
    if not isinstance(n, int) or n < 1:
        raise ValueError("population size must be a positive integer")


def survival_mass_all_live(n: int, m: int) -> MassFunction:
    """Masses ``(i^m - (i-1)^m) / N^m`` on ``[i..N]`` after m survivals."""
    _check_size(n)
    if m < 1:
        raise ValueError("m must be at least 1")
    scale = n**m
    focal = {_interval(i, n): Fraction(_step(i, m), scale) for i in range(1, n + 1)}
    return MassFunction._trusted(Frame.range(0, n), focal)


def survival_mass_all_die(n: int, k: int) -> MassFunction:
    """Masses ``(i^k - (i-1)^k) / N^k`` on ``[0..N-i]`` after k deaths."""
    _check_size(n)
    if k < 1:
        raise ValueError("n must be at least 1")
    scale = n**k
    focal = {_interval(0, n - i): Fraction(_step(i, k), scale) for i in range(1, n + 1)}
    return MassFunction._trusted(Frame.range(0, n), focal)


def survival_normalizer(n: int, m: int, k: int, swap: bool = False) -> int:
    """The constant K of the mixed model; ``swap`` uses the mirrored sum."""
    if swap:
        return sum(_step(l, m) * (n - l) ** k for l in range(1, n + 1))
    return sum(_step(l, k) * (n - l) ** m for l in range(1, n + 1))


def survival_mass_mixed(n: int, m: int, k: int) -> MassFunction:
    """Mass on ``E_ij = [i..N-j]`` for ``i + j <= N`` after m survivals and k deaths."""
    _check_size(n)
    if m < 1 or k < 1:
        raise ValueError("mixed tallies need m >= 1 and n >= 1")
    big_k = survival_normalizer(n, m, k)
    if big_k == 0:
        raise IncompatibleEvidence("incompatible evidence: no survival count allows both outcomes")
    focal = {}
    for i in range(1, n):
        a = _step(i, m)
        for j in range(1, n - i + 1):
            focal[_interval(i, n - j)] = Fraction(a * _step(j, k), big_k)
    return MassFunction._trusted(Frame.range(0, n), focal)


def survival_mass(n: int, m: int, k: int) -> MassFunction:
    if m and k:
        return survival_mass_mixed(n, m, k)
    if m:
        return survival_mass_all_live(n, m)
    if k:
        return survival_mass_all_die(n, k)
    raise ParseError("empty tally: at least one count must be positive")


def survival_classification(n: int, m: int, k: int) -> Kind:
    """Structure of the pooled survival belief function, without building it."""
    if m and k:
        if n < 2:
            raise IncompatibleEvidence("incompatible evidence: no survival count allows both outcomes")
        # N = 2 leaves the single focal set [1..1]
        return Kind.PRECISE if n == 2 else Kind.GENERAL
    if not (m or k):
        raise ParseError("empty tally: at least one count must be positive")
    return Kind.PRECISE if n == 1 else Kind.CONSONANT


@dataclass(frozen=True)
class SurvivalPosterior:
    """Closed-form plausibilities for ``m`` survivals and ``k`` deaths among N."""

    n: int
    m: int
    k: int

    def __post_init__(self):
        _check_size(self.n)
        if self.m < 0 or self.k < 0:
            raise ValueError("counts must be non-negative")
        if not (self.m or self.k):
            raise ParseError("empty tally: at least one count must be positive")
        if self.m and self.k and self.n < 2:
            raise IncompatibleEvidence("incompatible evidence: no survival count allows both outcomes")

    @cached_property
    def frame(self) -> Frame:
        return Frame.range(0, self.n)

    @property
    def mixed(self) -> bool:
        return bool(self.m and self.k)

    @cached_property
    def normalizer(self) -> int:
        return survival_normalizer(self.n, self.m, self.k)

    @cached_property
    def _lower_sums(self) -> list[int]:
        # lower[r] = K * Pl([1..r])
        out, acc = [0], 0
        for l in range(1, self.n + 1):
            acc += _step(l, self.m) * (self.n - l) ** self.k
            out.append(acc)
        return out

    @cached_property
    def _upper_sums(self) -> list[int]:
        # upper[t] = sum_{l=1}^{t} (l^k-(l-1)^k)(N-l)^m, so K * Pl([r..N]) = upper[N - r]
        out, acc = [0], 0
        for l in range(1, self.n + 1):
            acc += _step(l, self.k) * (self.n - l) ** self.m
            out.append(acc)
        return out

    def point(self, theta: int) -> Fraction:
        n, m, k = self.n, self.m, self.k
        if not 0 <= theta <= n:
            raise FrameError("bound outside frame")
        if self.mixed:
            return Fraction(theta**m * (n - theta) ** k, self.normalizer)
        if m:
            return Fraction(theta, n) ** m
        return Fraction(n - theta, n) ** k

    def lower(self, r: int) -> Fraction:
        """Plausibility of ``[1..r]`` (equal to that of ``[0..r]``)."""
        return Fraction(self._lower_sums[r], self.normalizer)

    def upper(self, r: int) -> Fraction:
        """Plausibility of ``[r..N]`` (equal to that of ``[r..N-1]`` for r < N)."""
        return Fraction(self._upper_sums[self.n - r], self.normalizer)

    def interval(self, r: int, s: int) -> Fraction:
        if not 0 <= r <= s <= self.n:
            raise FrameError(f"bound outside frame: need 0 <= r <= s <= {self.n}")
        if not self.mixed:
            return self._consonant(r, s)
        return self.lower(s) + self.upper(r) - 1

    def _consonant(self, lo: int, hi: int) -> Fraction:
        # max over the set is attained at its largest (live) or smallest (die) element
        return self.point(hi) if self.m else self.point(lo)

    def _belief_interval(self, a: int, b: int) -> Fraction:
        # focal intervals inside [a..b] = 1 - Pl(left part) - Pl(right part) + Pl(both)
        n, m, k = self.n, self.m, self.k
        left = self.lower(a - 1) if a > 0 else Fraction(0)
        right = self.upper(b + 1) if b < n else Fraction(0)
        both = Fraction((a - 1) ** m * (n - b - 1) ** k, self.normalizer) if 0 < a and b < n else Fraction(0)
        return 1 - left - right + both

    def plausibility(self, h: Hypothesis) -> Fraction:
        h.check_frame(self.frame)
        labels = sorted(h.labels)
        if not labels:
            return Fraction(0)
        if not self.mixed:
            return self._consonant(labels[0], labels[-1])
        # every focal set is an interval, so Bel(complement) adds up over its runs
        pl = Fraction(1)
        for a, b in _runs(sorted(h.complement().labels)):
            pl -= self._belief_interval(a, b)
        return pl

    def mass_function(self) -> MassFunction:
        return survival_mass(self.n, self.m, self.k)

    @property
    def classification(self) -> Kind:
        return survival_classification(self.n, self.m, self.k)


def _runs(values: list[int]):
    start = prev = None
    for v in values:
        if start is None:
            start = prev = v
        elif v == prev + 1:
            prev = v
        else:
            yield start, prev
            start = prev = v
    if start is not None:
        yield start, prev


def survival_plausibility_interval(n: int, m: int, k: int, r: int, s: int) -> Fraction:
    """Plausibility of ``[r..s]`` via ``Pl([1..s]) + Pl([r..N]) - 1``."""
    if m < 1 or k < 1:
        raise ValueError("mixed tallies need m >= 1 and n >= 1")
    return SurvivalPosterior(n, m, k).interval(r, s)


def survival_weight(n: int, m: int, k: int, h: Hypothesis, h2: Hypothesis) -> LogWeight:
    post = SurvivalPosterior(n, m, k)
    if not h.members or not h2.members:
        raise ValueError("hypotheses must be non-empty")
    num, den = post.plausibility(h), post.plausibility(h2)
    if den == 0:
        if num == 0:
            raise UndefinedWeight("weight undefined: both sides have zero plausibility")
        return LogWeight.infinite()
    return LogWeight.of(num / den)


def survival_counts(tally: ObservationTally) -> tuple[int, int]:
    extra = set(tally.as_dict()) - {LIVE, DIE}
    if extra:
        raise ParseError(f"outcome {sorted(extra, key=str)[0]!r} is not an outcome of the survival model")
    return tally[LIVE], tally[DIE]


def limit_mass_all_live(n: int) -> MassFunction:
    """Limit of the all-survive mass function: certainty that everyone survives."""
    _check_size(n)
    return MassFunction._trusted(Frame.range(0, n), {frozenset((n,)): Fraction(1)})


# -- Markov chain over the nested focal sets -------------------------------

Matrix = tuple  # tuple of row tuples of Fractions


@dataclass(frozen=True)
class TransitionMatrix:
    """Column-stochastic lower-triangular chain over the focal sets ``[i..N]``."""

    size: int
    entries: Matrix

    def column_sums(self) -> list[Fraction]:
        return [sum(row[j] for row in self.entries) for j in range(self.size)]

    def apply(self, vector) -> list[Fraction]:
        return mat_vec(self.entries, vector)


def build_transition_matrix(n: int) -> TransitionMatrix:
    _check_size(n)
    rows = tuple(
        tuple(Fraction(j + 1, n) if i == j else Fraction(1, n) if i > j else Fraction(0) for j in range(n))
        for i in range(n)
    )
    return TransitionMatrix(n, rows)


def identity(n: int) -> Matrix:
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    cols = list(zip(*b))
    return tuple(tuple(sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in cols) for row in a)


def mat_vec(a: Matrix, v) -> list[Fraction]:
    return [sum((x * y for x, y in zip(row, v)), Fraction(0)) for row in a]


def mat_power(a: Matrix, k: int) -> Matrix:
    """``a**k`` by repeated multiplication."""
    out = identity(len(a))
    for _ in range(k):
        out = mat_mul(out, a)
    return out


def mat_inverse(a: Matrix) -> Matrix:
    """Exact Gauss-Jordan inverse over the rationals."""
    n = len(a)
    work = [list(row) + list(e) for row, e in zip(a, identity(n))]
    for col in range(n):
        pivot = next((r for r in range(col, n) if work[r][col] != 0), None)
        if pivot is None:
            raise ZeroDivisionError("singular matrix")
        work[col], work[pivot] = work[pivot], work[col]
        p = work[col][col]
        work[col] = [x / p for x in work[col]]
        for r in range(n):
            if r != col and work[r][col]:
                factor = work[r][col]
                work[r] = [x - factor * y for x, y in zip(work[r], work[col])]
    return tuple(tuple(row[n:]) for row in work)


def jordan_factors(n: int) -> tuple[Matrix, Matrix]:
    """Eigenvector matrix M and eigenvalue diagonal L with ``T = M L M^-1``.

    M has -1 on the diagonal (1 in the last position) and 1 just below it;
    L holds ``i/N`` for i = 1..N.
    """
    _check_size(n)
    m = tuple(
        tuple(
            Fraction(1 if i == n - 1 else -1) if i == j else Fraction(1) if i == j + 1 else Fraction(0)
            for j in range(n)
        )
        for i in range(n)
    )
    lam = tuple(tuple(Fraction(i + 1, n) if i == j else Fraction(0) for j in range(n)) for i in range(n))
    return m, lam


def jordan_power(n: int, k: int) -> Matrix:
    """``T**k`` computed as ``M L**k M^-1``."""
    if k < 0:
        raise ValueError("k must be non-negative")
    m, lam = jordan_factors(n)
    lam_k = tuple(tuple(x**k if i == j else x for j, x in enumerate(row)) for i, row in enumerate(lam))
    return mat_mul(mat_mul(m, lam_k), mat_inverse(m))


def all_live_vector(n: int, m: int) -> list[Fraction]:
    """Mass vector of ``[1..N], ..., [N..N]`` after m survivals, via the chain."""
    start = [Fraction(1, n)] * n
    return mat_vec(jordan_power(n, m - 1), start)
