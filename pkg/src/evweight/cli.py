"""Command-line interface: ``evw weigh | focal | scan-n | interpret | verify``.

Exit codes: 0 success, 1 verification failure, 2 input error,
3 undefined or unsupported result.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import models
from .belief import classify
from .errors import (
    EvidenceError,
    FocalLimitExceeded,
    FrameError,
    ImpossibleObservation,
    IncompatibleEvidence,
    InvalidMassFunction,
    InvalidModel,
    ParseError,
    UndefinedWeight,
)
from .evidence import draws_from_log10, interpret_as_urn_draws, weight_from_mass
from .frames import Frame, LogWeight, format_rational, parse_hypothesis, parse_rational, render_set
from .gfm import GeneralizedFunctionalModel, ObservationTally, observe_tally

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_UNDEFINED = 0, 1, 2, 3

INPUT_ERRORS = (ParseError, FrameError, InvalidModel, InvalidMassFunction, ImpossibleObservation, FocalLimitExceeded)


# -- argument helpers ------------------------------------------------------


def _count(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a count: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"negative count: {text!r}")
    return value


def parse_tally_args(pairs: list[str] | None, live: int | None, die: int | None) -> dict:
    counts: dict = {}
    for pair in pairs or []:
        label, sep, value = pair.partition("=")
        if not sep or not label.strip():
            raise ParseError(f"bad --tally {pair!r}; expected label=count")
        try:
            n = int(value)
        except ValueError:
            raise ParseError(f"bad count in --tally {pair!r}") from None
        if n < 0:
            raise ParseError(f"negative count in --tally {pair!r}")
        counts[label.strip()] = counts.get(label.strip(), 0) + n
    for label, n in ((models.LIVE, live), (models.DIE, die)):
        if n:
            counts[label] = counts.get(label, 0) + n
    return counts


def load_model(ref: str) -> GeneralizedFunctionalModel:
    if ref in ("urn-gfm1", "urn-gfm2") or ref.startswith("survival:"):
        return models.resolve_model(ref)
    path = Path(ref)
    if not path.is_file():
        raise ParseError(f"model {ref!r} is neither a built-in name nor a readable JSON file")
    return GeneralizedFunctionalModel.from_json(path.read_text(), name=str(path))


def _match_outcomes(model: GeneralizedFunctionalModel, tally: ObservationTally) -> ObservationTally:
    by_text = {str(x): x for x in model.outcomes}
    counts = {}
    for label, n in tally.counts:
        if label not in by_text:
            raise ParseError(f"outcome {label!r} is not an outcome of {model.name or 'the model'}")
        counts[by_text[label]] = n
    return ObservationTally(counts)


class Evaluation:
    """Pooled belief function for a model reference and tally.

    Survival models go through the closed forms; everything else through
    generic Dempster combination.
    """

    def __init__(self, model_ref: str, counts: dict):
        tally = ObservationTally(counts)
        self.model_ref = model_ref
        self.survival = None
        if model_ref.startswith("survival:"):
            n = models.parse_survival_size(model_ref)
            m, k = models.survival_counts(tally)
            self.survival = models.SurvivalPosterior(n, m, k)
            self.frame = self.survival.frame
            self.tally = tally
            self._mass = None
        else:
            self.model = load_model(model_ref)
            self.tally = _match_outcomes(self.model, tally)
            self.frame = self.model.theta
            self._mass = observe_tally(self.model, self.tally).result

    @property
    def mass(self):
        if self._mass is None:
            self._mass = self.survival.mass_function()
        return self._mass

    @property
    def classification(self):
        if self.survival is not None:
            return self.survival.classification
        return classify(self.mass)

    def weight(self, h, h2) -> LogWeight:
        if self.survival is not None:
            return models.survival_weight(self.survival.n, self.survival.m, self.survival.k, h, h2)
        return weight_from_mass(self.mass, h, h2)


def _tally_text(tally: ObservationTally) -> str:
    return " ".join(f"{x}={n}" for x, n in tally.counts)


def _log10_text(w: LogWeight) -> str:
    if w.is_infinite:
        return "inf"
    if w.log10 is None:
        return "-inf"
    return f"{w.log10:.6f}"


# -- commands --------------------------------------------------------------


def cmd_weigh(args) -> int:
    ev = Evaluation(args.model, parse_tally_args(args.tally, args.live, args.die))
    h = parse_hypothesis(args.h, ev.frame)
    h2 = parse_hypothesis(args.h2, ev.frame)
    w = ev.weight(h, h2)
    kind = ev.classification
    if args.json:
        report = {
            "model": args.model,
            "tally": {str(x): n for x, n in ev.tally.counts},
            "h": list(h.labels),
            "h2": list(h2.labels),
            "weight": str(w),
            "log10": w.log10,
            "classification": str(kind),
        }
        print(json.dumps(report))
    else:
        print(f"model\t{args.model}")
        print(f"tally\t{_tally_text(ev.tally)}")
        print(f"H\t{h}")
        print(f"H'\t{h2}")
        print(f"classification\t{kind}")
        print(f"weight\t{w}")
        print(f"log10\t{_log10_text(w)}")
    return EXIT_OK


def cmd_focal(args) -> int:
    ev = Evaluation(args.model, parse_tally_args(args.tally, args.live, args.die))
    mass = ev.mass
    if args.json:
        data = mass.to_json()
        data["classification"] = str(ev.classification)
        print(json.dumps(data))
        return EXIT_OK
    print("set\tmass")
    for labels, value in mass.label_items():
        print(f"{render_set(labels)}\t{format_rational(value)}")
    return EXIT_OK


def cmd_scan_n(args) -> int:
    if args.step < 1 or args.start < 1 or args.stop < args.start:
        raise ParseError("need 1 <= --from <= --to and --step >= 1")
    counts = parse_tally_args(None, args.live, args.die)
    rows = []
    previous = None
    for n in range(args.start, args.stop + 1, args.step):
        frame = Frame.range(0, n)
        try:
            h = parse_hypothesis(args.h, frame)
            h2 = parse_hypothesis(args.h2, frame)
        except FrameError as exc:
            print(f"warning: {_misalignment(n, (args.h, args.h2)) or exc}; skipping N={n}", file=sys.stderr)
            continue
        post = models.SurvivalPosterior(n, counts.get(models.LIVE, 0), counts.get(models.DIE, 0))
        w = models.survival_weight(post.n, post.m, post.k, h, h2)
        plateau = previous is not None and w.log10 is not None and abs(w.log10 - previous) < 0.01
        rows.append((n, w, plateau))
        previous = w.log10
    if not rows:
        print("error: every N in the range was skipped", file=sys.stderr)
        return EXIT_INPUT
    if args.json:
        print(json.dumps([{"N": n, "weight": str(w), "log10": w.log10, "plateau": p} for n, w, p in rows]))
    else:
        print("N\tlog10_weight\tplateau")
        for n, w, p in rows:
            print(f"{n}\t{_log10_text(w)}\t{'yes' if p else ''}")
    return EXIT_OK


def _misalignment(n: int, exprs) -> str | None:
    for e in exprs:
        e = e.strip()
        token = e[2:] if e.startswith(">=") else e[1:] if e.startswith("=") else None
        if token is None:
            continue
        try:
            rate = parse_rational(token)
        except ParseError:
            continue
        if (rate * n).denominator != 1:
            return f"{n} not divisible by {rate.denominator}"
    return None


def cmd_interpret(args) -> int:
    if (args.weight is None) == (args.log10 is None):
        raise ParseError("give exactly one of --weight or --log10")
    if args.weight is not None:
        k = interpret_as_urn_draws(LogWeight.of(parse_rational(args.weight)))
    else:
        k = draws_from_log10(args.log10)
    if args.json:
        print(json.dumps({"draws": k, "reference": "WW vs BW, two-ball urn"}))
    else:
        print(k)
        print(f"equivalent to {k} consecutive white draws (WW vs BW)")
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import run_all

    start = time.perf_counter()
    results = run_all(args.grid)
    for r in results:
        print(f"{r.name}\tpassed={r.passed}\tfailed={r.failed}")
    print(f"elapsed\t{time.perf_counter() - start:.1f}s")
    failures = [r for r in results if not r.ok]
    if failures:
        first = failures[0]
        print(f"FAIL {first.name}: {first.counterexample}", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


# -- expression generator used by the property tests ----------------------


def generate_expression(rng: random.Random, n: int) -> tuple[str, set]:
    """A random hypothesis expression on ``{0..n}`` and the labels it denotes."""
    form = rng.choice(["set", "interval", "at-least", "exactly"])
    if form == "set":
        labels = rng.sample(range(n + 1), rng.randint(1, min(4, n + 1)))
        return "{" + ",".join(map(str, labels)) + "}", set(labels)
    if form == "interval":
        lo = rng.randint(0, n)
        hi = rng.randint(lo, n)
        return f"[{lo}..{hi}]", set(range(lo, hi + 1))
    q = rng.choice([d for d in range(1, n + 1) if n % d == 0])
    p = rng.randint(0, q)
    target = n * p // q
    rate = format_rational(Fraction(p, q))
    if form == "at-least":
        return f">={rate}", set(range(target, n + 1))
    return f"={rate}", {target}


# -- entry point -------------------------------------------------------------


def _add_model_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--model", required=True, help="urn-gfm1, urn-gfm2, survival:N or a GFM JSON file")
    p.add_argument("--tally", action="append", metavar="LABEL=COUNT", help="observation count (repeatable)")
    p.add_argument("--live", type=_count, help="survival count (survival models)")
    p.add_argument("--die", type=_count, help="death count (survival models)")
    p.add_argument("--json", action="store_true", help="machine-readable output with exact rationals")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="evw", description="Exact weights of evidence from belief functions.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("weigh", help="weight of evidence Pl(H)/Pl(H')")
    _add_model_args(p)
    p.add_argument("--h", required=True, help="hypothesis: {a,b}, [lo..hi], >=p/q or =p/q")
    p.add_argument("--h2", required=True, help="alternative hypothesis, same grammar")
    p.set_defaults(func=cmd_weigh)

    p = sub.add_parser("focal", help="focal sets and masses of the pooled belief function")
    _add_model_args(p)
    p.set_defaults(func=cmd_focal)

    p = sub.add_parser("scan-n", help="log10 weight of the survival model across population sizes")
    p.add_argument("--live", type=_count, default=0)
    p.add_argument("--die", type=_count, default=0)
    p.add_argument("--h", default=">=4/5")
    p.add_argument("--h2", default="=1/5")
    p.add_argument("--from", dest="start", type=int, required=True)
    p.add_argument("--to", dest="stop", type=int, required=True)
    p.add_argument("--step", type=int, default=1)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_scan_n)

    p = sub.add_parser("interpret", help="equivalent number of all-white draws from a two-ball urn")
    p.add_argument("--weight", help="exact weight p/q")
    p.add_argument("--log10", type=float, help="base-10 logarithm of the weight")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_interpret)

    p = sub.add_parser("verify", help="run the invariant suites")
    p.add_argument("--grid", choices=["small", "full"], default="small")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (UndefinedWeight, IncompatibleEvidence) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNDEFINED
    except EvidenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNDEFINED
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
