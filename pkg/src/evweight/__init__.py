"""Exact weights of evidence from belief functions induced by generalized functional models."""

from .belief import CombinationReport, Kind, MassFunction, belief, classify, combine, combine_power, plausibility
from .errors import (
    EvidenceError,
    FocalLimitExceeded,
    FrameError,
    ImpossibleObservation,
    IncompatibleEvidence,
    InvalidMassFunction,
    InvalidModel,
    ParseError,
    ProportionalityViolated,
    UndefinedWeight,
)
from .evidence import (
    interpret_as_urn_draws,
    supports,
    weight,
    weight_consonant,
    weight_precise,
    weight_simple,
)
from .frames import (
    Frame,
    Hypothesis,
    LogWeight,
    format_rational,
    make_interval_hypothesis,
    make_rate_hypothesis,
    parse_rational,
)
from .gfm import (
    GeneralizedFunctionalModel,
    ObservationTally,
    induced_distribution,
    likelihood,
    observe_one,
    observe_tally,
    proportionality_constant,
)
from .models import (
    SurvivalPosterior,
    build_survival_gfm,
    build_transition_matrix,
    build_urn_gfm1,
    build_urn_gfm2,
    jordan_power,
    limit_mass_all_live,
    resolve_model,
    survival_mass_all_die,
    survival_mass_all_live,
    survival_mass_mixed,
    survival_plausibility_interval,
    survival_weight,
)

__version__ = "0.1.0"

__all__ = [
    "CombinationReport",
    "EvidenceError",
    "FocalLimitExceeded",
    "Frame",
    "FrameError",
    "GeneralizedFunctionalModel",
    "Hypothesis",
    "ImpossibleObservation",
    "IncompatibleEvidence",
    "InvalidMassFunction",
    "InvalidModel",
    "Kind",
    "LogWeight",
    "MassFunction",
    "ObservationTally",
    "ParseError",
    "ProportionalityViolated",
    "SurvivalPosterior",
    "UndefinedWeight",
    "belief",
    "build_survival_gfm",
    "build_transition_matrix",
    "build_urn_gfm1",
    "build_urn_gfm2",
    "classify",
    "combine",
    "combine_power",
    "format_rational",
    "induced_distribution",
    "interpret_as_urn_draws",
    "jordan_power",
    "likelihood",
    "limit_mass_all_live",
    "make_interval_hypothesis",
    "make_rate_hypothesis",
    "observe_one",
    "observe_tally",
    "parse_rational",
    "plausibility",
    "proportionality_constant",
    "resolve_model",
    "supports",
    "survival_mass_all_die",
    "survival_mass_all_live",
    "survival_mass_mixed",
    "survival_plausibility_interval",
    "survival_weight",
    "weight",
    "weight_consonant",
    "weight_precise",
    "weight_simple",
]
