"""Exception types shared across the package."""


class EvidenceError(ValueError):
    """Base class for every error raised by this package."""


class ParseError(EvidenceError):
    """Malformed user input: rationals, hypothesis expressions, JSON files."""


class FrameError(EvidenceError):
    """Labels or bounds outside a frame, or objects on mismatched frames."""


class InvalidMassFunction(EvidenceError):
    pass


class InvalidModel(EvidenceError):
    pass


class ImpossibleObservation(EvidenceError):
    pass


class IncompatibleEvidence(EvidenceError):
    """Dempster combination of totally conflicting mass functions."""


class FocalLimitExceeded(EvidenceError):
    pass


class UndefinedWeight(EvidenceError):
    pass


class ProportionalityViolated(AssertionError):
    """Plausibility is not proportional to likelihood; indicates a bug."""
