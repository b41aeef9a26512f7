"""Exception types raised across the package.

Anything that is a caller mistake on ordinary data (wrong dimension, unknown
reaction, negative counts) raises plain ``ValueError``/``KeyError``.  The
classes here cover conditions with domain meaning that callers may want to
catch individually.
"""

from __future__ import annotations


class CRNError(Exception):
    """Base class for domain-specific errors."""


class ParseError(CRNError):
    """Syntax or semantic error in network source text.

    Carries 1-based ``line`` and ``column`` of the offending token.
    """

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


class AbsorbingStateError(CRNError):
    """A jump-chain quantity was requested at a state with total rate 0."""


class InvalidSequenceError(CRNError):
    """A parametric sequence (or a shift of one) leaves the nonnegative orthant."""


class TailNotNormalizedError(CRNError):
    """A sequence's start index is too small for tier classification.

    Raised when some complex has intensity 0 at the start index but positive
    intensity further along, so the "zero for all n / positive for all n"
    dichotomy does not hold yet.  Raise the start index (see
    ``ParametricSequence.normalized_for``) and retry.
    """


class BudgetExceededError(CRNError):
    """An enumeration would exceed its configured work budget."""


class WitnessPathError(CRNError):
    """A witness path could not be constructed from the given inputs."""


class NoDropComplexError(WitnessPathError):
    """All complexes share one growth tier, so no path can drop out of it."""


class AmbiguousRegionError(CRNError):
    """A truncation region contains more than one closed communicating class.

    ``classes`` holds the closed classes found, each a tuple of states.
    """

    def __init__(self, message: str, classes):
        super().__init__(message)
        self.classes = classes
