"""Exception hierarchy.

``DomainError`` subclasses signal a well-formed request the model cannot
answer; the CLI maps them to exit code 3.
"""


class DomainError(Exception):
    """Base class for model-level failures (as opposed to bad input)."""


class AmbiguousMode(DomainError):
    pass


class UndefinedMode(DomainError):
    pass


class NoBestResponse(DomainError):
    pass


class EmptyPosterior(DomainError):
    pass


class DegenerateData(DomainError):
    pass


class NonConvergence(DomainError):
    pass


class ZeroVariance(DomainError):
    pass
