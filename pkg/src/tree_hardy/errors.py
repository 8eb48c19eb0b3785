"""Exception hierarchy.

Everything raised for bad input derives from ``ValidationError`` so the CLI
can map it to exit code 2 in one place.
"""


class ValidationError(ValueError):
    """Base class for rejected input."""


class MalformedTree(ValidationError):
    pass


class LevelOutOfRange(ValidationError):
    pass


class NoWitness(ValidationError):
    """The truncation is too shallow (or the weight too tame) for a witness."""


class WrongExponents(ValidationError):
    pass


class NotApplicable(ValidationError):
    """A specialised formula was requested for an instance of the wrong shape."""


class UnknownCriterion(ValidationError):
    pass


class NoSuitableLevel(ValidationError):
    pass


class UnknownExample(ValidationError):
    pass


class InvariantViolation(RuntimeError):
    """Internal post-condition failed; maps to CLI exit code 3."""
