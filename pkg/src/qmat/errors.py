"""Exception types shared across the package."""


class QmatError(Exception):
    """Base class for every error raised here."""


class IdyllError(QmatError):
    pass


class GP2Violation(QmatError):
    """A Plücker relation sum is not null.  ``witness`` holds the offending (y, x) pair."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class AllZero(QmatError):
    pass


class InfiniteCarrier(QmatError):
    pass


class BudgetExceeded(QmatError):
    pass


class ShapeMismatch(QmatError):
    pass


class NotSubmonomial(QmatError):
    pass


class ConditionViolated(QmatError):
    pass


class MorphismViolation(QmatError):
    def __init__(self, message, arrow=None, witness=None):
        super().__init__(message)
        self.arrow = arrow
        self.witness = witness


class NotF1Linear(QmatError):
    pass


class NotStrong(QmatError):
    pass


class NotSubrepresentation(QmatError):
    pass


class NotNiceGrading(QmatError):
    pass


class InvalidSequence(QmatError):
    pass


class NotFound(QmatError):
    pass
