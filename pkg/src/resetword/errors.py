"""Exception hierarchy.

Every error carries an ``exit_code`` used by the command line front end:
1 usage, 2 validation, 3 budget/cap, 4 internal assertion.
"""


class ResetWordError(Exception):
    exit_code = 4


class ValidationError(ResetWordError, ValueError):
    exit_code = 2


class InvalidWordError(ValidationError):
    pass


class PreconditionError(ValidationError):
    pass


class NotSynchronizingError(PreconditionError):
    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class NotPrimitiveError(PreconditionError):
    pass


class ClassMismatchError(PreconditionError):
    pass


class CriterionViolated(ResetWordError):
    """No extension word exists; the completeness premises do not hold."""

    exit_code = 2


class BudgetExceeded(ResetWordError):
    exit_code = 3


class CapExceeded(BudgetExceeded):
    def __init__(self, message, bound=None):
        super().__init__(message)
        self.bound = bound


class SearchExhausted(BudgetExceeded):
    pass


class CertificateError(ResetWordError, AssertionError):
    exit_code = 4
