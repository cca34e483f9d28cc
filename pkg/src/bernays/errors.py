"""Exception hierarchy. CLI exit codes are attached to the classes."""


class BernaysError(Exception):
    exit_code = 1


class InvalidDiscriminantError(BernaysError, ValueError):
    exit_code = 2


class NotFundamentalError(BernaysError, ValueError):
    exit_code = 3


class BudgetExceededError(BernaysError):
    exit_code = 4


class OutOfRangeError(BernaysError, ValueError):
    exit_code = 2


class EstimatorDisagreementError(BernaysError, ArithmeticError):
    """The direct and accelerated estimates of E(D) do not overlap."""
