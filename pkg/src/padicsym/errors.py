"""Exception hierarchy shared by every part of the package."""


class PadicError(ValueError):
    """Base class for all package errors."""


class PadicSyntaxError(PadicError):
    def __init__(self, message, text=None, position=None):
        self.text = text
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class DigitRangeError(PadicSyntaxError):
    pass


class PrimeMismatch(PadicError):
    pass


class NotPrime(PadicError):
    pass


class DivisionByZero(PadicError, ZeroDivisionError):
    pass


class InsufficientPrecision(PadicError):
    pass


class PrecisionExhausted(InsufficientPrecision):
    pass


class DomainError(PadicError):
    pass


class NoRoot(PadicError):
    pass


class RangeError(PadicError):
    pass


class NotOnCircle(PadicError):
    pass


class NotInSubgroup(PadicError):
    pass


class RankMismatch(PadicError):
    pass


class SingularMatrix(PadicError):
    pass


class GroupMismatch(PadicError):
    pass


class SpaceMismatch(PadicError):
    pass


class IndeterminateCase(PadicError):
    """A case split could not be decided at the available precision."""


class PlanError(PadicError):
    pass


class NotClosed(PadicError):
    pass


class UnsupportedForm(PadicError):
    pass


class UnsupportedAction(PadicError):
    pass


class RankDeficiencyWarning(UserWarning):
    pass
