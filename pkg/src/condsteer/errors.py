"""Exception hierarchy shared by every module of the package."""


class CondSteerError(Exception):
    """Base class for all errors raised by condsteer."""


class NotHermitian(CondSteerError, ValueError):
    pass


class NoConvergence(CondSteerError, RuntimeError):
    pass


class DimensionMismatch(CondSteerError, ValueError):
    pass


class InvalidState(CondSteerError, ValueError):
    """The operator is not a density matrix (shape, Hermiticity or trace)."""


class NotPositive(InvalidState):
    """The operator has an eigenvalue below the positivity tolerance."""


class OutOfRange(CondSteerError, ValueError):
    pass


class NoBracket(CondSteerError, ValueError):
    """A predicate has the same truth value at both ends of a search range."""


class UnknownTheorem(CondSteerError, KeyError):
    pass


class DivisionByZero(CondSteerError, ZeroDivisionError):
    """A closed-form expression hit a vanishing denominator."""


class SpecSyntaxError(CondSteerError, ValueError):
    """A textual family specification could not be parsed."""
