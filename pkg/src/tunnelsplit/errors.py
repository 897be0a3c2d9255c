"""Exception hierarchy.

Every error raised on purpose derives from :class:`TunnelsplitError`.  The
``input_error`` flag tells the command line front end whether a failure is
a problem with what the user asked for (exit code 2) rather than a failed
verification.
"""


class TunnelsplitError(Exception):
    input_error = True


# expression parsing / evaluation

class ExpressionSyntaxError(TunnelsplitError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at offset {position}")
        self.position = position


class UnknownFunction(ExpressionSyntaxError):
    pass


class NonIntegerExponent(ExpressionSyntaxError):
    pass


class DomainError(TunnelsplitError):
    """Overflow or NaN while evaluating the potential."""


# profile analysis

class NotDoubleWell(TunnelsplitError):
    pass


class AsymmetricPotential(TunnelsplitError):
    pass


class MultipleBarriers(TunnelsplitError):
    pass


# numerics

class NoConvergence(TunnelsplitError):
    input_error = False


class NonFiniteSample(TunnelsplitError):
    input_error = False


class NoBracket(TunnelsplitError):
    pass


# physics preconditions

class EnergyOutOfRange(TunnelsplitError):
    pass


class MatchPointOutsideWell(TunnelsplitError):
    pass


class BarrierTooLow(TunnelsplitError):
    pass


class BoxTooSmall(TunnelsplitError):
    pass


class NoSeparation(TunnelsplitError):
    input_error = False


class NotConverging(TunnelsplitError):
    input_error = False


class InvalidParameter(TunnelsplitError, ValueError):
    """A physical or numerical parameter outside its allowed range."""
