"""Exception hierarchy shared by all modules."""


class FrobHochError(Exception):
    """Base class for every error raised by the engine."""


class ArityMismatch(FrobHochError):
    pass


class AlgebraMismatch(FrobHochError):
    pass


class SlotOutOfRange(FrobHochError):
    pass


class BadShuffle(FrobHochError):
    pass


class AlgebraSpecError(FrobHochError):
    """Structural failure while building an algebra; names the offending basis elements."""


class NotAssociative(AlgebraSpecError):
    pass


class NoUnit(AlgebraSpecError):
    pass


class DegeneratePairing(AlgebraSpecError):
    pass


class GradingViolation(AlgebraSpecError):
    pass


class ZeroArity(FrobHochError):
    pass


class EmptyWord(FrobHochError):
    pass


class CutOutOfRange(FrobHochError):
    pass


class NotConnectedGraded(FrobHochError):
    pass


class CalibrationFailure(FrobHochError):
    """No sign pair makes the dg-compatibility defect vanish."""


class ParseError(FrobHochError):
    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class UnknownBasisName(ParseError):
    pass
