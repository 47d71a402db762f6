"""Exception hierarchy shared by every module of the package."""


class ArtifactError(Exception):
    """Base class for all library errors."""


# field / linalg
class MixedFields(ArtifactError):
    pass


class DivisionByZero(ArtifactError, ZeroDivisionError):
    pass


class DimensionMismatch(ArtifactError, ValueError):
    pass


class ArityMismatch(ArtifactError, ValueError):
    pass


# relations and synthesis
class UnknownGenerator(ArtifactError, KeyError):
    pass


class NotLagrangian(ArtifactError, ValueError):
    pass


class RankDeficient(ArtifactError, ValueError):
    pass


class IndexOutOfRange(ArtifactError, IndexError):
    pass


class EqualIndices(ArtifactError, ValueError):
    pass


class FieldNotPrime(ArtifactError, ValueError):
    pass


class EulerIdentityFailed(ArtifactError, AssertionError):
    pass


# stabilizer oracle
class EvenOrNonPrime(ArtifactError, ValueError):
    pass


class CircuitTooLarge(ArtifactError, ValueError):
    pass


class NonStabilizerGate(ArtifactError, ValueError):
    pass


class StateNotStabilizer(ArtifactError, ValueError):
    pass


class CorrespondenceViolation(ArtifactError, AssertionError):
    def __init__(self, message, weyl=None):
        super().__init__(message)
        self.weyl = weyl


# netlists and text formats
class NegativeValue(ArtifactError, ValueError):
    pass


class DanglingNode(ArtifactError, ValueError):
    pass


class EmptyBehaviour(ArtifactError, ValueError):
    pass


class ParseError(ArtifactError, ValueError):
    def __init__(self, message, line=None, col=None):
        where = ""
        if line is not None:
            where = f"line {line}" + (f", col {col}" if col is not None else "") + ": "
        super().__init__(where + message)
        self.line = line
        self.col = col


class UnknownGate(ParseError):
    pass


class BadParameter(ParseError):
    pass
