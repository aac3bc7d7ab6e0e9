"""Typed errors.  Each class carries the CLI exit code it maps to."""


class HLLError(Exception):
    exit_code = 1

    def __init__(self, message, place=None, hypothesis=None):
        super().__init__(message)
        self.place = place
        self.hypothesis = hypothesis

    def record(self):
        out = {"error": type(self).__name__, "message": str(self)}
        if self.place is not None:
            out["place"] = self.place
        if self.hypothesis is not None:
            out["hypothesis"] = self.hypothesis
        return out


class SchemaError(HLLError, ValueError):
    exit_code = 1


class IncompatibleRingError(HLLError, ValueError):
    exit_code = 1


class HypothesisError(HLLError, ValueError):
    """A precondition of a closed form or a structural assumption failed."""
    exit_code = 2


class PoleError(HypothesisError):
    pass


class BoundError(HLLError):
    """Enumeration, precision or level bound exceeded."""
    exit_code = 3


class PrecisionError(BoundError, ArithmeticError):
    pass


class EnumerationBoundError(BoundError):
    pass


class LevelError(BoundError):
    pass


class NotPIntegralError(HLLError, ArithmeticError):
    exit_code = 4


class VerificationError(HLLError):
    exit_code = 4
