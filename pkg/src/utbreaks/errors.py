"""Exception types shared across the package."""


class FieldMismatch(ValueError):
    """Operands live in different coefficient fields."""


class PrecisionExhausted(ArithmeticError):
    """A quantity is not determined by the precision currently carried."""

    def __init__(self, message, bound=None):
        super().__init__(message)
        self.bound = bound


class NotInvertible(ArithmeticError):
    pass


class NotApplicable(ValueError):
    """A closed form's preconditions do not hold for this input."""


class HypothesisViolation(RuntimeError):
    """The input cannot define a UT_n(F_p)-extension, or the break computation
    contradicts the structure the theory guarantees for such inputs.

    ``pair`` names the offending (i, j) when known and ``report`` carries the
    breaks computed before the failure.
    """

    def __init__(self, message, pair=None, report=None):
        super().__init__(message)
        self.pair = pair
        self.report = report


class InstanceParseError(ValueError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
