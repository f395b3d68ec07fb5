"""Exception hierarchy shared by every module of the package."""


class WirtingerError(Exception):
    """Base class for all package errors."""


class AdmissibilityError(WirtingerError, ValueError):
    """Some exponent violates ``4 c_j not in Z``."""

    def __init__(self, message: str, index: int | None = None) -> None:
        super().__init__(message)
        self.index = index


class SumError(WirtingerError, ValueError):
    """The exponents do not sum to zero."""


class ConfigError(WirtingerError, ValueError):
    pass


class DegenerateConfigError(ConfigError):
    """Two branch points coincide (or hit 0 or 1)."""


class SingularityError(WirtingerError):
    """A continuation path came too close to a branch point."""


class ResonanceError(WirtingerError, ArithmeticError):
    """A local exponent is (numerically) an integer where it must not be."""


class TruncationError(WirtingerError, ArithmeticError):
    pass


class ToleranceError(WirtingerError, ArithmeticError):
    """Quadrature did not reach the requested tolerance.

    ``estimate`` carries the best value obtained.
    """

    def __init__(self, message: str, estimate: complex | None = None) -> None:
        super().__init__(message)
        self.estimate = estimate


class UnknownSymbolError(WirtingerError, KeyError):
    pass


class DivergenceError(WirtingerError, ArithmeticError):
    pass


class TailBoundError(WirtingerError, ArithmeticError):
    pass


class PoleError(WirtingerError, ArithmeticError):
    pass


class ConventionError(WirtingerError):
    pass


class ParseError(WirtingerError, ValueError):
    def __init__(self, message: str, field: str | None = None, line: int | None = None) -> None:
        where = []
        if field is not None:
            where.append(f"field {field!r}")
        if line is not None:
            where.append(f"line {line}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)
        self.field = field
        self.line = line
