"""Exception types shared across the package."""


class GdtuneError(Exception):
    """Base class; ``code`` is the machine-readable identifier used by the CLI."""

    code = "error"


class DimensionError(GdtuneError, ValueError):
    code = "dimension"


class SymbolicBudgetExceeded(GdtuneError):
    code = "budget"


class BudgetExceeded(SymbolicBudgetExceeded):
    """Raised when a network objective would need too many boundary polynomials."""


class ZeroPolynomial(GdtuneError, ValueError):
    code = "zero_polynomial"


class DomainMismatch(GdtuneError, ValueError):
    code = "domain_mismatch"


class DegenerateTrajectory(GdtuneError):
    """An iterate stays exactly on a boundary over a whole parameter interval."""

    code = "degenerate_trajectory"

    def __init__(self, message, cell=None):
        super().__init__(message)
        self.cell = cell


class MissingPiece(GdtuneError, KeyError):
    code = "missing_piece"


class ParseError(GdtuneError, ValueError):
    code = "parse"

    def __init__(self, message, field=None, line=None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)
        self.field = field
        self.line = line


class CapExceeded(GdtuneError, ValueError):
    code = "cap"


class InvariantViolation(GdtuneError, AssertionError):
    code = "invariant"


class NonFiniteIterate(RuntimeWarning):
    """Floating-point gradient descent produced inf/nan; the point is costed H."""
