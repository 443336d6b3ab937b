"""Exception types shared across the package."""


class DivringError(Exception):
    """Base class for library errors."""


class PrecisionError(DivringError, ArithmeticError):
    """The available precision does not determine the requested quantity."""


class ValuationUndefined(PrecisionError):
    """Valuation of a series that is zero to its precision."""


class NotPerfectError(DivringError, ArithmeticError):
    """A p-th root was requested over a coefficient field that is not perfect."""


class FieldMismatch(DivringError, TypeError):
    """Operands live over incompatible fields, algebras or difference fields."""


class NotInvertible(DivringError, ZeroDivisionError):
    """Inversion of an exact zero."""


class EnumerationBoundExceeded(DivringError):
    """A brute-force enumeration would exceed the configured bound."""


class Undecidable(DivringError):
    """The requested property cannot be decided by the available methods."""
