"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class RangeError(ValueError):
    """An argument exceeds a configured computational bound."""


class FactorError(ArithmeticError):
    """Trial division left a composite cofactor it cannot split."""


class CapError(RuntimeError):
    """A search grew past its configured size cap."""
