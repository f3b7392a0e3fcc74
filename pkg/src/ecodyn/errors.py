"""Exception types shared across the model modules."""


class EcodynError(Exception):
    """Base class for all errors raised by this package."""


class InvariantViolation(EcodynError, ValueError):
    """A domain type was constructed with fields outside its invariants."""


class DomainError(EcodynError, ValueError):
    """An operation was evaluated outside its mathematical domain."""


class NonpositiveMargin(EcodynError, ValueError):
    """Selling price does not cover non-labor cost; the profit model has no
    positive region and its monotonicity guarantees do not hold."""


class SingularExponent(EcodynError, ValueError):
    """The general closed form divides by (exponent - 1); exponent 1 needs
    the dedicated logarithmic solution."""


class NumericalFailure(EcodynError, ArithmeticError):
    """A numerical routine produced non-finite intermediate values."""
