"""Exception hierarchy shared across the package."""


class AffineLabError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(AffineLabError, ValueError):
    """A complex literal or surface description could not be parsed."""


class DomainError(AffineLabError, ValueError):
    """An operation was applied outside its mathematical domain."""


class InvariantError(AffineLabError, ValueError):
    """A structural invariant (nonzero direction, lattice independence, finite
    floats, ...) does not hold."""


class UsageError(AffineLabError, ValueError):
    """Operands belong to different surfaces, or an argument combination makes
    no sense for the requested operation."""
