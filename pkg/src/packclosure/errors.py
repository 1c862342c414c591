"""Exception types shared across the package."""


class BudgetExceeded(RuntimeError):
    """A point, cell or dimension budget was exceeded."""


class DimensionCapExceeded(BudgetExceeded):
    pass


class EmptySetError(ValueError):
    pass


class NotADownset(ValueError):
    """Raised when a polyhedron is not closed under decreasing coordinates.

    ``x`` lies in the polyhedron, ``y <= x`` componentwise with ``y >= 0``,
    and ``y`` does not. Both are ``None`` when the polyhedron is empty.
    """

    def __init__(self, message, x=None, y=None):
        super().__init__(message)
        self.x = x
        self.y = y


class NotDecreasing(ValueError):
    pass


class NotValidDirection(ValueError):
    pass


class InstanceError(ValueError):
    """Malformed input data; the message carries the offending position."""
