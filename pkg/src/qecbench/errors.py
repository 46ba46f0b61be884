"""Exception types shared across the workbench."""


class QecError(Exception):
    """Base class for errors raised by this package."""


class NoRightInverse(QecError):
    """Matrix is rank deficient, so no right inverse exists."""


class NoSolution(QecError):
    """Linear system has no solution on the allowed columns."""


class CapacityExceeded(QecError):
    """Requested exhaustive computation is above the configured guard."""


class NotAbelian(QecError):
    """Generators do not mutually commute (or -I is in their span)."""


class NotCss(QecError):
    """Check matrices violate the X/Z orthogonality requirement."""


class NotAComplex(QecError):
    """Adjacent boundary maps do not compose to zero."""

    def __init__(self, index: int):
        self.index = index
        super().__init__(f"boundary_{index} @ boundary_{index + 1} != 0")


class DistanceUnknown(QecError):
    """No logical operator was found up to the requested search weight."""

    def __init__(self, max_weight: int):
        self.max_weight = max_weight
        super().__init__(f"no logical operator of weight <= {max_weight}")


class Unsatisfiable(QecError):
    """Syndrome is outside the image of the check matrix."""


class StateError(QecError):
    """Tableau operation applied to a state that does not support it."""
