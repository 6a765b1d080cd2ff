"""Exception hierarchy.

Every error raised on bad input derives from :class:`AlphaLeakError`, which
is itself a ``ValueError`` so callers that only care about "bad argument"
can catch the builtin.  Numerical failures (optimizers that run out of
budget) derive from :class:`NumericalError` instead.
"""


class AlphaLeakError(ValueError):
    """Base class for invalid-input errors."""


class EmptyVector(AlphaLeakError):
    def __init__(self):
        super().__init__("probability vector is empty")


class NegativeMass(AlphaLeakError):
    def __init__(self, index):
        self.index = index
        super().__init__(f"negative mass at index {index}")


class NonFiniteMass(AlphaLeakError):
    def __init__(self, index):
        self.index = index
        super().__init__(f"non-finite mass at index {index}")


class SumOutOfTolerance(AlphaLeakError):
    def __init__(self, actual_sum, where=None):
        self.actual_sum = actual_sum
        self.where = where
        loc = "" if where is None else f" (row {where})"
        super().__init__(f"masses sum to {actual_sum!r}{loc}, expected 1")


class DimensionMismatch(AlphaLeakError):
    pass


class EmptySubset(AlphaLeakError):
    def __init__(self):
        super().__init__("subset is empty")


class InvalidIndex(AlphaLeakError):
    pass


class ZeroTotal(AlphaLeakError):
    def __init__(self):
        super().__init__("subset carries zero probability mass")


class InvalidOrder(AlphaLeakError):
    pass


class UnsupportedOrder(AlphaLeakError):
    def __init__(self, order, what=""):
        self.order = order
        msg = f"order {order} is not supported"
        if what:
            msg += f" by {what}"
        super().__init__(msg)


class ZeroOutputMass(AlphaLeakError):
    def __init__(self, y):
        self.y = y
        super().__init__(f"output symbol {y} has zero probability")


class InputFormatError(AlphaLeakError):
    """A data file is unreadable or lacks a required field."""


class NumericalError(ArithmeticError):
    """Base class for optimizer / budget failures."""


class NonConvergence(NumericalError):
    def __init__(self, iterations, residual):
        self.iterations = iterations
        self.residual = residual
        super().__init__(
            f"no convergence after {iterations} iterations (residual {residual:.3g})"
        )


class BudgetExceeded(NumericalError):
    def __init__(self, needed, budget):
        self.needed = needed
        self.budget = budget
        super().__init__(f"needs {needed} evaluations, budget is {budget}")


class RouteMismatch(NumericalError):
    """Two independent evaluations of the same quantity disagree."""

    def __init__(self, what, first, second, tol):
        self.first = first
        self.second = second
        super().__init__(
            f"{what}: routes disagree ({first!r} vs {second!r}, tol {tol:g})"
        )


class BoundExceeded(NumericalError):
    """A searched leakage came out above the Sibson information it should obey."""

    def __init__(self, value, bound, kernel):
        self.value = value
        self.bound = bound
        self.kernel = kernel
        super().__init__(f"search found leakage {value!r} above the Sibson bound {bound!r}")
