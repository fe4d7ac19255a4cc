"""Exception types raised across the package."""


class GraphError(ValueError):
    """A graph or template violates a structural requirement of an operation."""


class QueryError(ValueError):
    """A separation query is malformed (unknown vertex, future time, overlap)."""


class BudgetExceeded(RuntimeError):
    """Equivalence-class enumeration would exceed the configured budget.

    Attributes
    ----------
    units : int
        Number of free orientation units in the search.
    budget : int
        Configured cap on the number of units.
    estimate : int
        Upper bound on the number of candidate graphs, the product of the
        per-unit option counts.
    """

    def __init__(self, units, budget, estimate):
        self.units = units
        self.budget = budget
        self.estimate = estimate
        super().__init__(
            f"enumeration needs {units} free orientation units (budget {budget}); "
            f"up to {estimate} candidate graphs"
        )


class ConvergenceError(RuntimeError):
    """A deepening run did not stabilise before its iteration cap.

    The last computed window is kept on ``partial`` and the depth reached on
    ``depth``.
    """

    def __init__(self, message, partial=None, depth=None):
        super().__init__(message)
        self.partial = partial
        self.depth = depth


class InvariantViolation(RuntimeError):
    """An internal cross-check between two independent constructions failed."""
