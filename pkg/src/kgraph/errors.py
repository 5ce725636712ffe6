"""Exception hierarchy.

The CLI maps ``DomainError`` subclasses to exit code 2 and
``ResourceError`` subclasses to exit code 3.
"""


class KGraphError(Exception):
    """Base class for all package errors."""


class DomainError(KGraphError):
    """Input outside the mathematical domain of an operation."""


class StructureError(DomainError):
    """Malformed combinatorial data (e.g. a theta entry that is not a bijection)."""


class CubicViolationError(DomainError):
    """Theta family fails the cubic condition; ``violations`` lists every failure."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__(f"cubic condition fails on {len(self.violations)} edge triple(s)")


class DegreeError(DomainError):
    pass


class ShapeError(DomainError):
    """A term does not match the shape required by a closed-form averaging formula."""


class GraphMismatchError(DomainError):
    pass


class UnsupportedError(DomainError):
    """Operation needs a hypothesis (e.g. little pull-back) the graph does not satisfy."""


class ModeError(DomainError):
    """Exact mode was asked for an irrational value."""


class ResourceError(KGraphError):
    """A configured size cap would be exceeded."""


class BudgetError(ResourceError):
    def __init__(self, needed, budget, partial=None):
        self.needed = needed
        self.budget = budget
        self.partial = partial
        super().__init__(f"term budget exceeded: {needed} > {budget}")


class CapError(ResourceError):
    pass
