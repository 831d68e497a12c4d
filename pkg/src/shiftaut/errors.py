"""Exception hierarchy shared by all modules."""


class ShiftAutError(Exception):
    """Base class for every error raised by the toolkit."""


class GroupError(ShiftAutError, ValueError):
    """Malformed group data or an element that does not belong to the group."""


class BudgetExceeded(ShiftAutError, RuntimeError):
    """An enumeration would exceed its caller-supplied resource cap."""

    def __init__(self, what: str, needed, budget):
        super().__init__(f"{what}: needs {needed}, budget is {budget}")
        self.what = what
        self.needed = needed
        self.budget = budget


class PatternConflict(ShiftAutError, ValueError):
    """Two patterns disagree at a common support point."""

    def __init__(self, point, left, right):
        super().__init__(f"patterns disagree at {point!r}: {left!r} != {right!r}")
        self.point = point
        self.left = left
        self.right = right


class SupportError(ShiftAutError, ValueError):
    """A pattern or window does not have the support an operation requires."""


class NotAdmissible(ShiftAutError, ValueError):
    """A pattern is not in the language of the subshift."""


class NotAMarker(ShiftAutError, ValueError):
    """A pattern overlaps its own translate by some element outside Fix."""

    def __init__(self, g, message: str | None = None):
        super().__init__(message or f"pattern is {g!r}-overlapping")
        self.g = g


class WindowEdge(ShiftAutError, LookupError):
    """A belt or rule evaluation needed a cell outside the window."""

    def __init__(self, position):
        super().__init__(f"cell {position!r} lies outside the window")
        self.position = position


class ContractViolation(ShiftAutError, ValueError):
    """A supplied map breaks a documented precondition; carries a witness."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness
