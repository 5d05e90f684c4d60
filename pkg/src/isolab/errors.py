"""Exception types shared across isolab."""


class IsolabError(Exception):
    """Base class for isolab errors."""


class BudgetExceeded(IsolabError):
    """A search or construction would touch more vertices than allowed."""

    def __init__(self, budget, what="search"):
        super().__init__(f"{what} exceeded the vertex budget of {budget}")
        self.budget = budget
        self.what = what


class TooLarge(IsolabError):
    """The enumeration oracle was asked to handle too many vertices."""


class OutOfRange(IsolabError):
    """A curve was evaluated outside of its sampled range."""


class EmptyAtT(IsolabError):
    """No family member qualifies at a requested measure."""


class InvalidScaling(IsolabError):
    """Substituted size maps break a scale-separation constraint."""


class EmptyCurve(IsolabError):
    """A plot was requested without any data."""


class InvalidInput(IsolabError):
    """Malformed parameters, files or arguments."""
