"""Exception hierarchy shared by every module."""


class BhdpcError(Exception):
    """Base class for all library errors."""


class InputError(BhdpcError, ValueError):
    """Malformed vertex, edge, fault set or terminal tuple."""


class NotAdjacent(InputError):
    pass


class FaultBudgetExceeded(BhdpcError):
    """The instance has more faulty edges than the construction tolerates."""


class BudgetExceeded(BhdpcError):
    """A search ran out of node expansions before deciding."""


class NotFound(BhdpcError):
    """A complete search finished without finding the requested object."""


class InternalError(BhdpcError):
    """A construction reached a dead end that the theory rules out.

    ``trace`` carries whatever plan information was collected before the
    failure so the defect can be reproduced.
    """

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace
