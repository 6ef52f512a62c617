"""Exception hierarchy. Every domain error derives from ShiftLabError."""


class ShiftLabError(Exception):
    """Base class for all domain errors raised by shiftlab."""


class EmptyShift(ShiftLabError):
    pass


class BudgetExceeded(ShiftLabError):
    pass


class StateBlowup(ShiftLabError):
    pass


class AlphabetBlowup(ShiftLabError):
    pass


class NotRightResolving(ShiftLabError):
    pass


class NotIrreducible(ShiftLabError):
    pass


class NoEdges(ShiftLabError):
    pass


class UndefinedWindow(ShiftLabError):
    pass


class ZeroEntropy(ShiftLabError):
    pass


class ZeroIndependenceEntropy(ShiftLabError):
    pass


class Infeasible(ShiftLabError):
    pass


class OverlapUnverified(ShiftLabError):
    pass


class InternalContradiction(ShiftLabError):
    """A guarantee that the construction proves could not be realized.

    This signals a bug, not bad input.
    """
