"""Exception hierarchy shared by every module."""


class GPPursuitError(Exception):
    """Base class for all errors raised by the package."""


class ParamError(GPPursuitError, ValueError):
    """Invalid graph or solver parameters."""


class FamilyError(GPPursuitError):
    """Operation needs a graph from the n = 7k/i family."""


class TurnError(GPPursuitError):
    """Move generation requested for the side that is not to move."""


class TrappedError(GPPursuitError):
    """The robber is already trapped; no safe move exists."""


class StrategyError(GPPursuitError):
    """A state fell outside the cases the evasion strategy covers."""


class BudgetError(GPPursuitError):
    """Solver state space exceeds the configured memory budget."""


class ExceedsMax(GPPursuitError):
    """Even the maximum number of cops cannot force a capture."""
