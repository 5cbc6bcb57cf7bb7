"""Exception hierarchy for network validation, solving, and rewiring analysis."""


class FJInfluenceError(Exception):
    """Base class for all library errors."""


# -- network construction -----------------------------------------------------

class NetworkValidationError(FJInfluenceError):
    """Invalid network data."""


class RowNotStochastic(NetworkValidationError):
    pass


class NegativeWeight(NetworkValidationError):
    pass


class StubbornnessOutOfRange(NetworkValidationError):
    pass


class DuplicateEdge(NetworkValidationError):
    pass


# -- graph analysis ------------------------------------------------------------

class CycleBudgetExceeded(FJInfluenceError):
    pass


class NotStronglyConnected(FJInfluenceError):
    pass


# -- dynamics ------------------------------------------------------------------

class DimensionMismatch(FJInfluenceError):
    pass


class SingularSystem(FJInfluenceError):
    pass


class ConvergenceFailure(FJInfluenceError):
    """Fixed-point iteration hit the step cap without meeting the residual."""


class ConsistencyError(FJInfluenceError):
    """Two independent evaluations of the same quantity disagree."""


# -- signal-flow graph ---------------------------------------------------------

class WrongStubbornCount(FJInfluenceError):
    pass


class UnitSelfLoop(FJInfluenceError):
    pass


class NotAnIndexNode(FJInfluenceError):
    pass


class DivergentLoop(FJInfluenceError):
    pass


# -- edge modifications --------------------------------------------------------

class InvalidModification(FJInfluenceError):
    pass


class EdgeAlreadyExists(InvalidModification):
    pass


class EdgeMissing(InvalidModification):
    pass


class WeightOutOfRange(InvalidModification):
    pass


class NotPermissible(FJInfluenceError):
    """The rewiring leaves no node that lies on every cycle."""


class PreconditionViolated(FJInfluenceError):
    pass


# -- CLI / IO -------------------------------------------------------------------

class UsageError(FJInfluenceError):
    pass


class DataError(FJInfluenceError):
    """Malformed input file."""
