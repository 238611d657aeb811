"""Exception types shared across the toolkit."""


class NearOptError(Exception):
    """Base class for all errors raised by this package."""


# --- linear-program construction and evaluation ---

class DuplicateNameError(NearOptError):
    """A variable or constraint name is used more than once."""


class UnknownVariableError(NearOptError):
    """An expression references a variable the program does not define."""


class InvalidBoundError(NearOptError):
    """A variable bound or constraint right-hand side is malformed."""


class MissingVariableError(NearOptError):
    """A point does not assign a value to every required variable."""


class NumericalFailureError(NearOptError):
    """The solver could not make progress within its numerical tolerances."""


class TooLargeError(NearOptError):
    """Problem exceeds the combinatorial guard of the enumeration oracle."""


# --- epsilon-optimal spaces ---

class NegativeEpsilonError(NearOptError):
    """Suboptimality coefficients must be nonnegative."""


class NotOptimalError(NearOptError):
    """The supplied solution is not an optimal solution of the base program."""


class NegativeOptimumError(NearOptError):
    """Relative cost budgets are undefined for negative optimal values."""


# --- necessary conditions ---

class InvalidDirectionError(NearOptError):
    """Direction weights must be nonnegative with at least one positive entry."""


class UnboundedDirectionError(NearOptError):
    """The weighted sum is unbounded below over the epsilon-optimal space."""


class EpsilonSpaceInfeasibleError(NearOptError):
    """The budget-augmented program is numerically infeasible."""


class IncomparableDirectionsError(NearOptError):
    """Implication is only defined between proportional directions."""


# --- capacity-expansion model ---

class InvalidConfigError(NearOptError):
    """A scenario violates a modelling rule; the message names the rule."""


class UnknownNodeError(NearOptError):
    """A direction or line refers to a node id absent from the network."""


class UnknownLineError(NearOptError):
    """A direction refers to a line id absent from the network."""


class UnknownTechError(NearOptError):
    """A direction refers to a technology id absent from the network."""


class EmptySubsetError(NearOptError):
    """A technology subset for a direction must not be empty."""
