"""Exception types shared across the package."""


class DegenerateBand(ValueError):
    """Raised when an operation needs a finite slope band (0 < alpha < beta < inf)."""


class EmptyFeasible(RuntimeError):
    """Raised when no dominating point pair exists inside a search domain."""


class SizeLimit(ValueError):
    """Raised when a quadratic-time oracle is asked to handle too many points."""


class WrongCase(ValueError):
    """Raised when an experiment is run outside its growth-regime precondition."""


class HypothesisNotMet(ValueError):
    """Raised when a check is invoked with its hypothesis violated (e.g. Z = 0)."""
