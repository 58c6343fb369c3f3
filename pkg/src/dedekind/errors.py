"""Exception types shared across the package."""


class PosetParseError(ValueError):
    """Raised when a poset text file is malformed."""


class BudgetExceededError(RuntimeError):
    """Raised when a counting or enumeration run exceeds its node or time budget."""


class FalsificationError(RuntimeError):
    """Raised when a structural guarantee the engine relies on fails to hold.

    This is a falsification report, not an input error: it means a counted
    object violated a property the construction promises (for example a
    layer-pivot residual that is not an antichain, or a minimal complete
    partition of the wrong size).
    """
