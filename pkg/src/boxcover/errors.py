"""Exception types shared across the package."""


class InvalidInputError(ValueError):
    """Raised when arguments violate a documented precondition."""


class NotTwoConnectedError(InvalidInputError):
    """Raised when an operation needs a 2-connected graph and the input has a bridge."""


class UnsupportedOnImplicitError(RuntimeError):
    """Raised when an operation needs a materialized graph but the level is implicit."""


class InternalConsistencyError(RuntimeError):
    """Raised when a structural invariant that must hold on valid input fails.

    Seeing this exception means a bug, not bad user input.
    """
