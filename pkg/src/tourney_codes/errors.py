"""Exception types shared across the package."""


class InputError(ValueError):
    """Raised when user-supplied data violates a documented precondition."""


class InternalConsistencyError(RuntimeError):
    """Raised when two routes that must agree disagree.

    This always signals a bug or a tolerance failure, never bad input.
    """
