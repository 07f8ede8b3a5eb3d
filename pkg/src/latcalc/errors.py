"""Exception types shared across the package."""


class InputError(ValueError):
    """Invalid argument: wrong shape, mismatched spaces, bad parameters."""


class NumericError(RuntimeError):
    """A numerical routine failed to converge.

    Carries the last bracket or iterate so the failure can be inspected.
    """

    def __init__(self, message: str, last_bracket=None):
        super().__init__(message)
        self.last_bracket = last_bracket
