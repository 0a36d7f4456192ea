"""Domain errors carrying a stable machine-readable code for the CLI."""


class StackedError(ValueError):
    """Raised on invalid inputs or geometric preconditions that do not hold.

    ``code`` is a short snake_case identifier that stays stable across
    releases; ``str(exc)`` carries the human-readable message.
    """

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code
