"""Exception types shared across the package."""


class BudgetError(RuntimeError):
    """An exhaustive oracle was asked for more than its hard instance cap."""


class ParseError(ValueError):
    """Malformed edge-list input; carries the offending line number."""

    def __init__(self, lineno, message):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno
