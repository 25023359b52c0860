"""Shared exception types."""


class BudgetExceededError(Exception):
    """An enumeration or search would exceed the configured resource budget."""


class ParseError(Exception):
    """A structured input file failed to parse.

    Carries the 1-based line and column of the offending token so callers
    can point at the exact spot.
    """

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column
