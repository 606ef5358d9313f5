"""Exception types raised by boxcast."""


class BoxcastError(Exception):
    """Base class for every error raised by the library."""


class ParseError(BoxcastError, ValueError):
    """A CSV cell could not be read as a number."""

    def __init__(self, message, row=None, column=None):
        super().__init__(message)
        self.row = row
        self.column = column


class StructuralError(BoxcastError, ValueError):
    """The layout of an input table is wrong (column counts, headers, gaps)."""


class MonthFormatError(BoxcastError, ValueError):
    """A month label matches none of the accepted layouts."""


class DuplicateError(BoxcastError, ValueError):
    """The same (month, borough) key occurs more than once."""


class UnknownBoroughError(BoxcastError, KeyError):
    def __init__(self, missing):
        self.missing = list(missing)
        super().__init__("unknown borough(s): " + ", ".join(self.missing))

    def __str__(self):
        return self.args[0]


class InsufficientDataError(BoxcastError, ValueError):
    """Too few observations for the requested operation."""


class DegenerateSeriesError(BoxcastError, ValueError):
    """The series has zero variance where a non-zero one is required."""


class DomainError(BoxcastError, ValueError):
    """An argument lies outside the domain of the function."""


class ContractError(BoxcastError, ValueError):
    """Inputs are individually valid but inconsistent with each other."""


class NoModelError(BoxcastError, RuntimeError):
    """Every candidate model failed to fit."""
