"""Exception types shared across the package."""


class RedclustError(Exception):
    """Base class for every error raised by this package."""


class InvalidInputError(RedclustError):
    """Input data violates a precondition (shape, finiteness, schema match)."""


class InvalidConfigError(RedclustError):
    """A parameter is outside its documented valid range."""


class DegenerateInputError(RedclustError):
    """Input is too degenerate for the operation (rank-deficient, single row)."""


class ConvergenceError(RedclustError):
    """An iteration hit its hard cap without converging; the message names the cap."""


class SchemaError(RedclustError):
    """A dataset file disagrees with its declared schema."""


class DatasetParseError(RedclustError):
    """A dataset file could not be parsed; carries the offending location."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", column {column})" if column is not None else ")")
        super().__init__(message + where)


class OutputError(RedclustError):
    """An output location could not be written; the message names the path."""
