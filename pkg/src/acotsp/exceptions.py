"""Exception hierarchy shared by the parser, engine, oracle and CLI."""


class AcoError(Exception):
    """Base class for every error raised by :mod:`acotsp`."""

    kind = "error"


class InvalidArgumentError(AcoError, ValueError):
    kind = "invalid-argument"


class ParseError(AcoError, ValueError):
    """A TSPLIB document could not be read.

    ``line`` is the 1-based line number of the offending input, when known.
    """

    kind = "parse"

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class MalformedHeaderError(ParseError):
    kind = "malformed-header"


class TruncatedSectionError(ParseError):
    kind = "truncated-section"


class UnsupportedFormatError(AcoError, ValueError):
    kind = "unsupported-format"


class SizeLimitError(AcoError, ValueError):
    kind = "size-limit"


class InvariantViolationError(AcoError, RuntimeError):
    """Internal consistency check failed; indicates a bug, not bad input."""

    kind = "invariant-violation"
