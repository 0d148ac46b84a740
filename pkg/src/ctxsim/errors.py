"""Exception types shared across the toolkit."""

from __future__ import annotations


class CtxsimError(Exception):
    """Base class for all toolkit errors."""


class DatasetFormatError(CtxsimError):
    """Malformed dataset file. Carries the 1-based line number when known."""

    def __init__(self, message: str, line_no: int | None = None):
        self.line_no = line_no
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)


class AmbiguityError(DatasetFormatError):
    """A target word is marked zero or more than one time in a context."""


class SurfaceMismatchError(DatasetFormatError):
    """A marked surface does not match the declared target word."""


class ValidationError(CtxsimError):
    """A precondition on caller-supplied structured data does not hold."""


class StoreFormatError(CtxsimError):
    """Malformed embedding store input (bad line, duplicate key, shape drift)."""

    def __init__(self, message: str, line_no: int | None = None):
        self.line_no = line_no
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)


class NotFoundError(CtxsimError, KeyError):
    """A requested key or label is absent."""

    def __str__(self) -> str:  # KeyError quotes its arg; keep the message readable
        return Exception.__str__(self)


class RecordNotFound(NotFoundError):
    """Embedding store lookup miss. Carries the full key."""

    def __init__(self, key):
        self.key = key
        super().__init__(
            f"no embedding record for item_id={key[0]!r} context={key[1]} "
            f"word={key[2]} model={key[3]!r}"
        )


class ConfigError(CtxsimError):
    """Invalid combination config, scheme string, or sweep entry."""


class LayerRangeError(ConfigError):
    """A layer scheme asks for more layers than a stack provides."""


class DegenerateVectorError(CtxsimError):
    """Cosine input with zero norm; names the offending side."""


class DegenerateInputError(CtxsimError):
    """Correlation input with no variation (or all zeros, uncentered)."""


class CoverageError(CtxsimError):
    """Embedding records demanded by a run are missing. Carries all gaps."""

    def __init__(self, missing):
        self.missing = tuple(missing)
        listing = "\n".join(f"  {k}" for k in self.missing)
        super().__init__(
            f"{len(self.missing)} embedding record(s) missing:\n{listing}"
        )
