"""Exception hierarchy shared by every module.

Errors split into two families so the CLI can map them onto exit codes:
``DataError`` for bad inputs (files, tokens, categories) and
``NumericError`` for failures inside the linear-algebra kernel.
"""


class WordRelError(Exception):
    """Base class for all package errors."""


class DataError(WordRelError):
    """Input data is missing, malformed or inconsistent."""


class NumericError(WordRelError):
    """A numerical routine could not produce a trustworthy result."""


class EmbeddingFormatError(DataError):
    pass


class CorpusFormatError(DataError):
    pass


class EmptyPairSet(DataError):
    pass


class UnknownCategory(DataError):
    pass


class TransformFormatError(DataError):
    pass


class OutOfVocabulary(DataError, KeyError):
    """Raised when a token has no row in an embedding table."""

    def __init__(self, token: str):
        super().__init__(token)
        self.token = token

    def __str__(self) -> str:
        return f"out of vocabulary: {self.token!r}"


class DimensionMismatch(NumericError, ValueError):
    pass


class NonFiniteValue(NumericError, ValueError):
    pass


class NotPositiveDefinite(NumericError):
    pass


class SvdNonConvergence(NumericError):
    pass
