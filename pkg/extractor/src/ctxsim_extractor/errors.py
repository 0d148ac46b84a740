"""Extractor error types."""


class ExtractorError(Exception):
    pass


class DatasetError(ExtractorError):
    """Malformed dataset file."""


class AlignmentError(ExtractorError):
    """A target span maps to no sub-token. Carries item and word when known."""

    def __init__(self, message, item_id=None, word_no=None):
        self.item_id = item_id
        self.word_no = word_no
        super().__init__(message)


class UnsupportedLanguageError(ExtractorError):
    """NER requested for a language without an available model."""


class NerBackendUnavailable(ExtractorError):
    """No NER backend importable in this environment."""


class ReplacementError(ExtractorError):
    """Entity spans unusable (overlapping or stale)."""
