"""Exception hierarchy shared across the package.

Exit-code mapping used by the CLI: usage errors -> 1, data errors -> 2,
runtime errors -> 3.
"""


class ExpertFindError(Exception):
    """Base class for all package errors."""


class ConfigError(ExpertFindError):
    """Invalid or inconsistent configuration (unknown regime, bad fusion, ...)."""


class DataError(ExpertFindError):
    """Invalid input data (corpus files, embedding files, eval files)."""


class CorpusFormatError(DataError):
    """A corpus line or record violates the corpus file contract."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        self.bare_message = message
        super().__init__(message if line is None else f"line {line}: {message}")


class DuplicateDocIdError(DataError):
    """Two corpus records share a doc_id; always fatal."""


class EmbeddingFormatError(DataError):
    """Embedding file does not match the word2vec text format."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")


class EmptyQueryError(ExpertFindError):
    """Query has no usable tokens (blank input or everything filtered)."""


class EmptyRepresentationError(EmptyQueryError):
    """No token of the text survives the model vocabulary; nothing to score."""


class NumericError(ExpertFindError):
    """Non-finite values reached a numeric kernel."""


class SolverError(ExpertFindError):
    """The exact transport solver failed to converge; never silently ignored."""


class SessionError(ExpertFindError):
    """Base class for review-session rule violations."""


class NoCandidatesError(SessionError):
    """A session cannot be opened over an empty ranking."""


class SessionCompleteError(SessionError):
    """All candidates of the session have been judged."""


class OutOfOrderVerdictError(SessionError):
    """Verdict submitted for an author other than the current candidate."""


class DuplicateVerdictError(SessionError):
    """A second verdict was submitted for an already-judged author."""
