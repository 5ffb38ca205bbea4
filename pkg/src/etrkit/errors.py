"""Exception hierarchy for the toolkit."""


class EtrError(Exception):
    """Base class for toolkit failures."""


class CorpusError(EtrError):
    """Corpus file unreadable or too malformed to trust."""


class IndexBuildError(EtrError):
    """Inverted index construction or persistence failure."""


class TrainingError(EtrError):
    """Model training cannot proceed (empty corpus, single class, NaN input)."""


class ConfigError(EtrError):
    """Bad or incomplete pipeline configuration."""
