"""Ontological and lexical binary clues.

The ontological flag fires when one of the entity's search hits has a
title exactly matching the entity and that title is typed Company in the
ontology file; Organisation alone never counts. The lexical flag fires
when any entity term is an agent noun from the shipped lexicon.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .corpus_index import SearchHit
from .errors import ConfigError
from .text import normalize_title, tokenize

COMPANY_CLASS = "company"


@dataclass
class FeatureFlags:
    ont: bool = False
    lex: bool = False


class OntologyStore:
    """Normalized resource title -> set of ontology class names."""

    def __init__(self, mapping: dict[str, set[str]] | None = None):
        self._map = mapping or {}

    def __len__(self) -> int:
        return len(self._map)

    def classes(self, title: str) -> set[str]:
        return self._map.get(normalize_title(title), set())

    def add(self, title: str, class_name: str) -> None:
        self._map.setdefault(normalize_title(title), set()).add(
            class_name.strip().lower()
        )


def load_ontology(path: str | Path) -> OntologyStore:
    """Load a two-column TSV of resource_title<TAB>class_name lines.

    Malformed lines are skipped; an unreadable file is fatal.
    """
    store = OntologyStore()
    try:
        fh = open(path, encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read ontology file {path}: {exc}") from exc
    with fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) != 2 or not parts[0].strip() or not parts[1].strip():
                continue
            store.add(parts[0], parts[1])
    return store


def ontological_flag(
    store: OntologyStore,
    entity: str,
    hits: list[SearchHit],
    titles: dict[int, str],
) -> bool:
    """True iff a hit's title equals the entity and is typed Company."""
    target = normalize_title(entity)
    if not target:
        return False
    for hit in hits:
        title = titles.get(hit.doc_id, "")
        if normalize_title(title) == target and COMPANY_CLASS in store.classes(title):
            return True
    return False


class AgentNounLexicon:
    """Set of lowercase agent-noun lemmas."""

    def __init__(self, lemmas: set[str]):
        self.lemmas = lemmas

    def __len__(self) -> int:
        return len(self.lemmas)

    def __contains__(self, lemma: str) -> bool:
        return lemma.lower() in self.lemmas


def load_lexicon(path: str | Path) -> AgentNounLexicon:
    """Load one lemma per line; empty file is fatal."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read lexicon file {path}: {exc}") from exc
    lemmas = {line.strip().lower() for line in text.splitlines() if line.strip()}
    if not lemmas:
        raise ConfigError(f"lexicon file {path} is empty")
    return AgentNounLexicon(lemmas)


def lexical_flag(lexicon: AgentNounLexicon, entity: str) -> bool:
    """True iff any entity term is in the agent-noun lexicon."""
    terms = tokenize(entity)
    if not terms:
        raise ValueError("entity is empty after normalization")
    return any(t in lexicon for t in terms)
