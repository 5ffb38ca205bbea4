"""Contextual distributional vectors for query entities.

For an entity, the top-n index hits contribute all content words within a
token window around each occurrence of the entity, plus the hits' category
words. Stopwords and the entity's own tokens never enter the vector.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from .corpus_index import Index, IndexConfig, SearchHit
from .stopwords import STOPWORDS
from .text import tokenize


@dataclass
class ContextConfig:
    window: int = 10
    include_categories: bool = True
    stopword_list: frozenset[str] = field(default_factory=lambda: STOPWORDS)

    def __post_init__(self):
        if self.window < 1:
            raise ValueError("window must be >= 1")


@dataclass
class ContextVector:
    entity: str
    terms: Counter


def _phrase_occurrences(tokens: list[str], phrase: list[str]) -> list[int]:
    n, m = len(tokens), len(phrase)
    return [i for i in range(n - m + 1) if tokens[i : i + m] == phrase]


def _window_terms(
    tokens: list[str], spans: list[tuple[int, int]], window: int
) -> Counter:
    """Tokens within *window* positions on each side of each span."""
    out: Counter = Counter()
    for start, end in spans:
        out.update(tokens[max(0, start - window) : start])
        out.update(tokens[end : end + window])
    return out


def hit_context_terms(
    hit: SearchHit, entity_tokens: list[str], ccfg: ContextConfig
) -> Counter:
    """Window terms plus category terms contributed by a single hit."""
    terms: Counter = Counter()
    if hit.phrase_match:
        spans = [
            (p, p + len(entity_tokens))
            for p in _phrase_occurrences(hit.content_tokens, entity_tokens)
        ]
        terms += _window_terms(hit.content_tokens, spans, ccfg.window)
    else:
        # AND-fallback hit: window around each individual entity-token occurrence
        for tok in entity_tokens:
            spans = [
                (i, i + 1) for i, t in enumerate(hit.content_tokens) if t == tok
            ]
            terms += _window_terms(hit.content_tokens, spans, ccfg.window)
    if ccfg.include_categories:
        terms.update(hit.category_tokens)
    return terms


def build_context_vector(
    index: Index,
    entity: str,
    icfg: IndexConfig | None = None,
    ccfg: ContextConfig | None = None,
) -> ContextVector:
    """Build the entity's contextual vector from its top-n search hits.

    Zero hits yield an empty vector, not an error; the entity is then
    classified downstream from its other features.
    """
    ccfg = ccfg or ContextConfig()
    entity_tokens = tokenize(entity)
    if not entity_tokens:
        raise ValueError("entity is empty after normalization")
    hits = index.search(entity, icfg)
    terms: Counter = Counter()
    for hit in hits:
        terms += hit_context_terms(hit, entity_tokens, ccfg)
    excluded = set(entity_tokens) | ccfg.stopword_list
    for tok in list(terms):
        if tok in excluded:
            del terms[tok]
    return ContextVector(entity=entity, terms=terms)


def batch_build_vectors(
    index: Index,
    entities_path: str | Path,
    out_path: str | Path,
    icfg: IndexConfig | None = None,
    ccfg: ContextConfig | None = None,
) -> int:
    """Batch mode: read one entity per line (an optional tab-separated
    label is ignored) and write line-delimited {entity, terms} records.
    Returns the number of records written."""
    written = 0
    with open(entities_path, encoding="utf-8") as src, open(
        out_path, "w", encoding="utf-8"
    ) as dst:
        for line in src:
            entity = line.split("\t")[0].strip()
            if not entity:
                continue
            vec = build_context_vector(index, entity, icfg, ccfg)
            dst.write(
                json.dumps({"entity": entity, "terms": dict(vec.terms)}) + "\n"
            )
            written += 1
    return written

