"""Query segmentation via an n-gram language model and Bayes-style phrase
probability, plus dynamic-programming search over split points.

A candidate phrase of 2-3 tokens is scored by posterior odds of joint vs.
independent generation with add-one smoothing: the observed (smoothed)
adjacent count is compared against the count expected if the tokens were
independent draws from the unigram distribution. When all counts are zero
the score degenerates to ~0.5.
"""

from __future__ import annotations

import json
import math
import zlib
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from .errors import TrainingError
from .text import tokenize

LM_MAGIC = b"ETRNLM1\n"

MAX_SEGMENT_LEN = 3


@dataclass
class NgramLM:
    """Raw n-gram counts for orders 1..3, within document boundaries."""

    counts: dict[int, Counter] = field(
        default_factory=lambda: {1: Counter(), 2: Counter(), 3: Counter()}
    )
    totals: dict[int, int] = field(default_factory=lambda: {1: 0, 2: 0, 3: 0})

    @property
    def vocab_size(self) -> int:
        # +1 reserves unigram mass for unseen tokens
        return len(self.counts[1]) + 1

    def unigram_prob(self, token: str) -> float:
        return (self.counts[1][(token,)] + 1.0) / (
            self.totals[1] + self.vocab_size
        )

    # -- persistence --------------------------------------------------

    def save(self, path: str | Path) -> None:
        payload = {
            "totals": {str(n): t for n, t in self.totals.items()},
            "counts": {
                str(n): {"\x1f".join(gram): c for gram, c in counter.items()}
                for n, counter in self.counts.items()
            },
        }
        blob = zlib.compress(json.dumps(payload).encode("utf-8"))
        Path(path).write_bytes(LM_MAGIC + blob)

    @classmethod
    def load(cls, path: str | Path) -> "NgramLM":
        raw = Path(path).read_bytes()
        if not raw.startswith(LM_MAGIC):
            raise TrainingError(f"{path} is not a language model file")
        payload = json.loads(zlib.decompress(raw[len(LM_MAGIC) :]))
        lm = cls()
        lm.totals = {int(n): t for n, t in payload["totals"].items()}
        lm.counts = {
            int(n): Counter(
                {tuple(key.split("\x1f")): c for key, c in table.items()}
            )
            for n, table in payload["counts"].items()
        }
        return lm


def train_lm(corpus) -> NgramLM:
    """Count unigrams through trigrams per document (no cross-document
    n-grams). *corpus* is an iterable of token lists."""
    lm = NgramLM()
    seen = False
    for doc in corpus:
        seen = True
        for n in (1, 2, 3):
            for i in range(len(doc) - n + 1):
                lm.counts[n][tuple(doc[i : i + n])] += 1
                lm.totals[n] += 1
    if not seen or lm.totals[1] == 0:
        raise TrainingError("empty corpus for language model")
    return lm


def phrase_probability(lm: NgramLM, tokens: list[str]) -> float:
    """Probability that 2-3 adjacent tokens constitute a single phrase."""
    n = len(tokens)
    if n not in (2, 3):
        raise ValueError("phrase_probability takes 2 or 3 tokens")
    observed = lm.counts[n][tuple(tokens)] + 1.0
    indep = 1.0
    for t in tokens:
        indep *= lm.unigram_prob(t)
    expected = lm.totals[n] * indep + 1.0
    return observed / (observed + expected)


@dataclass
class SegmenterConfig:
    single_token_log_score: float = math.log(0.5)
    known_entity_bonus: float = 2.0
    min_phrase_prob: float = 1e-12  # floor before taking logs


@dataclass
class Segmentation:
    segments: list[list[str]]
    score: float

    def phrases(self) -> list[str]:
        return [" ".join(seg) for seg in self.segments]


def _segment_score(
    lm: NgramLM,
    seg: list[str],
    known: set[str] | None,
    cfg: SegmenterConfig,
) -> float:
    if len(seg) == 1:
        score = cfg.single_token_log_score
    else:
        score = math.log(max(phrase_probability(lm, seg), cfg.min_phrase_prob))
    if known is not None and " ".join(seg) in known:
        score += cfg.known_entity_bonus
    return score


def segment(
    lm: NgramLM,
    query: str,
    known_entities: set[str] | None = None,
    cfg: SegmenterConfig | None = None,
) -> Segmentation:
    """Best-scoring partition of the query into segments of 1-3 tokens.

    Ties in total score break toward fewer segments. *known_entities* is
    an optional phrase dictionary whose members get a log-score bonus.
    """
    cfg = cfg or SegmenterConfig()
    tokens = tokenize(query)
    if not tokens:
        raise ValueError("query is empty after tokenization")
    known = (
        {" ".join(tokenize(p)) for p in known_entities} if known_entities else None
    )
    n = len(tokens)
    # best[i] = (score, segment_count, split) over tokens[:i]
    best: list[tuple[float, int, int] | None] = [None] * (n + 1)
    best[0] = (0.0, 0, -1)
    for i in range(1, n + 1):
        for length in range(1, min(MAX_SEGMENT_LEN, i) + 1):
            j = i - length
            prev = best[j]
            if prev is None:
                continue
            seg = tokens[j:i]
            cand = (
                prev[0] + _segment_score(lm, seg, known, cfg),
                prev[1] + 1,
                j,
            )
            cur = best[i]
            if cur is None or (cand[0], -cand[1]) > (cur[0], -cur[1]):
                best[i] = cand
    segments: list[list[str]] = []
    i = n
    while i > 0:
        _, _, j = best[i]
        segments.append(tokens[j:i])
        i = j
    segments.reverse()
    return Segmentation(segments=segments, score=best[n][0])
