"""Skip-gram word embeddings over a domain corpus and entity synonymy vectors.

Training is skip-gram with negative sampling. Single-worker mode is fully
deterministic given a seed (required by the test suite); multi-worker mode
does hogwild-style unsynchronized updates over shared weight matrices and
is documented as non-deterministic.
"""

from __future__ import annotations

import json
import threading
from collections import Counter
from dataclasses import dataclass, asdict
from pathlib import Path

import numpy as np

from .errors import TrainingError
from .text import tokenize

MODEL_MAGIC = b"ETREMB1\n"


@dataclass
class EmbeddingParams:
    min_count: int = 50
    epochs: int = 1
    dim: int = 300
    window: int = 5
    negatives: int = 5
    initial_lr: float = 0.025
    seed: int = 1

    def __post_init__(self):
        if self.dim < 2:
            raise ValueError("dim must be >= 2")
        if self.min_count < 1:
            raise ValueError("min_count must be >= 1")
        if self.epochs < 1 or self.window < 1 or self.negatives < 1:
            raise ValueError("epochs, window, negatives must be >= 1")
        if self.initial_lr <= 0:
            raise ValueError("initial_lr must be positive")


@dataclass
class SynonymyVector:
    entity: str
    terms: Counter


class EmbeddingModel:
    """Trained vocabulary plus a |vocab| x dim vector matrix."""

    def __init__(self, vocab: dict[str, int], vectors: np.ndarray, params: EmbeddingParams):
        self.vocab = vocab
        self.index_to_token = [None] * len(vocab)
        for tok, i in vocab.items():
            self.index_to_token[i] = tok
        self.vectors = vectors
        self.params = params
        self._unit: np.ndarray | None = None

    @property
    def unit_vectors(self) -> np.ndarray:
        if self._unit is None:
            norms = np.linalg.norm(self.vectors, axis=1, keepdims=True)
            norms[norms == 0] = 1.0
            self._unit = self.vectors / norms
        return self._unit

    # -- persistence --------------------------------------------------

    def save(self, path: str | Path) -> None:
        path = Path(path)
        header = {
            "dim": int(self.vectors.shape[1]),
            "vocab_size": len(self.vocab),
            "params": asdict(self.params),
            "vocab": self.index_to_token,
        }
        with open(path, "wb") as fh:
            fh.write(MODEL_MAGIC)
            fh.write(json.dumps(header).encode("utf-8") + b"\n")
            fh.write(self.vectors.astype("<f4").tobytes())

    @classmethod
    def load(cls, path: str | Path) -> "EmbeddingModel":
        with open(path, "rb") as fh:
            magic = fh.read(len(MODEL_MAGIC))
            if magic != MODEL_MAGIC:
                raise TrainingError(f"{path} is not an embedding model file")
            header = json.loads(fh.readline().decode("utf-8"))
            raw = fh.read()
        vectors = np.frombuffer(raw, dtype="<f4").reshape(
            header["vocab_size"], header["dim"]
        ).copy()
        vocab = {tok: i for i, tok in enumerate(header["vocab"])}
        params = EmbeddingParams(**header["params"])
        return cls(vocab, vectors, params)

    def export_text(self, path: str | Path) -> None:
        """Plain-text interchange: one token plus its floats per line."""
        with open(path, "w", encoding="utf-8") as fh:
            for i, tok in enumerate(self.index_to_token):
                vec = " ".join(f"{x:.6g}" for x in self.vectors[i])
                fh.write(f"{tok} {vec}\n")


def _build_vocab(corpus, min_count: int) -> tuple[dict[str, int], np.ndarray]:
    counts: Counter = Counter()
    n_sentences = 0
    for sentence in corpus:
        n_sentences += 1
        counts.update(sentence)
    if n_sentences == 0 or not counts:
        raise TrainingError("empty training corpus")
    kept = sorted(
        ((tok, c) for tok, c in counts.items() if c >= min_count),
        key=lambda tc: (-tc[1], tc[0]),
    )
    if not kept:
        raise TrainingError(f"no token reaches min_count={min_count}")
    vocab = {tok: i for i, (tok, _) in enumerate(kept)}
    freqs = np.array([c for _, c in kept], dtype=np.float64)
    return vocab, freqs


def _sigmoid(x: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(-np.clip(x, -30.0, 30.0)))


def _train_sentences(
    sentences: list[np.ndarray],
    syn0: np.ndarray,
    syn1: np.ndarray,
    noise_cdf: np.ndarray,
    params: EmbeddingParams,
    rng: np.random.Generator,
    lr_state: dict,
) -> None:
    neg = params.negatives
    window = params.window
    lr_span = params.initial_lr - params.initial_lr / 10.0
    total = lr_state["total_pairs"]
    labels = np.zeros(neg + 1, dtype=np.float64)
    labels[0] = 1.0
    for sent in sentences:
        n = len(sent)
        for pos in range(n):
            center = sent[pos]
            lo = max(0, pos - window)
            hi = min(n, pos + window + 1)
            for cpos in range(lo, hi):
                if cpos == pos:
                    continue
                lr = params.initial_lr - lr_span * (lr_state["done"] / max(total, 1))
                lr_state["done"] += 1
                context = sent[cpos]
                targets = np.empty(neg + 1, dtype=np.int64)
                targets[0] = context
                targets[1:] = np.searchsorted(noise_cdf, rng.random(neg))
                rows = syn1[targets]
                g = (labels - _sigmoid(rows @ syn0[center])) * lr
                grad0 = g @ rows
                syn1[targets] += np.outer(g, syn0[center])
                syn0[center] += grad0


def train_embeddings(
    corpus, params: EmbeddingParams | None = None, workers: int = 1
) -> EmbeddingModel:
    """Train skip-gram embeddings on a re-iterable corpus of token lists.

    The learning rate decays linearly from initial_lr to initial_lr/10
    over all training pairs (across epochs).
    """
    params = params or EmbeddingParams()
    vocab, freqs = _build_vocab(corpus, params.min_count)
    rng = np.random.default_rng(params.seed)
    dim = params.dim
    syn0 = (rng.random((len(vocab), dim)) - 0.5) / dim
    syn1 = np.zeros((len(vocab), dim), dtype=np.float64)

    noise = freqs ** 0.75
    noise_cdf = np.cumsum(noise / noise.sum())
    noise_cdf[-1] = 1.0

    encoded = []
    total_pairs = 0
    for sentence in corpus:
        ids = np.array([vocab[t] for t in sentence if t in vocab], dtype=np.int64)
        if len(ids) < 2:
            continue
        encoded.append(ids)
        n = len(ids)
        for pos in range(n):
            lo = max(0, pos - params.window)
            hi = min(n, pos + params.window + 1)
            total_pairs += hi - lo - 1
    if total_pairs == 0:
        raise TrainingError("corpus yields no training pairs after vocab pruning")

    lr_state = {"done": 0, "total_pairs": total_pairs * params.epochs}
    if workers <= 1:
        for _ in range(params.epochs):
            _train_sentences(encoded, syn0, syn1, noise_cdf, params, rng, lr_state)
    else:
        # hogwild: shard sentences across threads, updates unsynchronized
        shards = [encoded[i::workers] for i in range(workers)]
        for _ in range(params.epochs):
            threads = [
                threading.Thread(
                    target=_train_sentences,
                    args=(
                        shard,
                        syn0,
                        syn1,
                        noise_cdf,
                        params,
                        np.random.default_rng(params.seed + 1 + w),
                        lr_state,
                    ),
                )
                for w, shard in enumerate(shards)
            ]
            for t in threads:
                t.start()
            for t in threads:
                t.join()

    if not np.isfinite(syn0).all():
        raise TrainingError("training diverged: non-finite vectors")
    return EmbeddingModel(vocab, syn0, params)


def nearest_neighbors(
    model: EmbeddingModel, token: str, k: int
) -> list[tuple[str, float]]:
    """Top-k vocab tokens by cosine similarity to *token* (excluding it)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    idx = model.vocab.get(token)
    if idx is None:
        return []
    sims = model.unit_vectors @ model.unit_vectors[idx]
    return _top_neighbors(model, sims, exclude={idx}, k=k)


def _top_neighbors(
    model: EmbeddingModel, sims: np.ndarray, exclude: set[int], k: int
) -> list[tuple[str, float]]:
    order = np.argsort(-sims, kind="stable")  # ties fall back to vocab order
    out = []
    for i in order:
        if int(i) in exclude:
            continue
        out.append((model.index_to_token[int(i)], float(sims[i])))
        if len(out) == k:
            break
    return out


def build_synonymy_vector(
    model: EmbeddingModel, entity: str, k: int = 10
) -> SynonymyVector:
    """Synonymy vector: top-k cosine neighbors of the mean of the entity's
    in-vocab token vectors, each with count 1."""
    if k < 1:
        raise ValueError("k must be >= 1")
    entity_tokens = tokenize(entity)
    if not entity_tokens:
        raise ValueError("entity is empty after normalization")
    in_vocab = [model.vocab[t] for t in entity_tokens if t in model.vocab]
    if not in_vocab:
        return SynonymyVector(entity=entity, terms=Counter())
    mean = model.unit_vectors[in_vocab].mean(axis=0)
    norm = np.linalg.norm(mean)
    if norm == 0:
        return SynonymyVector(entity=entity, terms=Counter())
    sims = model.unit_vectors @ (mean / norm)
    exclude = {model.vocab[t] for t in entity_tokens if t in model.vocab}
    neighbors = _top_neighbors(model, sims, exclude=exclude, k=k)
    return SynonymyVector(entity=entity, terms=Counter(tok for tok, _ in neighbors))
