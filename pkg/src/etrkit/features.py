"""Entity-word feature matrix: tf-idf over merged vectors plus two
trailing binary columns (ontological and lexical flags).

tf-idf uses the smoothed variant ln((1+N)/(1+df)) + 1 with per-row L2
normalization of the tf-idf block; a raw ln(N/df) variant is available via
``idf_mode="raw"``. The flag columns are appended after normalization so
their scale (1.0) is commensurate with unit-norm rows.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .context_vectors import ContextVector
from .embedding import SynonymyVector
from .knowledge import FeatureFlags


def merge_vectors(x: ContextVector, s: SynonymyVector) -> Counter:
    """Counted union of an entity's contextual and synonymy terms."""
    if x.entity != s.entity:
        raise ValueError(
            f"vectors belong to different entities: {x.entity!r} vs {s.entity!r}"
        )
    return x.terms + s.terms


@dataclass
class Vocabulary:
    index: dict[str, int]
    document_frequency: dict[str, int]
    n_documents: int

    def __len__(self) -> int:
        return len(self.index)


def fit_vocabulary(documents: list[Counter], min_df: int = 1) -> Vocabulary:
    """Fit a lexicographically ordered vocabulary over token multisets."""
    if not documents:
        raise ValueError("need at least one document")
    df: Counter = Counter()
    for doc in documents:
        df.update(set(doc))
    if not df:
        raise ValueError("all documents are empty")
    tokens = sorted(t for t, c in df.items() if c >= min_df)
    return Vocabulary(
        index={t: i for i, t in enumerate(tokens)},
        document_frequency={t: df[t] for t in tokens},
        n_documents=len(documents),
    )


@dataclass
class FeatureMatrix:
    data: sp.csr_matrix  # N x (V + 2); last two columns are ont, lex
    n_vocab: int

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape


def _idf(vocab: Vocabulary, mode: str) -> np.ndarray:
    n = vocab.n_documents
    out = np.zeros(len(vocab))
    for tok, j in vocab.index.items():
        df = vocab.document_frequency[tok]
        if mode == "smooth":
            out[j] = math.log((1.0 + n) / (1.0 + df)) + 1.0
        elif mode == "raw":
            out[j] = math.log(n / df) if df else 0.0
        else:
            raise ValueError(f"unknown idf mode {mode!r}")
    return out


def transform(
    documents: list[Counter],
    vocab: Vocabulary,
    flags: list[FeatureFlags],
    idf_mode: str = "smooth",
) -> FeatureMatrix:
    """tf-idf rows (L2-normalized) with the two flag columns appended.

    Tokens unseen at fit time are ignored. Row order follows input order.
    """
    if len(documents) != len(flags):
        raise ValueError(
            f"documents/flags length mismatch: {len(documents)} vs {len(flags)}"
        )
    idf = _idf(vocab, idf_mode)
    rows, cols, vals = [], [], []
    for i, doc in enumerate(documents):
        entries = [
            (vocab.index[t], c * idf[vocab.index[t]])
            for t, c in doc.items()
            if t in vocab.index
        ]
        norm = math.sqrt(sum(v * v for _, v in entries))
        if norm > 0:
            for j, v in sorted(entries):
                rows.append(i)
                cols.append(j)
                vals.append(v / norm)
    v_cols = len(vocab)
    tfidf = sp.csr_matrix(
        (vals, (rows, cols)), shape=(len(documents), v_cols), dtype=np.float64
    )
    flag_block = sp.csr_matrix(
        np.array([[float(f.ont), float(f.lex)] for f in flags], dtype=np.float64)
    )
    data = sp.hstack([tfidf, flag_block], format="csr")
    return FeatureMatrix(data=data, n_vocab=v_cols)


def export_matrix(matrix: FeatureMatrix, path) -> None:
    """Debug export: header line then one sparse row per line as
    ``col:value`` pairs."""
    m = matrix.data.tocsr()
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# rows={m.shape[0]} cols={m.shape[1]} flag_cols=2\n")
        for i in range(m.shape[0]):
            row = m.getrow(i)
            pairs = " ".join(
                f"{j}:{v:.9g}" for j, v in zip(row.indices, row.data)
            )
            fh.write(pairs + "\n")
