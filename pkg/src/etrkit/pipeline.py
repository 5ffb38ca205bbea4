"""End-to-end entity typing pipeline.

Bundles the index, embedding model, knowledge stores, fitted vocabulary,
and trained classifier; classifies single entities (offline batch and
online request paths share this code) and types query segments.
"""

from __future__ import annotations

import json
import hashlib
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from . import classifier as svm
from .classifier import ClassifierModel, TrainConfig
from .context_vectors import ContextConfig, build_context_vector
from .corpus_index import Index, IndexConfig
from .embedding import EmbeddingModel, build_synonymy_vector
from .errors import ConfigError
from .evaluation import VARIANTS, FeatureExtractor
from .features import FeatureFlags, Vocabulary, fit_vocabulary, transform
from .knowledge import (
    AgentNounLexicon,
    OntologyStore,
    lexical_flag,
    ontological_flag,
)
from .query_parser import NgramLM, SegmenterConfig, segment

VOCAB_FILENAME = "vocab.json"
MODEL_FILENAME = "model.bin"
META_FILENAME = "meta.json"


@dataclass
class Resources:
    """Feature resources shared by training, evaluation, and serving."""

    index: Index
    icfg: IndexConfig = field(default_factory=IndexConfig)
    ccfg: ContextConfig = field(default_factory=ContextConfig)
    embedding: EmbeddingModel | None = None
    synonym_k: int = 10
    ontology: OntologyStore | None = None
    lexicon: AgentNounLexicon | None = None
    _titles: dict[int, str] | None = field(default=None, repr=False)

    @property
    def titles(self) -> dict[int, str]:
        if self._titles is None:
            self._titles = self.index.titles()
        return self._titles

    def context_terms(self, entity: str) -> Counter:
        return build_context_vector(self.index, entity, self.icfg, self.ccfg).terms

    def synonymy_terms(self, entity: str) -> Counter:
        if self.embedding is None:
            return Counter()
        return build_synonymy_vector(self.embedding, entity, self.synonym_k).terms

    def flags(self, entity: str) -> FeatureFlags:
        ont = False
        if self.ontology is not None:
            hits = self.index.search(entity, self.icfg)
            ont = ontological_flag(self.ontology, entity, hits, self.titles)
        lex = False
        if self.lexicon is not None:
            lex = lexical_flag(self.lexicon, entity)
        return FeatureFlags(ont=ont, lex=lex)

    def extractor(self, variant: str) -> FeatureExtractor:
        return FeatureExtractor(
            variant,
            context_fn=self.context_terms,
            synonymy_fn=self.synonymy_terms,
            flags_fn=self.flags,
        )


class Pipeline:
    """A trained entity-typing pipeline ready for prediction."""

    def __init__(
        self,
        resources: Resources,
        variant: str,
        vocab: Vocabulary,
        model: ClassifierModel,
        lm: NgramLM | None = None,
        segmenter_cfg: SegmenterConfig | None = None,
        known_entities: set[str] | None = None,
        idf_mode: str = "smooth",
    ):
        if variant not in VARIANTS:
            raise ConfigError(f"unknown variant {variant!r}")
        self.resources = resources
        self.variant = variant
        self.vocab = vocab
        self.model = model
        self.lm = lm
        self.segmenter_cfg = segmenter_cfg or SegmenterConfig()
        self.known_entities = known_entities
        self.idf_mode = idf_mode
        self._extractor = resources.extractor(variant)

    @property
    def version(self) -> str:
        """Stable identifier of the trained parameters."""
        h = hashlib.sha256()
        h.update(self.variant.encode())
        h.update(self.model.weights.tobytes())
        h.update(self.model.biases.tobytes())
        return h.hexdigest()[:12]

    def feature_row(self, entity: str):
        doc = self._extractor.document(entity)
        flags = self._extractor.flags(entity)
        return transform([doc], self.vocab, [flags], idf_mode=self.idf_mode).data

    def classify(self, entity: str) -> tuple[str, dict[str, float]]:
        """Predicted category plus raw per-class decision values."""
        row = self.feature_row(entity)
        scores = svm.predict_scores(self.model, row.getrow(0))
        label = self.model.classes[int(scores.argmax())]
        return label, dict(zip(self.model.classes, map(float, scores)))

    def parse(self, query: str) -> list[dict[str, object]]:
        """Segment a raw query and type each segment."""
        if self.lm is None:
            raise ConfigError("pipeline has no language model; run lm-train first")
        seg = segment(self.lm, query, self.known_entities, self.segmenter_cfg)
        out = []
        for phrase in seg.phrases():
            label, scores = self.classify(phrase)
            out.append({"segment": phrase, "category": label, "scores": scores})
        return out

    # -- persistence of the trained head ------------------------------

    def save_model(self, model_dir: str | Path) -> None:
        model_dir = Path(model_dir)
        model_dir.mkdir(parents=True, exist_ok=True)
        self.model.save(model_dir / MODEL_FILENAME)
        with open(model_dir / VOCAB_FILENAME, "w", encoding="utf-8") as fh:
            json.dump(
                {
                    "n_documents": self.vocab.n_documents,
                    "tokens": [
                        [t, self.vocab.document_frequency[t]]
                        for t in sorted(self.vocab.index, key=self.vocab.index.get)
                    ],
                },
                fh,
            )
        with open(model_dir / META_FILENAME, "w", encoding="utf-8") as fh:
            json.dump(
                {"variant": self.variant, "idf_mode": self.idf_mode,
                 "version": self.version,
                 "known_entities": sorted(self.known_entities or ())},
                fh,
            )

    @staticmethod
    def load_model(
        model_dir: str | Path,
        resources: Resources,
        lm: NgramLM | None = None,
        known_entities: set[str] | None = None,
    ) -> "Pipeline":
        model_dir = Path(model_dir)
        try:
            meta = json.loads((model_dir / META_FILENAME).read_text())
            vocab_raw = json.loads((model_dir / VOCAB_FILENAME).read_text())
        except OSError as exc:
            raise ConfigError(f"cannot load model from {model_dir}: {exc}") from exc
        model = ClassifierModel.load(model_dir / MODEL_FILENAME)
        tokens = vocab_raw["tokens"]
        vocab = Vocabulary(
            index={t: i for i, (t, _) in enumerate(tokens)},
            document_frequency={t: df for t, df in tokens},
            n_documents=vocab_raw["n_documents"],
        )
        if known_entities is None and meta.get("known_entities"):
            known_entities = set(meta["known_entities"])
        return Pipeline(
            resources,
            meta["variant"],
            vocab,
            model,
            lm=lm,
            known_entities=known_entities,
            idf_mode=meta.get("idf_mode", "smooth"),
        )


def train_pipeline(
    resources: Resources,
    dataset: list[tuple[str, str]],
    variant: str = "wiki_x+syn_w+lex+ont",
    train_cfg: TrainConfig | None = None,
    lm: NgramLM | None = None,
    min_df: int = 1,
    idf_mode: str = "smooth",
) -> Pipeline:
    """Fit vocabulary and classifier on the full labeled dataset."""
    extractor = resources.extractor(variant)
    entities = [e for e, _ in dataset]
    labels = [lab for _, lab in dataset]
    documents = [extractor.document(e) for e in entities]
    flags = [extractor.flags(e) for e in entities]
    vocab = fit_vocabulary(documents, min_df=min_df)
    matrix = transform(documents, vocab, flags, idf_mode=idf_mode)
    model = svm.fit(matrix, labels, train_cfg)
    return Pipeline(
        resources,
        variant,
        vocab,
        model,
        lm=lm,
        known_entities={e for e, _ in dataset},
        idf_mode=idf_mode,
    )
