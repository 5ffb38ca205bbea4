"""Stratified k-fold cross-validation, per-class P/R/F1, and ablation runs.

Vocabulary and idf statistics are fitted per fold on training rows only.
All variants of an ablation run share one fold assignment so comparisons
are paired.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import classifier as svm
from .errors import ConfigError, TrainingError
from .features import fit_vocabulary, transform
from .knowledge import FeatureFlags
from .text import tokenize

VARIANTS = (
    "bow",
    "wiki_x",
    "syn_w",
    "wiki_x+syn_w",
    "wiki_x+syn_w+ont",
    "wiki_x+syn_w+lex",
    "wiki_x+syn_w+lex+ont",
)


@dataclass
class EvalReport:
    variant: str
    classes: list[str]
    per_class: dict[str, tuple[float, float, float]]  # class -> (P, R, F1) in %
    micro_f1: float  # %
    confusion: np.ndarray  # K x K, rows = true class


def stratified_folds(labels: list[str], k: int, seed: int = 0) -> np.ndarray:
    """Per-class seeded shuffle then round-robin deal; guarantees the
    per-class fold-count spread is at most 1."""
    if k < 2:
        raise ValueError("k must be >= 2")
    labels = list(labels)
    counts = Counter(labels)
    for cls_name, c in counts.items():
        if c < k:
            raise TrainingError(
                f"class {cls_name!r} has only {c} members for {k} folds"
            )
    rng = np.random.default_rng(seed)
    assignment = np.empty(len(labels), dtype=np.int64)
    for cls_name in sorted(counts):
        idxs = np.array([i for i, lab in enumerate(labels) if lab == cls_name])
        rng.shuffle(idxs)
        for pos, i in enumerate(idxs):
            assignment[i] = pos % k
    return assignment


def metrics(confusion: np.ndarray, classes: list[str], variant: str = "") -> EvalReport:
    """Per-class precision/recall/F1 and micro-averaged F1 (percent).

    Zero denominators yield 0 by convention. Micro-F1 is computed from
    pooled TP/FP/FN, which equals accuracy for single-label multiclass.
    """
    confusion = np.asarray(confusion, dtype=np.int64)
    per_class = {}
    for i, cls_name in enumerate(classes):
        tp = confusion[i, i]
        fp = confusion[:, i].sum() - tp
        fn = confusion[i, :].sum() - tp
        p = 100.0 * tp / (tp + fp) if tp + fp else 0.0
        r = 100.0 * tp / (tp + fn) if tp + fn else 0.0
        f1 = 2 * p * r / (p + r) if p + r else 0.0
        per_class[cls_name] = (p, r, f1)
    tp_all = np.trace(confusion)
    total = confusion.sum()
    # pooled FP == pooled FN in single-label multiclass, so micro-F1 == accuracy
    micro = 100.0 * tp_all / total if total else 0.0
    return EvalReport(
        variant=variant,
        classes=list(classes),
        per_class=per_class,
        micro_f1=micro,
        confusion=confusion,
    )


def f1_score(p: float, r: float) -> float:
    """Harmonic mean of precision and recall (same units in, same out)."""
    return 2 * p * r / (p + r) if p + r else 0.0


def load_dataset(path: str | Path) -> list[tuple[str, str]]:
    """Read entity<TAB>label lines."""
    pairs = []
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read dataset {path}: {exc}") from exc
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 2 or not parts[0].strip() or not parts[1].strip():
            raise ConfigError(f"{path}:{lineno}: expected entity<TAB>label")
        pairs.append((parts[0].strip(), parts[1].strip()))
    if not pairs:
        raise ConfigError(f"dataset {path} is empty")
    return pairs


class FeatureExtractor:
    """Builds each entity's pseudo-document and flags for one variant.

    Resource callables are injected so the harness stays decoupled from
    index/embedding/ontology plumbing: ``context_fn(entity) -> Counter``,
    ``synonymy_fn(entity) -> Counter``, ``flags_fn(entity) -> FeatureFlags``.
    """

    def __init__(self, variant: str, context_fn=None, synonymy_fn=None, flags_fn=None):
        if variant not in VARIANTS:
            raise ValueError(f"unknown variant {variant!r}")
        self.variant = variant
        self._context_fn = context_fn
        self._synonymy_fn = synonymy_fn
        self._flags_fn = flags_fn

    def document(self, entity: str) -> Counter:
        doc: Counter = Counter()
        if self.variant == "bow":
            doc.update(tokenize(entity))
            return doc
        if "wiki_x" in self.variant:
            doc += self._context_fn(entity)
        if "syn_w" in self.variant:
            doc += self._synonymy_fn(entity)
        return doc

    def flags(self, entity: str) -> FeatureFlags:
        use_ont = "ont" in self.variant.split("+")
        use_lex = "lex" in self.variant.split("+")
        if not (use_ont or use_lex) or self._flags_fn is None:
            return FeatureFlags(False, False)
        raw = self._flags_fn(entity)
        return FeatureFlags(
            ont=raw.ont if use_ont else False,
            lex=raw.lex if use_lex else False,
        )


def cross_validate(
    extractor: FeatureExtractor,
    dataset: list[tuple[str, str]],
    k: int = 10,
    seed: int = 0,
    train_cfg: svm.TrainConfig | None = None,
    min_df: int = 1,
    idf_mode: str = "smooth",
    fold_assignment: np.ndarray | None = None,
) -> EvalReport:
    """k-fold CV with per-fold vocabulary fitting (no train/test leakage)."""
    entities = [e for e, _ in dataset]
    labels = [lab for _, lab in dataset]
    classes = sorted(set(labels))
    if fold_assignment is None:
        fold_assignment = stratified_folds(labels, k, seed)
    documents = [extractor.document(e) for e in entities]
    flags = [extractor.flags(e) for e in entities]
    confusion = np.zeros((len(classes), len(classes)), dtype=np.int64)
    cls_index = {c: i for i, c in enumerate(classes)}
    for fold in range(k):
        train_idx = [i for i in range(len(dataset)) if fold_assignment[i] != fold]
        test_idx = [i for i in range(len(dataset)) if fold_assignment[i] == fold]
        try:
            vocab = fit_vocabulary([documents[i] for i in train_idx], min_df=min_df)
            x_train = transform(
                [documents[i] for i in train_idx],
                vocab,
                [flags[i] for i in train_idx],
                idf_mode=idf_mode,
            )
            model = svm.fit(x_train, [labels[i] for i in train_idx], train_cfg)
            x_test = transform(
                [documents[i] for i in test_idx],
                vocab,
                [flags[i] for i in test_idx],
                idf_mode=idf_mode,
            )
        except Exception as exc:
            raise TrainingError(f"fold {fold} failed: {exc}") from exc
        for row_pos, i in enumerate(test_idx):
            pred = svm.predict(model, x_test.data.getrow(row_pos))
            confusion[cls_index[labels[i]], cls_index[pred]] += 1
    return metrics(confusion, classes, variant=extractor.variant)


def ablation_suite(
    dataset: list[tuple[str, str]],
    variants: list[str],
    extractor_factory,
    k: int = 10,
    seed: int = 0,
    train_cfg: svm.TrainConfig | None = None,
    min_df: int = 1,
) -> list[EvalReport]:
    """One report per variant, all sharing the same fold assignment.

    *extractor_factory* maps a variant id to a FeatureExtractor.
    """
    for v in variants:
        if v not in VARIANTS:
            raise ValueError(f"unknown variant {v!r}")
    labels = [lab for _, lab in dataset]
    folds = stratified_folds(labels, k, seed)
    return [
        cross_validate(
            extractor_factory(v),
            dataset,
            k=k,
            seed=seed,
            train_cfg=train_cfg,
            min_df=min_df,
            fold_assignment=folds,
        )
        for v in variants
    ]
