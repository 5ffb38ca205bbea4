"""Class-weighted linear SVM, one-vs-rest, trained by deterministic dual
coordinate descent on the L2-regularized hinge loss.

Under balanced weighting each class k gets an effective regularization
C_k = base_c * N / (K * n_k), so infrequent categories are penalized less
for margin violations. Prediction is argmax over per-class decision
values, ties broken by declared class order.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from .errors import TrainingError
from .features import FeatureMatrix

MODEL_MAGIC = b"ETRSVM1\n"


@dataclass
class TrainConfig:
    base_c: float = 1.0
    class_weighting: str = "balanced"  # balanced | uniform
    max_epochs: int = 100
    tolerance: float = 1e-4
    seed: int = 0

    def __post_init__(self):
        if self.base_c <= 0:
            raise ValueError("base_c must be positive")
        if self.class_weighting not in ("balanced", "uniform"):
            raise ValueError("class_weighting must be 'balanced' or 'uniform'")


class ClassifierModel:
    """Per-class weight vectors and biases for one-vs-rest prediction."""

    def __init__(
        self,
        classes: list[str],
        weights: np.ndarray,
        biases: np.ndarray,
        effective_c: dict[str, float] | None = None,
    ):
        self.classes = classes
        self.weights = weights  # K x D
        self.biases = biases  # K
        self.effective_c = effective_c or {}

    # -- persistence --------------------------------------------------

    def save(self, path: str | Path) -> None:
        header = {
            "classes": self.classes,
            "n_features": int(self.weights.shape[1]),
            "effective_c": self.effective_c,
        }
        blob = json.dumps(header).encode("utf-8")
        with open(path, "wb") as fh:
            fh.write(MODEL_MAGIC)
            fh.write(struct.pack("<I", len(blob)))
            fh.write(blob)
            fh.write(self.weights.astype("<f8").tobytes())
            fh.write(self.biases.astype("<f8").tobytes())

    @classmethod
    def load(cls, path: str | Path) -> "ClassifierModel":
        with open(path, "rb") as fh:
            if fh.read(len(MODEL_MAGIC)) != MODEL_MAGIC:
                raise TrainingError(f"{path} is not a classifier model file")
            (size,) = struct.unpack("<I", fh.read(4))
            header = json.loads(fh.read(size).decode("utf-8"))
            k = len(header["classes"])
            d = header["n_features"]
            weights = np.frombuffer(fh.read(8 * k * d), dtype="<f8").reshape(k, d)
            biases = np.frombuffer(fh.read(8 * k), dtype="<f8")
        return cls(
            header["classes"], weights.copy(), biases.copy(), header["effective_c"]
        )

    def export_text(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for i, cls_name in enumerate(self.classes):
                ws = " ".join(f"{w:.9g}" for w in self.weights[i])
                fh.write(f"{cls_name}\t{self.biases[i]:.9g}\t{ws}\n")


def class_regularization(
    labels: list[str], classes: list[str], cfg: TrainConfig
) -> dict[str, float]:
    """Effective per-class C values (exposed for inspection)."""
    if cfg.class_weighting == "uniform":
        return {c: cfg.base_c for c in classes}
    n = len(labels)
    k = len(classes)
    counts = {c: labels.count(c) for c in classes}
    return {c: cfg.base_c * n / (k * counts[c]) for c in classes}


def _dual_cd(
    x_rows: list[tuple[np.ndarray, np.ndarray]],
    y: np.ndarray,
    c: float,
    dim: int,
    cfg: TrainConfig,
    rng: np.random.Generator,
) -> np.ndarray:
    """Dual coordinate descent for one binary L1-hinge subproblem.

    Returns the augmented weight vector (last component is the bias,
    learned via a constant feature)."""
    n = len(x_rows)
    w = np.zeros(dim + 1)
    alpha = np.zeros(n)
    qii = np.array([float(v @ v) + 1.0 for _, v in x_rows])
    prev_obj = None
    for _ in range(cfg.max_epochs):
        order = rng.permutation(n)
        for i in order:
            idx, vals = x_rows[i]
            score = w[idx] @ vals + w[-1]
            g = y[i] * score - 1.0
            a = alpha[i]
            if a == 0 and g >= 0:
                continue
            if a == c and g <= 0:
                continue
            a_new = min(max(a - g / qii[i], 0.0), c)
            d = (a_new - a) * y[i]
            if d != 0.0:
                w[idx] += d * vals
                w[-1] += d
                alpha[i] = a_new
        obj = 0.5 * float(w @ w) - float(alpha.sum())
        if prev_obj is not None and prev_obj - obj < cfg.tolerance:
            break
        prev_obj = obj
    return w


def fit(
    matrix: FeatureMatrix | sp.spmatrix,
    labels: list[str],
    cfg: TrainConfig | None = None,
) -> ClassifierModel:
    """Train one-vs-rest weight vectors over the feature matrix."""
    cfg = cfg or TrainConfig()
    data = matrix.data if isinstance(matrix, FeatureMatrix) else matrix
    data = sp.csr_matrix(data)
    if data.shape[0] != len(labels):
        raise ValueError("label count does not match matrix rows")
    if not np.isfinite(data.data).all():
        raise TrainingError("feature matrix contains non-finite values")
    classes = sorted(set(labels))
    if len(classes) < 2:
        raise TrainingError("need at least 2 distinct labels")
    eff_c = class_regularization(labels, classes, cfg)
    dim = data.shape[1]
    x_rows = [
        (data.indices[data.indptr[i] : data.indptr[i + 1]],
         data.data[data.indptr[i] : data.indptr[i + 1]])
        for i in range(data.shape[0])
    ]
    weights = np.zeros((len(classes), dim))
    biases = np.zeros(len(classes))
    for k, cls_name in enumerate(classes):
        y = np.array([1.0 if lab == cls_name else -1.0 for lab in labels])
        rng = np.random.default_rng(cfg.seed + k)
        w_aug = _dual_cd(x_rows, y, eff_c[cls_name], dim, cfg, rng)
        weights[k] = w_aug[:-1]
        biases[k] = w_aug[-1]
    return ClassifierModel(classes, weights, biases, eff_c)


def _as_dense_row(model: ClassifierModel, row) -> np.ndarray:
    if sp.issparse(row):
        row = np.asarray(row.todense()).ravel()
    else:
        row = np.asarray(row, dtype=np.float64).ravel()
    if row.shape[0] != model.weights.shape[1]:
        raise ValueError(
            f"row width {row.shape[0]} does not match model "
            f"width {model.weights.shape[1]}"
        )
    return row


def predict_scores(model: ClassifierModel, row) -> np.ndarray:
    """Raw per-class decision values w_k . x + b_k."""
    x = _as_dense_row(model, row)
    return model.weights @ x + model.biases


def predict(model: ClassifierModel, row) -> str:
    """Argmax class; exact ties go to the earlier class in model.classes."""
    scores = predict_scores(model, row)
    return model.classes[int(np.argmax(scores))]
