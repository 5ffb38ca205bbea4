"""Pipeline configuration: one JSON file capturing every knob, with
ETRKIT_-prefixed environment variable overrides and eager path checks."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, fields
from pathlib import Path

from .classifier import TrainConfig
from .context_vectors import ContextConfig
from .corpus_index import IndexConfig
from .embedding import EmbeddingParams
from .errors import ConfigError
from .evaluation import VARIANTS

ENV_PREFIX = "ETRKIT_"

# config keys that must point at existing filesystem entries when set
_PATH_KEYS = (
    "corpus",
    "job_corpus",
    "ontology",
    "lexicon",
    "dataset",
)


@dataclass
class PipelineConfig:
    corpus: str | None = None
    job_corpus: str | None = None
    ontology: str | None = None
    lexicon: str | None = None
    dataset: str | None = None
    index_dir: str | None = None
    model_dir: str | None = None
    embedding_path: str | None = None
    lm_path: str | None = None
    variant: str = "wiki_x+syn_w+lex+ont"
    synonym_k: int = 10
    service_port: int = 8080
    index: IndexConfig = field(default_factory=IndexConfig)
    context: ContextConfig = field(default_factory=ContextConfig)
    embedding: EmbeddingParams = field(default_factory=EmbeddingParams)
    train: TrainConfig = field(default_factory=TrainConfig)

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ConfigError(f"unknown variant {self.variant!r}")

    def validate_paths(self, required: tuple[str, ...]) -> None:
        """Fail eagerly, naming the missing field."""
        for name in required:
            value = getattr(self, name, None)
            if value is None:
                raise ConfigError(f"config field {name!r} is required but unset")
            if name in _PATH_KEYS or name in (
                "index_dir",
                "model_dir",
                "embedding_path",
                "lm_path",
            ):
                if not Path(value).exists():
                    raise ConfigError(
                        f"config field {name!r} points at missing path {value}"
                    )


_NESTED = {
    "index": IndexConfig,
    "context": ContextConfig,
    "embedding": EmbeddingParams,
    "train": TrainConfig,
}


def load_config(
    path: str | Path | None = None, overrides: dict | None = None
) -> PipelineConfig:
    """Build a PipelineConfig from a JSON file, the ETRKIT_* environment,
    and explicit overrides (in increasing precedence)."""
    raw: dict = {}
    if path is not None:
        try:
            raw = json.loads(Path(path).read_text(encoding="utf-8"))
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    flat_names = {f.name for f in fields(PipelineConfig)} - set(_NESTED)
    for name in flat_names:
        env = os.environ.get(ENV_PREFIX + name.upper())
        if env is not None:
            raw[name] = env
    if overrides:
        for key, value in overrides.items():
            if value is not None:
                raw[key] = value
    kwargs: dict = {}
    for key, value in raw.items():
        if key in _NESTED:
            if not isinstance(value, dict):
                raise ConfigError(f"config section {key!r} must be an object")
            try:
                kwargs[key] = _NESTED[key](**value)
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"bad config section {key!r}: {exc}") from exc
        elif key in flat_names:
            kwargs[key] = _coerce(key, value)
        else:
            raise ConfigError(f"unknown config field {key!r}")
    try:
        return PipelineConfig(**kwargs)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def _coerce(key: str, value):
    if key in ("synonym_k", "service_port") and not isinstance(value, int):
        return int(value)
    return value
