"""Command-line front door.

Exit codes: 0 success, 1 user error (bad arguments or configuration),
2 internal failure. Diagnostics go to stderr, results to stdout.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .config import PipelineConfig, load_config
from .corpus_index import Index, build_index_from_file
from .embedding import EmbeddingModel, train_embeddings
from .errors import ConfigError, EtrError
from .evaluation import VARIANTS, ablation_suite, load_dataset
from .knowledge import load_lexicon, load_ontology
from .pipeline import Pipeline, Resources, train_pipeline
from .query_parser import NgramLM, train_lm
from .report import render_text_table, write_report
from .text import tokenize


def _read_token_docs(path: str | Path) -> list[list[str]]:
    """One document per line, tokenized."""
    docs = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            toks = tokenize(line)
            if toks:
                docs.append(toks)
    if not docs:
        raise ConfigError(f"corpus file {path} contains no tokens")
    return docs


def _load_resources(cfg: PipelineConfig, with_embedding: bool = True) -> Resources:
    cfg.validate_paths(("index_dir",))
    index = Index.load(cfg.index_dir)
    embedding = None
    if with_embedding and cfg.embedding_path and Path(cfg.embedding_path).exists():
        embedding = EmbeddingModel.load(cfg.embedding_path)
    ontology = load_ontology(cfg.ontology) if cfg.ontology else None
    lexicon = load_lexicon(cfg.lexicon) if cfg.lexicon else None
    return Resources(
        index=index,
        icfg=cfg.index,
        ccfg=cfg.context,
        embedding=embedding,
        synonym_k=cfg.synonym_k,
        ontology=ontology,
        lexicon=lexicon,
    )


def _load_pipeline(cfg: PipelineConfig) -> Pipeline:
    cfg.validate_paths(("model_dir",))
    resources = _load_resources(cfg)
    lm = None
    if cfg.lm_path and Path(cfg.lm_path).exists():
        lm = NgramLM.load(cfg.lm_path)
    return Pipeline.load_model(cfg.model_dir, resources, lm=lm)


config_option = click.option(
    "--config", "config_path", type=click.Path(), default=None, help="Config JSON."
)


@click.group()
def cli():
    """Entity type recognition toolkit."""


@cli.command("index-build")
@config_option
def index_build(config_path):
    """Build the inverted index from the corpus file."""
    cfg = load_config(config_path)
    cfg.validate_paths(("corpus",))
    if not cfg.index_dir:
        raise ConfigError("config field 'index_dir' is required but unset")
    index, reader = build_index_from_file(cfg.corpus)
    path = index.save(cfg.index_dir)
    click.echo(
        f"indexed {len(index)} docs ({reader.skipped} lines skipped) -> {path}",
        err=True,
    )


@cli.command("embed-train")
@config_option
def embed_train(config_path):
    """Train word embeddings on the job corpus."""
    cfg = load_config(config_path)
    cfg.validate_paths(("job_corpus",))
    if not cfg.embedding_path:
        raise ConfigError("config field 'embedding_path' is required but unset")
    docs = _read_token_docs(cfg.job_corpus)
    model = train_embeddings(docs, cfg.embedding)
    model.save(cfg.embedding_path)
    click.echo(
        f"trained {len(model.vocab)}-token embedding -> {cfg.embedding_path}",
        err=True,
    )


@cli.command("lm-train")
@config_option
def lm_train_cmd(config_path):
    """Train the unigram/bigram/trigram language model on the job corpus."""
    cfg = load_config(config_path)
    cfg.validate_paths(("job_corpus",))
    if not cfg.lm_path:
        raise ConfigError("config field 'lm_path' is required but unset")
    lm = train_lm(_read_token_docs(cfg.job_corpus))
    lm.save(cfg.lm_path)
    click.echo(f"language model -> {cfg.lm_path}", err=True)


@cli.command("train")
@config_option
@click.option("--variant", default=None, help="Feature variant id.")
def train(config_path, variant):
    """Train the entity type classifier on the labeled dataset."""
    cfg = load_config(config_path, {"variant": variant})
    cfg.validate_paths(("dataset",))
    if not cfg.model_dir:
        raise ConfigError("config field 'model_dir' is required but unset")
    resources = _load_resources(cfg)
    dataset = load_dataset(cfg.dataset)
    pipe = train_pipeline(resources, dataset, cfg.variant, cfg.train)
    pipe.save_model(cfg.model_dir)
    click.echo(
        f"trained {cfg.variant} model (version {pipe.version}) -> {cfg.model_dir}",
        err=True,
    )


@cli.command("evaluate")
@config_option
@click.option("--variant", "variants", multiple=True, help="Variant id (repeatable).")
@click.option("--folds", default=10, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option(
    "--out", "out_dir", type=click.Path(), default=None,
    help="Directory for report.tsv and figures.",
)
def evaluate(config_path, variants, folds, seed, out_dir):
    """Cross-validated evaluation, optionally over several variants."""
    cfg = load_config(config_path)
    cfg.validate_paths(("dataset",))
    resources = _load_resources(cfg)
    dataset = load_dataset(cfg.dataset)
    variant_list = list(variants) or [cfg.variant]
    for v in variant_list:
        if v not in VARIANTS:
            raise ConfigError(f"unknown variant {v!r}")
    reports = ablation_suite(
        dataset, variant_list, resources.extractor,
        k=folds, seed=seed, train_cfg=cfg.train,
    )
    click.echo(render_text_table(reports), nl=False)
    if out_dir:
        produced = write_report(reports, out_dir)
        click.echo(f"report written to {produced['tsv']}", err=True)


@cli.command("classify")
@config_option
@click.option(
    "--entities", "entities_path", type=click.Path(exists=True), required=True,
    help="Entity list, one per line (optional tab-separated label ignored).",
)
def classify(config_path, entities_path):
    """Classify entities offline; one entity<TAB>label<TAB>scores line each."""
    cfg = load_config(config_path)
    pipe = _load_pipeline(cfg)
    with open(entities_path, encoding="utf-8") as fh:
        for line in fh:
            entity = line.split("\t")[0].strip()
            if not entity:
                continue
            label, scores = pipe.classify(entity)
            click.echo(f"{entity}\t{label}\t{json.dumps(scores)}")


@cli.command("parse")
@config_option
@click.argument("query")
def parse(config_path, query):
    """Segment a query and type each segment."""
    cfg = load_config(config_path)
    pipe = _load_pipeline(cfg)
    for seg in pipe.parse(query):
        click.echo(
            f"{seg['segment']}\t{seg['category']}\t{json.dumps(seg['scores'])}"
        )


@cli.command("serve")
@config_option
@click.option("--port", default=None, type=int)
@click.option("--host", default="127.0.0.1", show_default=True)
def serve_cmd(config_path, port, host):
    """Run the HTTP service (loads all resources at startup)."""
    from .service import serve

    cfg = load_config(config_path)
    pipe = _load_pipeline(cfg)
    serve(pipe, port=port or cfg.service_port, host=host)


def main(argv: list[str] | None = None) -> int:
    """Dispatch with the documented exit-code contract."""
    try:
        cli.main(args=argv, standalone_mode=False)
        return 0
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except (click.UsageError, ConfigError, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        return 1
    except EtrError as exc:
        click.echo(f"internal error: {exc}", err=True)
        return 2
    except OSError as exc:
        click.echo(f"internal error: {exc}", err=True)
        return 2


if __name__ == "__main__":
    sys.exit(main())
