import json

import pytest

from etrkit.cli import main
from etrkit.errors import ConfigError
from etrkit.pipeline import Pipeline, train_pipeline
from etrkit.query_parser import train_lm
from etrkit.text import tokenize

import synth


@pytest.fixture(scope="module")
def world(tmp_path_factory):
    return synth.write_world(tmp_path_factory.mktemp("world"), n_per_class=6)


@pytest.fixture(scope="module")
def resources(world):
    return synth.build_resources(world)


@pytest.fixture(scope="module")
def lm(world):
    with open(world["jobs"], encoding="utf-8") as fh:
        return train_lm([tokenize(line) for line in fh if line.strip()])


@pytest.fixture(scope="module")
def pipe(resources, world, lm):
    return train_pipeline(resources, world["pairs"], lm=lm)


class TestPipeline:
    def test_classify_returns_label_and_all_scores(self, pipe):
        label, scores = pipe.classify("comp000")
        assert label in synth.CLASSES
        assert sorted(scores) == sorted(synth.CLASSES)

    def test_training_set_mostly_recovered(self, pipe, world):
        correct = sum(
            1 for e, c in world["pairs"] if pipe.classify(e)[0] == c
        )
        assert correct >= 0.9 * len(world["pairs"])

    def test_parse_types_each_segment(self, pipe):
        segs = pipe.parse("comp001 role002")
        assert [s["segment"] for s in segs] == ["comp001", "role002"]
        assert all(set(s["scores"]) == set(synth.CLASSES) for s in segs)

    def test_parse_without_lm_fatal(self, resources, world):
        no_lm = train_pipeline(resources, world["pairs"])
        with pytest.raises(ConfigError):
            no_lm.parse("comp001")

    def test_version_stable_and_short(self, pipe):
        assert pipe.version == pipe.version
        assert len(pipe.version) == 12

    def test_model_roundtrip(self, pipe, resources, tmp_path, lm):
        model_dir = tmp_path / "model"
        pipe.save_model(model_dir)
        loaded = Pipeline.load_model(model_dir, resources, lm=lm)
        assert loaded.version == pipe.version
        for entity in ("comp003", "role004", "schl005", "skil000"):
            assert loaded.classify(entity) == pipe.classify(entity)

    def test_unknown_variant_invalid(self, resources, world):
        with pytest.raises((ConfigError, ValueError)):
            train_pipeline(resources, world["pairs"], variant="nope")


def write_config(tmp_path, world, **extra):
    cfg = {
        "corpus": str(world["corpus"]),
        "job_corpus": str(world["jobs"]),
        "ontology": str(world["ontology"]),
        "lexicon": str(world["lexicon"]),
        "dataset": str(world["dataset"]),
        "index_dir": str(tmp_path / "index"),
        "model_dir": str(tmp_path / "model"),
        "embedding_path": str(tmp_path / "embedding.bin"),
        "lm_path": str(tmp_path / "lm.bin"),
        "embedding": {
            "min_count": 2, "epochs": 2, "dim": 16, "window": 2,
            "negatives": 3, "seed": 1,
        },
        "train": {"seed": 0},
        "synonym_k": 8,
    }
    cfg.update(extra)
    path = tmp_path / "config.json"
    path.write_text(json.dumps(cfg), encoding="utf-8")
    return path


@pytest.fixture(scope="module")
def cli_env(tmp_path_factory):
    """A full artifact chain built through the CLI itself."""
    tmp_path = tmp_path_factory.mktemp("cli")
    world = synth.write_world(tmp_path, n_per_class=6, seed=3)
    config = write_config(tmp_path, world)
    for step in ("index-build", "embed-train", "lm-train", "train"):
        assert main([step, "--config", str(config)]) == 0
    return {"tmp": tmp_path, "world": world, "config": config}


class TestCli:
    def test_classify_output_shape(self, cli_env, capsys):
        entities = cli_env["tmp"] / "entities.txt"
        entities.write_text("comp000\nrole001\n", encoding="utf-8")
        code = main(
            ["classify", "--config", str(cli_env["config"]),
             "--entities", str(entities)]
        )
        assert code == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert len(lines) == 2
        entity, label, scores = lines[0].split("\t")
        assert entity == "comp000"
        assert label in synth.CLASSES
        assert set(json.loads(scores)) == set(synth.CLASSES)

    def test_parse_command(self, cli_env, capsys):
        code = main(["parse", "--config", str(cli_env["config"]), "schl002 skil003"])
        assert code == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert [ln.split("\t")[0] for ln in lines] == ["schl002", "skil003"]

    def test_evaluate_writes_tsv_and_figures(self, cli_env, capsys):
        out_dir = cli_env["tmp"] / "report"
        code = main(
            ["evaluate", "--config", str(cli_env["config"]),
             "--variant", "bow", "--variant", "wiki_x+syn_w+lex+ont",
             "--folds", "3", "--out", str(out_dir)]
        )
        assert code == 0
        table = capsys.readouterr().out
        assert "bow" in table and "micro" in table
        tsv = (out_dir / "report.tsv").read_text(encoding="utf-8")
        assert tsv.splitlines()[0].split("\t")[:2] == ["variant", "class"]
        assert (out_dir / "f1_by_class.png").stat().st_size > 0
        assert (out_dir / "micro_f1.png").stat().st_size > 0

    def test_missing_config_field_exits_1_naming_field(self, tmp_path, capsys):
        config = tmp_path / "c.json"
        config.write_text("{}", encoding="utf-8")
        assert main(["index-build", "--config", str(config)]) == 1
        assert "corpus" in capsys.readouterr().err

    def test_unknown_config_field_exits_1(self, tmp_path):
        config = tmp_path / "c.json"
        config.write_text('{"frobnicate": 1}', encoding="utf-8")
        assert main(["index-build", "--config", str(config)]) == 1

    def test_unknown_subcommand_exits_1(self):
        assert main(["no-such-command"]) == 1

    def test_unknown_variant_exits_1(self, cli_env):
        assert (
            main(["evaluate", "--config", str(cli_env["config"]), "--variant", "bad"])
            == 1
        )

    def test_unreadable_corpus_exits_1(self, tmp_path):
        config = tmp_path / "c.json"
        config.write_text(
            json.dumps({"corpus": str(tmp_path / "missing.jsonl"),
                        "index_dir": str(tmp_path / "idx")}),
            encoding="utf-8",
        )
        assert main(["index-build", "--config", str(config)]) == 1

    def test_env_override(self, cli_env, tmp_path, monkeypatch, capsys):
        entities = tmp_path / "e.txt"
        entities.write_text("comp000\n", encoding="utf-8")
        monkeypatch.setenv("ETRKIT_SYNONYM_K", "5")
        code = main(
            ["classify", "--config", str(cli_env["config"]),
             "--entities", str(entities)]
        )
        assert code == 0
        assert capsys.readouterr().out.count("\n") == 1
