"""Synthetic desk-scale benchmark: four entity classes with planted
class-signal words in a generated encyclopedic corpus and a generated
job-postings corpus. Entity surfaces are unique tokens, so surface words
alone carry no generalizing signal."""

import json
import random

CLASSES = ["Company", "JobTitle", "School", "Skill"]
PREFIXES = {"Company": "comp", "JobTitle": "role", "School": "schl", "Skill": "skil"}

SIGNAL_WORDS = {
    "Company": ["market", "acquired", "revenue", "headquarters", "founded",
                "subsidiary", "ceo", "shares", "brand", "corporate"],
    "JobTitle": ["salary", "duties", "profession", "occupation", "hired",
                 "supervises", "shift", "workers", "vacancy", "certified"],
    "School": ["campus", "faculty", "enrollment", "undergraduate", "tuition",
               "alumni", "dormitory", "professors", "semester", "accredited"],
    "Skill": ["toolkit", "proficiency", "syntax", "framework", "debugging",
              "automation", "compiler", "workflow", "module", "tutorial"],
}
CATEGORY_WORDS = {
    "Company": ["Manufacturing conglomerates", "Trading firms"],
    "JobTitle": ["Service occupations", "Skilled trades"],
    "School": ["Educational institutions", "Research campuses"],
    "Skill": ["Software tooling", "Technical methods"],
}
NOISE = [f"noise{i}" for i in range(30)]


def entity_name(cls, i):
    return f"{PREFIXES[cls]}{i:03d}"


def make_dataset(n_per_class):
    return [
        (entity_name(cls, i), cls) for cls in CLASSES for i in range(n_per_class)
    ]


def article_text(rng, entity, cls, sentences=3):
    parts = []
    sig = SIGNAL_WORDS[cls]
    for _ in range(sentences):
        words = (
            rng.sample(sig, 3)
            + [entity]
            + rng.sample(sig, 3)
            + rng.sample(NOISE, 2)
        )
        parts.append(" ".join(words) + ".")
    return " ".join(parts)


def write_world(
    tmp_path,
    n_per_class=6,
    mentions=4,
    n_filler_docs=0,
    seed=0,
):
    """Write corpus.jsonl, jobs.txt, ontology.tsv, lexicon.txt, dataset.tsv.
    Returns a dict of paths plus the dataset."""
    rng = random.Random(seed)
    dataset = make_dataset(n_per_class)

    corpus_path = tmp_path / "corpus.jsonl"
    with open(corpus_path, "w", encoding="utf-8") as fh:
        for entity, cls in dataset:
            rec = {
                "title": entity,
                "text": article_text(rng, entity, cls),
                "categories": [rng.choice(CATEGORY_WORDS[cls])],
            }
            fh.write(json.dumps(rec) + "\n")
        for j in range(n_filler_docs):
            rec = {
                "title": f"Filler article {j}",
                "text": " ".join(rng.choices(NOISE, k=40)) + ".",
                "categories": [],
            }
            fh.write(json.dumps(rec) + "\n")

    jobs_path = tmp_path / "jobs.txt"
    with open(jobs_path, "w", encoding="utf-8") as fh:
        for entity, cls in dataset:
            sig = SIGNAL_WORDS[cls]
            for _ in range(mentions):
                line = rng.sample(sig, 2) + [entity] + rng.sample(sig, 2)
                fh.write(" ".join(line) + "\n")

    ontology_path = tmp_path / "ontology.tsv"
    with open(ontology_path, "w", encoding="utf-8") as fh:
        for entity, cls in dataset:
            if cls == "Company":
                fh.write(f"{entity}\tCompany\n")
            elif cls == "School":
                fh.write(f"{entity}\tOrganisation\n")

    lexicon_path = tmp_path / "lexicon.txt"
    with open(lexicon_path, "w", encoding="utf-8") as fh:
        for entity, cls in dataset:
            if cls == "JobTitle":
                fh.write(entity + "\n")
        fh.write("developer\nnurse\nmanager\n")

    dataset_path = tmp_path / "dataset.tsv"
    with open(dataset_path, "w", encoding="utf-8") as fh:
        for entity, cls in dataset:
            fh.write(f"{entity}\t{cls}\n")

    return {
        "corpus": corpus_path,
        "jobs": jobs_path,
        "ontology": ontology_path,
        "lexicon": lexicon_path,
        "dataset": dataset_path,
        "pairs": dataset,
    }


def build_resources(world, embed_params=None, min_hit_bytes=20, synonym_k=8):
    """In-process resources over a generated world."""
    from etrkit.context_vectors import ContextConfig
    from etrkit.corpus_index import IndexConfig, build_index_from_file
    from etrkit.embedding import EmbeddingParams, train_embeddings
    from etrkit.knowledge import load_lexicon, load_ontology
    from etrkit.pipeline import Resources
    from etrkit.text import tokenize

    index, _ = build_index_from_file(world["corpus"])
    with open(world["jobs"], encoding="utf-8") as fh:
        job_docs = [tokenize(line) for line in fh if line.strip()]
    params = embed_params or EmbeddingParams(
        min_count=2, epochs=3, dim=24, window=2, negatives=4, seed=7
    )
    embedding = train_embeddings(job_docs, params)
    return Resources(
        index=index,
        icfg=IndexConfig(top_n=3, min_hit_bytes=min_hit_bytes),
        ccfg=ContextConfig(window=10),
        embedding=embedding,
        synonym_k=synonym_k,
        ontology=load_ontology(world["ontology"]),
        lexicon=load_lexicon(world["lexicon"]),
    )
