import json

import pytest

from etrkit.corpus_index import ArticleDoc, build_index


def write_corpus(path, records):
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec) + "\n")
    return path


def make_docs(specs):
    """specs: list of (title, content, categories) or dicts."""
    docs = []
    for i, spec in enumerate(specs):
        if isinstance(spec, dict):
            docs.append(
                ArticleDoc(
                    id=i,
                    title=spec["title"],
                    content=spec.get("content", ""),
                    categories=spec.get("categories", []),
                    byte_length=len(spec.get("content", "").encode("utf-8")),
                    redirect=spec.get("redirect", False),
                )
            )
        else:
            title, content, categories = spec
            docs.append(
                ArticleDoc(
                    id=i,
                    title=title,
                    content=content,
                    categories=categories,
                    byte_length=len(content.encode("utf-8")),
                )
            )
    return docs


@pytest.fixture
def small_index():
    pad = " filler" * 20  # keeps content above the default 100-byte floor
    docs = make_docs(
        [
            (
                "CareerBuilder",
                "CareerBuilder is a website operated by CareerBuilder, an "
                "employment company with many establishments." + pad,
                ["Employment websites", "Companies based in Chicago"],
            ),
            (
                "Apache Lucene",
                "Apache Lucene is a search engine software library written "
                "in Java by developers." + pad,
                ["Software", "Java platform"],
            ),
            (
                "UNC Charlotte",
                "UNC Charlotte is a public university in North Carolina with "
                "many students and professors." + pad,
                ["Universities in NC"],
            ),
            (
                "Java",
                "Java is a programming language used by a java developer in "
                "software projects. A java developer writes code." + pad,
                ["Programming languages"],
            ),
            (
                "Nursing",
                "A nurse assistant helps a registered nurse with patients in "
                "a hospital setting." + pad,
                ["Healthcare occupations"],
            ),
        ]
    )
    return build_index(docs), docs
