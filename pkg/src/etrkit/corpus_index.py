"""Inverted index over an encyclopedic corpus with phrase search.

Articles arrive as line-delimited JSON records. Disambiguation pages,
"List of" pages, and redirects are excluded before indexing. The index
covers title and content fields (positional, for phrase queries) and
retains category tokens per document. Ranking is BM25 with a 2x title
boost; multi-word entities are matched as an exact adjacent phrase first,
falling back to a conjunctive all-terms query.
"""

from __future__ import annotations

import json
import math
import zlib
from dataclasses import dataclass, field
from pathlib import Path

from .errors import CorpusError, IndexBuildError
from .text import tokenize

INDEX_MAGIC = b"ETRIDX1\n"
INDEX_FILENAME = "index.etr"

BM25_K1 = 1.2
BM25_B = 0.75
TITLE_BOOST = 2.0


@dataclass
class ArticleDoc:
    """One corpus article, the unit of indexing."""

    id: int
    title: str
    content: str
    categories: list[str]
    byte_length: int
    redirect: bool = False


@dataclass
class IndexConfig:
    top_n: int = 3
    min_hit_bytes: int = 100

    def __post_init__(self):
        if self.top_n < 1:
            raise ValueError("top_n must be >= 1")
        if self.min_hit_bytes < 1:
            raise ValueError("min_hit_bytes must be >= 1")


@dataclass
class SearchHit:
    """A ranked search result carrying the token material downstream
    feature builders need (content words and category words)."""

    doc_id: int
    score: float
    content_tokens: list[str]
    category_tokens: list[str]
    phrase_match: bool = True


class CorpusReader:
    """Iterates ArticleDocs from a line-delimited corpus file.

    Malformed lines (bad JSON, missing/empty title, non-string text) are
    skipped and counted in ``skipped``; if more than 10% of lines are
    malformed the iteration fails with CorpusError.
    """

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self.skipped = 0
        self.total_lines = 0

    def __iter__(self):
        try:
            fh = open(self.path, encoding="utf-8")
        except OSError as exc:
            raise CorpusError(f"cannot read corpus file {self.path}: {exc}") from exc
        with fh:
            next_id = 0
            for line in fh:
                if not line.strip():
                    continue
                self.total_lines += 1
                doc = self._parse_line(line)
                if doc is None:
                    self.skipped += 1
                    continue
                doc.id = next_id
                next_id += 1
                yield doc
        if self.total_lines and self.skipped > 0.1 * self.total_lines:
            raise CorpusError(
                f"{self.skipped}/{self.total_lines} malformed lines in {self.path}"
            )

    @staticmethod
    def _parse_line(line: str) -> ArticleDoc | None:
        try:
            rec = json.loads(line)
        except json.JSONDecodeError:
            return None
        if not isinstance(rec, dict):
            return None
        title = rec.get("title")
        content = rec.get("text")
        categories = rec.get("categories", [])
        if not isinstance(title, str) or not title.strip():
            return None
        if not isinstance(content, str):
            return None
        if not isinstance(categories, list) or not all(
            isinstance(c, str) for c in categories
        ):
            return None
        return ArticleDoc(
            id=-1,
            title=title.strip(),
            content=content,
            categories=categories,
            byte_length=len(content.encode("utf-8")),
            redirect=bool(rec.get("redirect", False)),
        )


def ingest_corpus(path: str | Path) -> CorpusReader:
    """Open a corpus file for streaming; returns a reiterable reader."""
    return CorpusReader(path)


def filter_article(doc: ArticleDoc) -> bool:
    """Keep/drop rule: drop disambiguation pages, "List of" pages, and
    redirects; keep everything else."""
    title = doc.title.lower()
    if "(disambiguation)" in title:
        return False
    if title.startswith("list of "):
        return False
    if doc.redirect:
        return False
    return True


@dataclass
class _DocEntry:
    title: str
    title_tokens: list[str]
    content_tokens: list[str]
    category_tokens: list[str]
    byte_length: int
    raw_categories: list[str] = field(default_factory=list)


class Index:
    """Immutable-after-build positional inverted index."""

    def __init__(self):
        self._docs: dict[int, _DocEntry] = {}
        # token -> {doc_id -> [positions]}
        self._content: dict[str, dict[int, list[int]]] = {}
        self._title: dict[str, dict[int, list[int]]] = {}
        self._avg_content_len = 0.0
        self._avg_title_len = 0.0

    # -- construction -------------------------------------------------

    def _add(self, doc: ArticleDoc) -> None:
        if doc.id in self._docs:
            raise IndexBuildError(f"duplicate doc id {doc.id}")
        title_tokens = tokenize(doc.title)
        content_tokens = tokenize(doc.content)
        category_tokens = [t for cat in doc.categories for t in tokenize(cat)]
        self._docs[doc.id] = _DocEntry(
            title=doc.title,
            title_tokens=title_tokens,
            content_tokens=content_tokens,
            category_tokens=category_tokens,
            byte_length=doc.byte_length,
            raw_categories=list(doc.categories),
        )
        for pos, tok in enumerate(content_tokens):
            self._content.setdefault(tok, {}).setdefault(doc.id, []).append(pos)
        for pos, tok in enumerate(title_tokens):
            self._title.setdefault(tok, {}).setdefault(doc.id, []).append(pos)

    def _finalize(self) -> None:
        n = len(self._docs)
        if n:
            self._avg_content_len = (
                sum(len(d.content_tokens) for d in self._docs.values()) / n
            )
            self._avg_title_len = (
                sum(len(d.title_tokens) for d in self._docs.values()) / n
            )

    # -- introspection ------------------------------------------------

    def __len__(self) -> int:
        return len(self._docs)

    def title(self, doc_id: int) -> str:
        return self._docs[doc_id].title

    def titles(self) -> dict[int, str]:
        return {doc_id: e.title for doc_id, e in self._docs.items()}

    def doc(self, doc_id: int) -> _DocEntry:
        return self._docs[doc_id]

    # -- search -------------------------------------------------------

    def _phrase_docs(self, terms: list[str]) -> set[int]:
        """Docs where *terms* appear as an adjacent run in content or title."""
        out: set[int] = set()
        for postings in (self._content, self._title):
            first = postings.get(terms[0])
            if not first:
                continue
            candidates = set(first)
            for t in terms[1:]:
                plist = postings.get(t)
                if not plist:
                    candidates = set()
                    break
                candidates &= set(plist)
            for doc_id in candidates:
                positions = first[doc_id]
                if any(
                    all(
                        p + off in _as_set(postings[t].get(doc_id))
                        for off, t in enumerate(terms)
                    )
                    for p in positions
                ):
                    out.add(doc_id)
        return out

    def _and_docs(self, terms: list[str]) -> set[int]:
        """Docs containing every term somewhere in content or title."""
        result: set[int] | None = None
        for t in terms:
            docs = set(self._content.get(t, ())) | set(self._title.get(t, ()))
            result = docs if result is None else result & docs
            if not result:
                return set()
        return result or set()

    def _bm25(self, doc_id: int, terms: list[str]) -> float:
        n = len(self._docs)
        score = 0.0
        entry = self._docs[doc_id]
        for postings, avg_len, doc_len, boost in (
            (self._content, self._avg_content_len, len(entry.content_tokens), 1.0),
            (self._title, self._avg_title_len, len(entry.title_tokens), TITLE_BOOST),
        ):
            for t in set(terms):
                plist = postings.get(t)
                if not plist or doc_id not in plist:
                    continue
                tf = len(plist[doc_id])
                df = len(plist)
                idf = math.log(1.0 + (n - df + 0.5) / (df + 0.5))
                norm = 1.0 - BM25_B + BM25_B * doc_len / avg_len if avg_len else 1.0
                score += boost * idf * tf * (BM25_K1 + 1.0) / (tf + BM25_K1 * norm)
        return score

    def search(self, entity: str, cfg: IndexConfig | None = None) -> list[SearchHit]:
        """Top-n hits for *entity*: exact-phrase match first, conjunctive
        all-terms fallback; hits below the byte-length floor are dropped."""
        cfg = cfg or IndexConfig()
        terms = tokenize(entity)
        if not terms:
            raise ValueError("entity is empty after normalization")
        phrase = True
        doc_ids = self._phrase_docs(terms)
        if not doc_ids:
            phrase = False
            doc_ids = self._and_docs(terms)
        if not doc_ids:
            return []
        eligible = [
            d for d in doc_ids if self._docs[d].byte_length >= cfg.min_hit_bytes
        ]
        ranked = sorted(eligible, key=lambda d: (-self._bm25(d, terms), d))
        hits = []
        for doc_id in ranked[: cfg.top_n]:
            entry = self._docs[doc_id]
            hits.append(
                SearchHit(
                    doc_id=doc_id,
                    score=self._bm25(doc_id, terms),
                    content_tokens=entry.content_tokens,
                    category_tokens=entry.category_tokens,
                    phrase_match=phrase,
                )
            )
        return hits

    # -- persistence --------------------------------------------------

    def save(self, directory: str | Path) -> Path:
        """Persist to a single versioned file inside *directory*."""
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        records = [
            {
                "id": doc_id,
                "title": e.title,
                "content_tokens": e.content_tokens,
                "byte_length": e.byte_length,
                "categories": e.raw_categories,
            }
            for doc_id, e in sorted(self._docs.items())
        ]
        payload = zlib.compress(json.dumps(records).encode("utf-8"))
        path = directory / INDEX_FILENAME
        path.write_bytes(INDEX_MAGIC + payload)
        return path

    @classmethod
    def load(cls, directory: str | Path) -> "Index":
        path = Path(directory) / INDEX_FILENAME
        try:
            raw = path.read_bytes()
        except OSError as exc:
            raise IndexBuildError(f"cannot read index at {path}: {exc}") from exc
        if not raw.startswith(INDEX_MAGIC):
            raise IndexBuildError(f"{path} is not an index file (bad magic header)")
        records = json.loads(zlib.decompress(raw[len(INDEX_MAGIC) :]))
        idx = cls()
        for rec in records:
            title_tokens = tokenize(rec["title"])
            content_tokens = rec["content_tokens"]
            category_tokens = [
                t for cat in rec["categories"] for t in tokenize(cat)
            ]
            doc_id = rec["id"]
            idx._docs[doc_id] = _DocEntry(
                title=rec["title"],
                title_tokens=title_tokens,
                content_tokens=content_tokens,
                category_tokens=category_tokens,
                byte_length=rec["byte_length"],
                raw_categories=rec["categories"],
            )
            for pos, tok in enumerate(content_tokens):
                idx._content.setdefault(tok, {}).setdefault(doc_id, []).append(pos)
            for pos, tok in enumerate(title_tokens):
                idx._title.setdefault(tok, {}).setdefault(doc_id, []).append(pos)
        idx._finalize()
        return idx


def _as_set(positions: list[int] | None) -> set[int]:
    return set(positions) if positions else set()


def build_index(docs) -> Index:
    """Build an index from a stream of (already filtered) ArticleDocs.

    Documents may arrive in any order; the resulting index is a
    deterministic function of the document set.
    """
    idx = Index()
    for doc in docs:
        idx._add(doc)
    idx._finalize()
    return idx


def build_index_from_file(path: str | Path) -> tuple[Index, CorpusReader]:
    """Ingest, filter, and index a corpus file in one pass."""
    reader = ingest_corpus(path)
    idx = build_index(doc for doc in reader if filter_article(doc))
    return idx, reader
