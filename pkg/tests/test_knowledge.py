import pytest

from etrkit.corpus_index import SearchHit
from etrkit.errors import ConfigError
from etrkit.knowledge import (
    OntologyStore,
    lexical_flag,
    load_lexicon,
    load_ontology,
    ontological_flag,
)


def hit(doc_id):
    return SearchHit(doc_id=doc_id, score=1.0, content_tokens=[], category_tokens=[])


@pytest.fixture
def ontology_file(tmp_path):
    path = tmp_path / "ontology.tsv"
    path.write_text(
        "CareerBuilder\tCompany\n"
        "Athens_College\tOrganisation\n"
        "Acme_Corp\tCompany\n"
        "Acme_Corp\tOrganisation\n"
        "malformed line without tab\n",
        encoding="utf-8",
    )
    return path


class TestOntology:
    def test_load_and_lookup(self, ontology_file):
        store = load_ontology(ontology_file)
        assert "company" in store.classes("careerbuilder")
        assert store.classes("athens college") == {"organisation"}
        assert store.classes("acme corp") == {"company", "organisation"}

    def test_underscores_normalized(self, ontology_file):
        store = load_ontology(ontology_file)
        assert store.classes("Athens_College") == {"organisation"}

    def test_empty_file_empty_store(self, tmp_path):
        path = tmp_path / "empty.tsv"
        path.write_text("")
        store = load_ontology(path)
        assert len(store) == 0
        assert ontological_flag(store, "anything", [hit(0)], {0: "Anything"}) is False

    def test_unreadable_fatal(self, tmp_path):
        with pytest.raises(ConfigError):
            load_ontology(tmp_path / "missing.tsv")


class TestOntologicalFlag:
    def test_exact_title_company_true(self, ontology_file):
        store = load_ontology(ontology_file)
        titles = {0: "CareerBuilder", 1: "Apache Lucene"}
        assert ontological_flag(store, "careerbuilder", [hit(0), hit(1)], titles)

    def test_no_matching_title_false(self, ontology_file):
        store = load_ontology(ontology_file)
        titles = {0: "Java", 1: "Software developer"}
        assert not ontological_flag(store, "java developer", [hit(0), hit(1)], titles)

    def test_organisation_alone_never_true(self, ontology_file):
        store = load_ontology(ontology_file)
        titles = {0: "Athens College"}
        assert not ontological_flag(store, "athens college", [hit(0)], titles)

    def test_empty_hits_false(self, ontology_file):
        store = load_ontology(ontology_file)
        assert not ontological_flag(store, "careerbuilder", [], {})

    def test_monotone_in_store(self, ontology_file):
        store = load_ontology(ontology_file)
        titles = {0: "Nutonian"}
        assert not ontological_flag(store, "nutonian", [hit(0)], titles)
        store.add("Nutonian", "Company")
        assert ontological_flag(store, "nutonian", [hit(0)], titles)
        # adding more triples never flips true back to false
        store.add("Nutonian", "Organisation")
        assert ontological_flag(store, "nutonian", [hit(0)], titles)


@pytest.fixture
def lexicon_file(tmp_path):
    path = tmp_path / "lexicon.txt"
    path.write_text("director\ndeveloper\nNurse\nmanager\nnurse\n", encoding="utf-8")
    return path


class TestLexicon:
    def test_load_dedup_lowercase(self, lexicon_file):
        lex = load_lexicon(lexicon_file)
        assert len(lex) == 4
        assert "nurse" in lex and "Nurse" in lex

    def test_empty_file_fatal(self, tmp_path):
        path = tmp_path / "empty.txt"
        path.write_text("")
        with pytest.raises(ConfigError):
            load_lexicon(path)

    def test_unreadable_fatal(self, tmp_path):
        with pytest.raises(ConfigError):
            load_lexicon(tmp_path / "missing.txt")


class TestLexicalFlag:
    def test_agent_noun_present(self, lexicon_file):
        lex = load_lexicon(lexicon_file)
        assert lexical_flag(lex, "nurse assistant") is True

    def test_no_agent_noun(self, lexicon_file):
        lex = load_lexicon(lexicon_file)
        assert lexical_flag(lex, "staff") is False
        assert lexical_flag(lex, "adobe photoshop") is False

    def test_order_invariant(self, lexicon_file):
        lex = load_lexicon(lexicon_file)
        assert lexical_flag(lex, "assistant nurse") == lexical_flag(
            lex, "nurse assistant"
        )

    def test_empty_entity_invalid(self, lexicon_file):
        lex = load_lexicon(lexicon_file)
        with pytest.raises(ValueError):
            lexical_flag(lex, "   ")
