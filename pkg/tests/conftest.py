import pytest

from autoquery.ingest import analyze_corpus
from autoquery.lexicons import load_lexicons
from autoquery.objects import extract_objects, load_gazetteer
from autoquery.querygen import load_comparatives, load_verbs


@pytest.fixture(scope="session")
def lex():
    return load_lexicons()


@pytest.fixture(scope="session")
def gaz():
    return load_gazetteer()


@pytest.fixture(scope="session")
def verbs():
    return load_verbs()


@pytest.fixture(scope="session")
def adjectives():
    return load_comparatives()


def make_corpus(lex, corpus_id, text, doc_id="doc1"):
    """One-document corpus from raw text."""
    return analyze_corpus(corpus_id, [(doc_id, "", text)], lex)


def corpus_objects(lex, gaz, corpus_id, text):
    corpus = make_corpus(lex, corpus_id, text)
    return corpus, extract_objects([corpus], gaz)


@pytest.fixture(scope="session")
def grant_corpus(lex):
    return make_corpus(lex, "grant", "General Grant was in the US Civil War.")


@pytest.fixture(scope="session")
def grant_objects(grant_corpus, gaz):
    return extract_objects([grant_corpus], gaz)
