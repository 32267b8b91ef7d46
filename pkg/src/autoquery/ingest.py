"""Corpus loading: sentence segmentation, tokenization, POS tagging,
and noun-phrase chunking.

The tagger is a closed-class lexicon plus suffix rules; the chunker
matches DET? ADJ* (NOUN|PROPN)+ spans.  Everything here is pure and
deterministic so downstream stages can re-derive analyses from raw
text.
"""

from __future__ import annotations

import dataclasses
import json
import re
from pathlib import Path

from .errors import DataError
from .lexicons import Lexicons

# Words and numbers only; hyphens/apostrophes join only between
# alphanumerics, so punctuation stays in the gaps between tokens.
TOKEN_RE = re.compile(r"[A-Za-z0-9]+(?:['\-][A-Za-z0-9]+)*")
DIGIT_RE = re.compile(r"^[0-9][0-9,.\-]*$")

# Candidate sentence break: terminal run, whitespace, then an
# uppercase letter or an opening quote before one.
BREAK_RE = re.compile(r"([.?!]+)(\s+)(?=[\"'(]?[A-Z])")
WORD_BEFORE_RE = re.compile(r"([A-Za-z0-9'\-]+)$")


@dataclasses.dataclass(frozen=True)
class Token:
    surface: str
    lemma: str
    pos: str
    is_stopword: bool
    start: int  # char offset into the document text
    end: int


@dataclasses.dataclass
class Sentence:
    doc_id: str
    index: int
    start: int
    end: int
    text: str
    tokens: list

    @property
    def sent_id(self):
        return (self.doc_id, self.index)


@dataclasses.dataclass
class Document:
    doc_id: str
    title: str
    text: str
    sentences: list


@dataclasses.dataclass
class Corpus:
    corpus_id: str
    documents: list

    def sentences(self):
        for doc in self.documents:
            yield from doc.sentences


PLURAL_EXCEPTIONS = {
    "men": "man",
    "women": "woman",
    "children": "child",
    "people": "person",
    "feet": "foot",
    "teeth": "tooth",
    "mice": "mouse",
    "geese": "goose",
    "wives": "wife",
    "knives": "knife",
    "lives": "life",
    "leaves": "leaf",
    "wolves": "wolf",
    "halves": "half",
    "shelves": "shelf",
    "thieves": "thief",
    "crises": "crisis",
    "analyses": "analysis",
}

INVARIANT_NOUNS = frozenset(
    {
        "series",
        "species",
        "news",
        "physics",
        "mathematics",
        "economics",
        "politics",
        "ethics",
        "means",
        "deer",
        "sheep",
        "fish",
    }
)


def lemmatize_noun(word: str) -> str:
    """Singularize a lowercase noun with a small exception list."""
    w = word
    if w in PLURAL_EXCEPTIONS:
        return PLURAL_EXCEPTIONS[w]
    if w in INVARIANT_NOUNS:
        return w
    if w.endswith("ies") and len(w) > 4:
        return w[:-3] + "y"
    if w.endswith("es") and len(w) > 3 and (w[-3] in "sxz" or w[-4:-2] in ("ch", "sh")):
        return w[:-2]
    if (
        w.endswith("s")
        and len(w) > 3
        and not w.endswith("ss")
        and not w.endswith("us")
        and not w.endswith("is")
    ):
        return w[:-1]
    return w


def content_lemma(tok: Token) -> str:
    """Normalized lemma used for indexing and co-occurrence contexts."""
    lem = tok.lemma.lower()
    if tok.pos == "NOUN":
        lem = lemmatize_noun(lem)
    return lem


def _suffix_tag(word: str):
    w = word.lower()
    if w.endswith("ly") and len(w) >= 5:
        return "OTHER"
    if w.endswith("ing") and len(w) >= 5:
        return "VERB"
    if w.endswith("ed") and len(w) >= 5:
        return "VERB"
    if w.endswith("tion") and len(w) >= 6:
        return "NOUN"
    if w.endswith("ism") and len(w) >= 5:
        return "NOUN"
    if w.endswith("ness") and len(w) >= 6:
        return "NOUN"
    if w.endswith("ity") and len(w) >= 5:
        return "NOUN"
    return None


def _tag(surface: str, first: bool, next_capitalized: bool, lex: Lexicons) -> str:
    if DIGIT_RE.match(surface):
        return "NUM"
    # exact-case lookup first so capitalized forms like "US" are not
    # swallowed by lowercase closed-class entries
    tag = lex.closed_class.get(surface)
    if tag:
        return tag
    capitalized = surface[0].isupper()
    if capitalized and not first:
        return "PROPN"
    if capitalized and first:
        tag = lex.closed_class.get(surface.lower())
        if tag:
            return tag
        if surface.lower() in lex.propn_hints or next_capitalized:
            return "PROPN"
    return _suffix_tag(surface) or "NOUN"


def _lemma_of(surface: str, pos: str) -> str:
    base = surface
    if len(base) > 2 and base.lower().endswith("'s"):
        base = base[:-2]
    if pos == "PROPN":
        return base
    return base.lower()


def _analyze_span(doc_id, index, start, end, text, lex: Lexicons) -> Sentence:
    raw = [(m.group(0), start + m.start(), start + m.end()) for m in TOKEN_RE.finditer(text)]
    tokens = []
    for i, (surface, s, e) in enumerate(raw):
        next_cap = i + 1 < len(raw) and raw[i + 1][0][0].isupper()
        pos = _tag(surface, i == 0, next_cap, lex)
        lemma = _lemma_of(surface, pos)
        stop = lemma.lower() in lex.stopwords and pos != "PROPN"
        tokens.append(Token(surface, lemma, pos, stop, s, e))
    return Sentence(doc_id, index, start, end, text, tokens)


def analyze_sentence(text: str, lex: Lexicons, doc_id: str = "", index: int = 0) -> Sentence:
    if not text.strip():
        raise DataError("empty sentence text")
    return _analyze_span(doc_id, index, 0, len(text), text, lex)


def _is_abbreviation(text: str, punct_start: int, lex: Lexicons) -> bool:
    m = WORD_BEFORE_RE.search(text[:punct_start])
    if not m:
        return False
    word = m.group(1)
    if len(word) == 1 and word.isalpha():
        return True  # initials like "E. B. White"
    return word.lower() in lex.abbreviations


def split_sentences(text: str, lex: Lexicons) -> list[tuple[int, int]]:
    """Return (start, end) spans of sentences within text."""
    spans = []
    pos = 0
    n = len(text)
    for m in BREAK_RE.finditer(text):
        if _is_abbreviation(text, m.start(1), lex):
            continue
        start = pos
        end = m.end(1)  # include the terminal punctuation, not the gap
        if text[start:end].strip():
            while start < end and text[start].isspace():
                start += 1
            spans.append((start, end))
        pos = m.end(2)
    if text[pos:].strip():
        start = pos
        while start < n and text[start].isspace():
            start += 1
        end = n
        while end > start and text[end - 1].isspace():
            end -= 1
        spans.append((start, end))
    return spans


def analyze_document(doc_id: str, title: str, text: str, lex: Lexicons) -> Document:
    sentences = []
    for i, (s, e) in enumerate(split_sentences(text, lex)):
        sentences.append(_analyze_span(doc_id, i, s, e, text[s:e], lex))
    return Document(doc_id, title, text, sentences)


def analyze_corpus(corpus_id: str, documents: list, lex: Lexicons) -> Corpus:
    """documents: list of (doc_id, title, text) triples."""
    seen = set()
    docs = []
    for doc_id, title, text in documents:
        if doc_id in seen:
            raise DataError(f"duplicate doc_id {doc_id!r} in corpus {corpus_id!r}")
        seen.add(doc_id)
        if not text.strip():
            raise DataError(f"document {doc_id!r} has empty text")
        docs.append(analyze_document(doc_id, title, text, lex))
    corpus = Corpus(corpus_id, docs)
    if not any(True for _ in corpus.sentences()):
        raise DataError(f"empty corpus {corpus_id!r}")
    return corpus


def read_corpus_file(path) -> list:
    """Read raw documents from a corpus file.

    JSONL files (suffix .jsonl) hold {"doc_id", "title", "text"}
    records, one per line; any other file is one plain-text document.
    Returns (doc_id, title, text) triples.
    """
    p = Path(path)
    try:
        raw = p.read_text(encoding="utf-8")
    except OSError as e:
        raise DataError(f"cannot read corpus file {p}: {e}") from e
    if p.suffix == ".jsonl":
        docs = []
        for ln, line in enumerate(raw.splitlines(), 1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as e:
                raise DataError(f"{p}:{ln}: malformed JSONL record: {e}") from e
            if not isinstance(rec, dict) or "doc_id" not in rec or "text" not in rec:
                raise DataError(f"{p}:{ln}: record needs doc_id and text")
            docs.append((str(rec["doc_id"]), str(rec.get("title", "")), str(rec["text"])))
        if not docs:
            raise DataError(f"empty corpus file {p}")
        return docs
    if not raw.strip():
        raise DataError(f"empty corpus file {p}")
    return [(p.stem, "", raw)]


def ingest_corpus(path, corpus_id: str, lex: Lexicons) -> Corpus:
    if not corpus_id:
        raise DataError("corpus_id must be nonempty")
    return analyze_corpus(corpus_id, read_corpus_file(path), lex)


def np_chunks(sentence: Sentence) -> list[tuple[int, int]]:
    """Maximal DET? ADJ* (NOUN|PROPN)+ token spans, left to right."""
    tags = [t.pos for t in sentence.tokens]
    n = len(tags)
    chunks = []
    i = 0
    while i < n:
        j = i
        if tags[j] == "DET":
            j += 1
        while j < n and tags[j] == "ADJ":
            j += 1
        k = j
        while k < n and tags[k] in ("NOUN", "PROPN"):
            k += 1
        if k > j:
            chunks.append((i, k))
            i = k
        else:
            i += 1
    return chunks


def corpus_tense(corpora) -> str:
    """Crude corpus-level copula tense: "present" only when is/are
    occurrences outnumber was/were."""
    present = past = 0
    for corpus in corpora:
        for sent in corpus.sentences():
            for tok in sent.tokens:
                lem = tok.lemma.lower()
                if lem in ("is", "are"):
                    present += 1
                elif lem in ("was", "were"):
                    past += 1
    return "present" if present > past else "past"
