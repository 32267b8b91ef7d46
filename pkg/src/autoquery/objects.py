"""Object extraction: canonicalize NP chunks and classify each
canonical object as Person, Object, Location, or Concept."""

from __future__ import annotations

import dataclasses
import hashlib

from .errors import DataError
from .ingest import Corpus, Sentence, lemmatize_noun, np_chunks
from .lexicons import default_path, read_tsv

OBJECT_TYPES = ("Person", "Object", "Location", "Concept")
ARTICLES = ("the", "a", "an")

GAZETTEER_CATEGORIES = (
    "title",
    "person",
    "location",
    "location_suffix",
    "concept",
    "concept_suffix",
    "quantified",
)


@dataclasses.dataclass(frozen=True)
class ObjectMention:
    sent_id: tuple  # (corpus_id, doc_id, sentence index)
    span: tuple  # char offsets into the document text
    surface: str


@dataclasses.dataclass
class CanonicalObject:
    object_id: str
    canonical: str
    object_type: str
    mention_count: int
    quantified: bool
    article: str | None = None
    mentions: list = dataclasses.field(default_factory=list)

    def display(self) -> str:
        """Surface form used in realized queries."""
        if self.article:
            return f"{self.article} {self.canonical}"
        return self.canonical


@dataclasses.dataclass(frozen=True)
class TypeGazetteer:
    person_titles: frozenset
    person_names: frozenset
    location_terms: frozenset
    location_suffixes: frozenset
    concept_terms: frozenset
    concept_suffixes: frozenset
    quantified_terms: frozenset


def load_gazetteer(path=None) -> TypeGazetteer:
    sets = {cat: set() for cat in GAZETTEER_CATEGORIES}
    for row in read_tsv(path or default_path("gazetteer")):
        if len(row) < 2:
            raise DataError(f"gazetteer row needs a category: {row}")
        term, cat = row[0], row[1]
        if cat not in sets:
            raise DataError(f"unknown gazetteer category {cat!r}")
        if cat != "title" and term != term.lower():
            raise DataError(f"gazetteer term {term!r} must be lowercase")
        sets[cat].add(term.lower())
    cats = list(sets)
    for i, a in enumerate(cats):
        for b in cats[i + 1 :]:
            overlap = sets[a] & sets[b]
            if overlap:
                raise DataError(
                    f"gazetteer categories {a}/{b} overlap: {sorted(overlap)}"
                )
    return TypeGazetteer(
        person_titles=frozenset(sets["title"]),
        person_names=frozenset(sets["person"]),
        location_terms=frozenset(sets["location"]),
        location_suffixes=frozenset(sets["location_suffix"]),
        concept_terms=frozenset(sets["concept"]),
        concept_suffixes=frozenset(sets["concept_suffix"]),
        quantified_terms=frozenset(sets["quantified"]),
    )


def object_id_for(canonical: str) -> str:
    return hashlib.sha1(canonical.encode("utf-8")).hexdigest()[:16]


def canonicalize_chunk(tokens) -> tuple[str, str | None]:
    """Canonical form of an NP chunk plus its stripped article.

    Leading determiner dropped, head noun singularized, PROPN casing
    preserved, everything else lowercased.
    """
    toks = list(tokens)
    article = None
    if toks and toks[0].pos == "DET":
        det = toks[0].lemma.lower()
        if det in ARTICLES:
            article = det
        toks = toks[1:]
    if not toks:
        return "", None
    parts = []
    for i, tok in enumerate(toks):
        lem = tok.lemma if tok.pos == "PROPN" else tok.lemma.lower()
        if i == len(toks) - 1 and tok.pos == "NOUN":
            lem = lemmatize_noun(lem)
        parts.append(lem)
    return " ".join(parts), article


def _suffix_hit(head: str, suffixes) -> bool:
    return any(head.endswith(suf) and len(head) > len(suf) for suf in suffixes)


def classify_type(canonical: str, gaz: TypeGazetteer) -> str:
    """Deterministic type priority: Person, Location, Concept, Object."""
    tokens = canonical.split()
    if not tokens:
        return "Object"
    lower = [t.lower() for t in tokens]
    head = lower[-1]
    whole = " ".join(lower)
    if lower[0] in gaz.person_titles or any(t in gaz.person_names for t in lower):
        return "Person"
    if (
        whole in gaz.location_terms
        or head in gaz.location_terms
        or _suffix_hit(head, gaz.location_suffixes)
    ):
        return "Location"
    if (
        whole in gaz.concept_terms
        or head in gaz.concept_terms
        or _suffix_hit(head, gaz.concept_suffixes)
    ):
        return "Concept"
    if len(tokens) > 1 and all(t[0].isupper() for t in tokens):
        return "Person"
    return "Object"


def is_quantified(canonical: str, object_type: str, gaz: TypeGazetteer) -> bool:
    tokens = [t.lower() for t in canonical.split()]
    if not tokens:
        return False
    whole = " ".join(tokens)
    return (
        object_type == "Concept"
        or tokens[-1] in gaz.quantified_terms
        or whole in gaz.quantified_terms
    )


def _pick_article(votes: list) -> str | None:
    # majority wins; ties prefer the > a > an > bare
    order = {"the": 0, "a": 1, "an": 2, None: 3}
    counts = {}
    for v in votes:
        counts[v] = counts.get(v, 0) + 1
    return min(counts, key=lambda v: (-counts[v], order[v]))


def extract_objects(corpora, gaz: TypeGazetteer) -> list[CanonicalObject]:
    """Collect canonical objects with mention links from one corpus or
    a list of corpora.  Output sorted by canonical form."""
    if isinstance(corpora, Corpus):
        corpora = [corpora]
    grouped: dict[str, dict] = {}
    for corpus in corpora:
        for sent in corpus.sentences():
            _collect_sentence(corpus.corpus_id, sent, grouped)
    out = []
    for canonical in sorted(grouped):
        g = grouped[canonical]
        otype = classify_type(canonical, gaz)
        out.append(
            CanonicalObject(
                object_id=object_id_for(canonical),
                canonical=canonical,
                object_type=otype,
                mention_count=len(g["mentions"]),
                quantified=is_quantified(canonical, otype, gaz),
                article=_pick_article(g["articles"]),
                mentions=g["mentions"],
            )
        )
    return out


def _collect_sentence(corpus_id: str, sent: Sentence, grouped: dict) -> None:
    for i, k in np_chunks(sent):
        toks = sent.tokens[i:k]
        canonical, article = canonicalize_chunk(toks)
        if not canonical:
            continue
        start, end = toks[0].start, toks[-1].end
        mention = ObjectMention(
            sent_id=(corpus_id,) + sent.sent_id,
            span=(start, end),
            surface=sent.text[start - sent.start : end - sent.start],
        )
        g = grouped.setdefault(canonical, {"mentions": [], "articles": []})
        g["mentions"].append(mention)
        g["articles"].append(article)


def slot_terms(canonical: str, stopwords) -> list[str]:
    """Content lemmas of a canonical form, for retrieval scoring.

    Cased tokens (preserved PROPN) bypass the stopword list the same
    way PROPN tokens do at indexing time.
    """
    seen = []
    for tok in canonical.split():
        if tok.islower() and tok in stopwords:
            continue
        lem = tok.lower()
        if lem not in seen:
            seen.append(lem)
    return seen
