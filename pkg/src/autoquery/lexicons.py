"""TSV lexicon loading: stopwords, closed-class tags, abbreviations.

All lexicon files share one shape: tab-separated columns, `#` comment
lines, blank lines ignored.  The first non-comment column is the term.
"""

from __future__ import annotations

import dataclasses
from pathlib import Path

from .errors import DataError

DATA_DIR = Path(__file__).resolve().parent / "data"

POS_TAGS = frozenset(
    {"DET", "ADJ", "NOUN", "PROPN", "VERB", "ADP", "PRON", "NUM", "OTHER"}
)


def read_tsv(path) -> list[list[str]]:
    """Parse a lexicon TSV into rows of stripped column values."""
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as e:
        raise DataError(f"cannot read lexicon {p}: {e}") from e
    rows = []
    for ln, line in enumerate(text.splitlines(), 1):
        line = line.rstrip("\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        cols = [c.strip() for c in line.split("\t")]
        if not cols[0]:
            raise DataError(f"{p}:{ln}: empty term column")
        rows.append(cols)
    return rows


def default_path(name: str) -> Path:
    return DATA_DIR / f"{name}.tsv"


@dataclasses.dataclass(frozen=True)
class Lexicons:
    """Bundle used by the tokenizer/tagger."""

    stopwords: frozenset
    closed_class: dict  # exact-case term -> POS tag
    abbreviations: frozenset  # lowercase, no trailing period
    propn_hints: frozenset  # lowercase terms likely to be proper nouns


def load_stopwords(path=None) -> frozenset:
    rows = read_tsv(path or default_path("stopwords"))
    return frozenset(r[0].lower() for r in rows)


def load_closed_class(path=None) -> dict:
    table = {}
    for r in read_tsv(path or default_path("closed_class")):
        if len(r) < 2:
            raise DataError(f"closed_class row needs a tag: {r}")
        term, tag = r[0], r[1]
        if tag not in POS_TAGS:
            raise DataError(f"unknown POS tag {tag!r} for {term!r}")
        table[term] = tag
    return table


def load_abbreviations(path=None) -> frozenset:
    rows = read_tsv(path or default_path("abbreviations"))
    return frozenset(r[0].lower().rstrip(".") for r in rows)


def propn_hints_from_gazetteer(path=None) -> frozenset:
    """Single-word title/person/location terms, lowercased.

    Used only to decide PROPN for sentence-initial capitalized words;
    full type classification reads the gazetteer separately.
    """
    hints = set()
    for r in read_tsv(path or default_path("gazetteer")):
        if len(r) >= 2 and r[1] in ("title", "person", "location"):
            term = r[0].lower()
            if " " not in term:
                hints.add(term)
    return frozenset(hints)


def load_lexicons(
    stopwords_path=None,
    closed_class_path=None,
    abbreviations_path=None,
    gazetteer_path=None,
) -> Lexicons:
    return Lexicons(
        stopwords=load_stopwords(stopwords_path),
        closed_class=load_closed_class(closed_class_path),
        abbreviations=load_abbreviations(abbreviations_path),
        propn_hints=propn_hints_from_gazetteer(gazetteer_path),
    )
