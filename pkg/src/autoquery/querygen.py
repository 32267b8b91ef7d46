"""Query generation over canonical objects.

Six techniques: journalist questions on objects, journalist questions
on object pairs, comparative adjectives, analogies, analogy
extensions, and correlations.  Generation is deterministic: object
order in, query order out, with ids derived from slots only.
"""

from __future__ import annotations

import dataclasses
import hashlib

from .errors import DataError, UsageError
from .lexicons import default_path, read_tsv
from .objects import OBJECT_TYPES

KINDS = (
    "ObjectJournalism",
    "PairJournalism",
    "Comparative",
    "Analogy",
    "AnalogyExtension",
    "Correlation",
)

INTERROGATIVES = ("Who", "What", "Why", "When", "Where", "How")

IRREGULAR_COMPARATIVES = frozenset({"better", "worse"})


@dataclasses.dataclass
class Query:
    query_id: str
    kind: str
    interrogative: str | None
    subject: str  # object_id
    object2: str | None
    verb: str | None
    adjective: str | None
    surface: str
    state: str = "Generated"
    reason: str | None = None  # set when state == "Pruned"


def query_id_for(kind, interrogative, subject, object2, verb, adjective) -> str:
    key = "|".join(
        [kind, interrogative or "", subject, object2 or "", verb or "", adjective or ""]
    )
    return hashlib.sha1(key.encode("utf-8")).hexdigest()[:16]


def _query(kind, interrogative, subject, object2, verb, adjective, surface) -> Query:
    return Query(
        query_id=query_id_for(kind, interrogative, subject, object2, verb, adjective),
        kind=kind,
        interrogative=interrogative,
        subject=subject,
        object2=object2,
        verb=verb,
        adjective=adjective,
        surface=surface,
    )


@dataclasses.dataclass(frozen=True)
class VerbEntry:
    lemma: str
    past: str
    subject_types: frozenset
    object_types: frozenset


@dataclasses.dataclass(frozen=True)
class ComparativeEntry:
    form: str
    types: frozenset
    cross_type: bool


def _parse_types(csv: str, where: str) -> frozenset:
    types = frozenset(t.strip() for t in csv.split(",") if t.strip())
    bad = types - set(OBJECT_TYPES)
    if bad:
        raise DataError(f"{where}: unknown object types {sorted(bad)}")
    if not types:
        raise DataError(f"{where}: empty type list")
    return types


def load_verbs(path=None) -> list[VerbEntry]:
    entries = []
    for row in read_tsv(path or default_path("verbs")):
        if len(row) < 4:
            raise DataError(f"verb row needs 4 columns: {row}")
        lemma, past = row[0], row[1]
        if not lemma or not past:
            raise DataError(f"verb forms must be nonempty: {row}")
        entries.append(
            VerbEntry(
                lemma=lemma,
                past=past,
                subject_types=_parse_types(row[2], f"verb {lemma!r}"),
                object_types=_parse_types(row[3], f"verb {lemma!r}"),
            )
        )
    return entries


def load_comparatives(path=None) -> list[ComparativeEntry]:
    entries = []
    for row in read_tsv(path or default_path("comparatives")):
        if len(row) < 3:
            raise DataError(f"comparative row needs 3 columns: {row}")
        form = row[0]
        if not form.endswith("er") and form not in IRREGULAR_COMPARATIVES:
            raise DataError(f"comparative {form!r} is not an -er form or irregular")
        if row[2] not in ("0", "1"):
            raise DataError(f"comparative {form!r}: cross_type must be 0 or 1")
        entries.append(
            ComparativeEntry(
                form=form,
                types=_parse_types(row[1], f"comparative {form!r}"),
                cross_type=row[2] == "1",
            )
        )
    return entries


def gen_object_queries(objects, tense: str = "past") -> list[Query]:
    """Six journalist questions per object."""
    copula = "is" if tense == "present" else "was"
    out = []
    for obj in objects:
        for interrogative in INTERROGATIVES:
            out.append(
                _query(
                    "ObjectJournalism",
                    interrogative,
                    obj.object_id,
                    None,
                    None,
                    None,
                    f"{interrogative} {copula} {obj.display()}?",
                )
            )
    return out


def pair_queries_for(a, b, verbs) -> list[Query]:
    """Pair templates for one ordered pair: When, Where, and per-verb
    Why/How.  Who/What pair templates are never emitted."""
    out = [
        _query(
            "PairJournalism",
            "When",
            a.object_id,
            b.object_id,
            None,
            None,
            f"Was {a.display()} after {b.display()}?",
        ),
        _query(
            "PairJournalism",
            "Where",
            a.object_id,
            b.object_id,
            None,
            None,
            f"Where is {a.display()} located relative to {b.display()}?",
        ),
    ]
    for verb in verbs:
        for interrogative in ("Why", "How"):
            out.append(
                _query(
                    "PairJournalism",
                    interrogative,
                    a.object_id,
                    b.object_id,
                    verb.lemma,
                    None,
                    f"{interrogative} did {a.display()} {verb.lemma} {b.display()}?",
                )
            )
    return out


def gen_pair_queries(objects, verbs) -> list[Query]:
    """When/Where plus per-verb Why/How questions on ordered pairs."""
    out = []
    for a in objects:
        for b in objects:
            if a.object_id == b.object_id:
                continue
            out.extend(pair_queries_for(a, b, verbs))
    return out


def comparative_allowed(type_a: str, type_b: str, adj: ComparativeEntry) -> bool:
    if type_a not in adj.types or type_b not in adj.types:
        return False
    return type_a == type_b or adj.cross_type


def comparative_queries_for(a, b, adjectives) -> list[Query]:
    out = []
    for adj in adjectives:
        if not comparative_allowed(a.object_type, b.object_type, adj):
            continue
        out.append(
            _query(
                "Comparative",
                None,
                a.object_id,
                b.object_id,
                None,
                adj.form,
                f"Is {a.display()} {adj.form} than {b.display()}?",
            )
        )
    return out


def gen_comparative_queries(objects, adjectives) -> list[Query]:
    out = []
    for a in objects:
        for b in objects:
            if a.object_id == b.object_id:
                continue
            out.extend(comparative_queries_for(a, b, adjectives))
    return out


def gen_analogy_queries(objects) -> list[Query]:
    out = []
    for obj in objects:
        wh = "Who" if obj.object_type == "Person" else "What"
        out.append(
            _query(
                "Analogy",
                None,
                obj.object_id,
                None,
                None,
                None,
                f"{wh} is most like {obj.display()}?",
            )
        )
    return out


def gen_analogy_extensions(analogy: Query, subject_obj, answer_obj) -> list[Query]:
    """Two follow-ups once an analogy has an accepted answer B."""
    if analogy.kind != "Analogy":
        raise UsageError("extensions require an Analogy query")
    if analogy.state != "Answered":
        raise UsageError(f"analogy {analogy.query_id} is not answered")
    a_id, b_id = analogy.subject, answer_obj.object_id
    return [
        _query(
            "AnalogyExtension",
            "Why",
            a_id,
            b_id,
            None,
            None,
            f"Why is {answer_obj.display()} most like {subject_obj.display()}?",
        ),
        _query(
            "AnalogyExtension",
            "What",
            a_id,
            b_id,
            None,
            None,
            "What is the evidence and reasoning for that choice?",
        ),
    ]


def gen_correlation_queries(objects) -> list[Query]:
    out = []
    for obj in objects:
        if not (obj.quantified or obj.object_type == "Concept"):
            continue
        out.append(
            _query(
                "Correlation",
                None,
                obj.object_id,
                None,
                None,
                None,
                f"What is most strongly correlated with {obj.display()}?",
            )
        )
    return out


TECHNIQUES = ("object", "pair", "comparative", "analogy", "correlation")


def generate(objects, verbs, adjectives, techniques=TECHNIQUES, tense="past") -> list[Query]:
    """Run the generation-stage techniques in a fixed order.

    Analogy extensions are not produced here; they require answered
    analogies and are emitted by the answering stage.
    """
    unknown = set(techniques) - set(TECHNIQUES)
    if unknown:
        raise UsageError(f"unknown techniques: {sorted(unknown)}")
    out = []
    if "object" in techniques:
        out.extend(gen_object_queries(objects, tense))
    if "pair" in techniques:
        out.extend(gen_pair_queries(objects, verbs))
    if "comparative" in techniques:
        out.extend(gen_comparative_queries(objects, adjectives))
    if "analogy" in techniques:
        out.extend(gen_analogy_queries(objects))
    if "correlation" in techniques:
        out.extend(gen_correlation_queries(objects))
    return out


def cap_queries(queries: list[Query], max_queries: int) -> list[Query]:
    """Deterministic truncation: keep the lowest query_ids."""
    if max_queries < 1:
        raise UsageError("max_queries must be >= 1")
    if len(queries) <= max_queries:
        return queries
    keep = set(sorted(q.query_id for q in queries)[:max_queries])
    return [q for q in queries if q.query_id in keep]
