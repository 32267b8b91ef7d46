"""Baseline corpus answering.

Journalism, comparative, and analogy-extension queries are answered by
sentence retrieval: confidence is |Q cap S| / sqrt(|Q| * |S|) over
content-lemma sets.  Analogy and correlation queries are answered by a
PPMI co-occurrence model over object contexts (cosine similarity,
nearest neighbors with a reverse check, phi-coefficient correlation
over sentence incidence).
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np

from . import kernels
from .errors import DataError, UsageError
from .ingest import content_lemma
from .objects import slot_terms

RETRIEVAL_KINDS = (
    "ObjectJournalism",
    "PairJournalism",
    "Comparative",
    "AnalogyExtension",
)


@dataclasses.dataclass(frozen=True)
class AnswerCandidate:
    sent_ref: tuple  # (corpus_id, doc_id, sentence index)
    confidence: float
    matched: tuple  # query lemmas found in the sentence
    text: str


def sentence_content_lemmas(sentence) -> set:
    return {content_lemma(t) for t in sentence.tokens if not t.is_stopword}


class SentenceIndex:
    """Immutable retrieval index over the sentences of some corpora."""

    def __init__(self, corpora):
        self.refs = []
        self.texts = []
        sets = []
        for corpus in corpora:
            for sent in corpus.sentences():
                self.refs.append((corpus.corpus_id, sent.doc_id, sent.index))
                self.texts.append(sent.text)
                sets.append(sorted(sentence_content_lemmas(sent)))
        terms = sorted({lem for s in sets for lem in s})
        self.vocab = {lem: i for i, lem in enumerate(terms)}
        indptr = [0]
        flat = []
        for s in sets:
            # lemma-sorted within a sentence is id-sorted: ids follow
            # the global lexicographic order
            flat.extend(self.vocab[lem] for lem in s)
            indptr.append(len(flat))
        self.indptr = np.asarray(indptr, dtype=np.int64)
        self.ids = np.asarray(flat, dtype=np.int32)
        self.lemma_sets = [frozenset(s) for s in sets]

    def __len__(self):
        return len(self.refs)


def build_index(corpora) -> SentenceIndex:
    return SentenceIndex(corpora)


def query_terms(q, objects_by_id: dict, stopwords) -> list[str]:
    """Content lemmas of a query's slots, deduplicated in slot order."""
    terms = []

    def add(values):
        for v in values:
            if v not in terms:
                terms.append(v)

    for oid in (q.subject, q.object2):
        if not oid:
            continue
        try:
            obj = objects_by_id[oid]
        except KeyError:
            raise DataError(f"unknown object_id {oid!r}") from None
        add(slot_terms(obj.canonical, stopwords))
    if q.verb:
        add([q.verb.lower()])
    if q.adjective:
        add([q.adjective.lower()])
    return terms


def answer_query(q, index: SentenceIndex, objects_by_id, stopwords, k: int = 5):
    """Top-k evidence sentences by overlap confidence.

    Ties break by (doc_id, sentence index); zero-confidence sentences
    are never candidates.
    """
    if k < 1:
        raise UsageError(f"k must be >= 1, got {k}")
    terms = query_terms(q, objects_by_id, stopwords)
    qsize = len(terms)
    if qsize == 0 or len(index) == 0:
        return []
    qids = sorted(index.vocab[t] for t in set(terms) if t in index.vocab)
    if not qids:
        return []
    conf = kernels.score_overlap(
        np.asarray(qids, dtype=np.int32), index.indptr, index.ids, qsize
    )
    hits = np.nonzero(conf)[0]
    ranked = sorted(
        (int(i) for i in hits),
        key=lambda i: (-conf[i], index.refs[i][1], index.refs[i][2], index.refs[i][0]),
    )
    qset = set(terms)
    out = []
    for i in ranked[:k]:
        out.append(
            AnswerCandidate(
                sent_ref=index.refs[i],
                confidence=float(conf[i]),
                matched=tuple(sorted(qset & index.lemma_sets[i])),
                text=index.texts[i],
            )
        )
    return out


class CooccurrenceModel:
    """PPMI-weighted object-by-context matrix plus sentence incidence."""

    def __init__(
        self,
        object_ids,
        canonicals,
        indptr,
        indices,
        data,
        norms,
        inc_indptr,
        inc_indices,
        inc_sets,
        n_sentences,
    ):
        self.object_ids = object_ids
        self.canonicals = canonicals
        self.rows = {oid: i for i, oid in enumerate(object_ids)}
        self.indptr = indptr
        self.indices = indices
        self.data = data
        self.norms = norms
        self.inc_indptr = inc_indptr
        self.inc_indices = inc_indices
        self.inc_sets = inc_sets
        self.n_sentences = n_sentences

    def __contains__(self, object_id):
        return object_id in self.rows

    def require(self, object_id) -> int:
        try:
            return self.rows[object_id]
        except KeyError:
            raise DataError(f"object {object_id!r} absent from model") from None


def build_cooccurrence_model(corpora, objects, min_count: int = 2) -> CooccurrenceModel:
    """Count object/lemma co-occurrence per sentence and weight by PPMI.

    Context lemmas are the sentence's content tokens outside the
    mention span.  Objects below min_count, or with no contexts at
    all, stay out of the vocabulary.
    """
    if min_count < 1:
        raise UsageError(f"min_count must be >= 1, got {min_count}")
    sent_ord = {}
    sent_tokens = []
    for corpus in corpora:
        for sent in corpus.sentences():
            sent_ord[(corpus.corpus_id, sent.doc_id, sent.index)] = len(sent_tokens)
            sent_tokens.append(
                [
                    (content_lemma(t), t.start, t.end)
                    for t in sent.tokens
                    if not t.is_stopword
                ]
            )

    rows = []
    counts = []
    incidence = []
    for obj in objects:
        if obj.mention_count < min_count:
            continue
        ctx: dict[str, int] = {}
        inc = set()
        for m in obj.mentions:
            if m.sent_id not in sent_ord:
                raise DataError(f"mention of {obj.canonical!r} outside model corpora")
            o = sent_ord[m.sent_id]
            inc.add(o)
            for lem, s, e in sent_tokens[o]:
                if s >= m.span[0] and e <= m.span[1]:
                    continue
                ctx[lem] = ctx.get(lem, 0) + 1
        if not ctx:
            continue
        rows.append(obj)
        counts.append(ctx)
        incidence.append(frozenset(inc))

    col_tot: dict[str, int] = {}
    row_tot = []
    for ctx in counts:
        row_tot.append(sum(ctx.values()))
        for lem, n in ctx.items():
            col_tot[lem] = col_tot.get(lem, 0) + n
    total = sum(row_tot)
    ctx_ids = {lem: i for i, lem in enumerate(sorted(col_tot))}

    indptr = [0]
    indices = []
    data = []
    norms = []
    for ctx, rtot in zip(counts, row_tot):
        acc = 0.0
        for lem in sorted(ctx, key=lambda x: ctx_ids[x]):
            ratio = (ctx[lem] * total) / (rtot * col_tot[lem])
            if ratio <= 1.0:
                continue
            w = math.log(ratio)
            indices.append(ctx_ids[lem])
            data.append(w)
            acc += w * w
        indptr.append(len(indices))
        norms.append(math.sqrt(acc))

    inc_indptr = [0]
    inc_indices = []
    for inc in incidence:
        inc_indices.extend(sorted(inc))
        inc_indptr.append(len(inc_indices))

    return CooccurrenceModel(
        object_ids=[o.object_id for o in rows],
        canonicals=[o.canonical for o in rows],
        indptr=np.asarray(indptr, dtype=np.int64),
        indices=np.asarray(indices, dtype=np.int32),
        data=np.asarray(data, dtype=np.float64),
        norms=np.asarray(norms, dtype=np.float64),
        inc_indptr=np.asarray(inc_indptr, dtype=np.int64),
        inc_indices=np.asarray(inc_indices, dtype=np.int32),
        inc_sets=incidence,
        n_sentences=len(sent_tokens),
    )


def _cosines(m: CooccurrenceModel, row: int):
    return kernels.cosine_one_vs_all(m.indptr, m.indices, m.data, m.norms, row)


def similarity(a: str, b: str, m: CooccurrenceModel) -> float:
    ra = m.require(a)
    rb = m.require(b)
    if ra == rb:
        return 1.0 if m.norms[ra] > 0.0 else 0.0
    return float(_cosines(m, ra)[rb])


def nearest(a: str, m: CooccurrenceModel, k: int) -> list[tuple[str, float]]:
    """Top-k most similar objects to a, self excluded; similarity ties
    break on canonical form."""
    if k < 1:
        raise UsageError(f"k must be >= 1, got {k}")
    ra = m.require(a)
    cos = _cosines(m, ra)
    ranked = sorted(
        (j for j in range(len(m.object_ids)) if j != ra),
        key=lambda j: (-cos[j], m.canonicals[j]),
    )
    return [(m.object_ids[j], float(cos[j])) for j in ranked[:k]]


def reverse_check(a: str, b: str, m: CooccurrenceModel, k: int) -> bool:
    """True when a appears among b's k nearest analogues."""
    return any(oid == a for oid, _ in nearest(b, m, k))


def correlate(a: str, m: CooccurrenceModel, eligible_ids) -> list[tuple[str, float]]:
    """Phi coefficient of a against every other eligible object.

    Computed over the 2x2 sentence-incidence contingency table; pairs
    with a zero marginal are skipped.
    """
    if a not in eligible_ids:
        raise UsageError(f"object {a!r} not eligible for correlation")
    ra = m.require(a)
    n11s = kernels.intersect_one_vs_all(m.inc_indptr, m.inc_indices, ra)
    n = m.n_sentences
    n1x = len(m.inc_sets[ra])
    n0x = n - n1x
    out = []
    for j, oid in enumerate(m.object_ids):
        if j == ra or oid not in eligible_ids:
            continue
        nx1 = len(m.inc_sets[j])
        nx0 = n - nx1
        if n1x == 0 or n0x == 0 or nx1 == 0 or nx0 == 0:
            continue
        n11 = int(n11s[j])
        n10 = n1x - n11
        n01 = nx1 - n11
        n00 = n - n11 - n10 - n01
        phi = (n11 * n00 - n10 * n01) / math.sqrt(float(n1x * n0x * nx1 * nx0))
        out.append((oid, phi))
    out.sort(key=lambda p: (-p[1], m.canonicals[m.rows[p[0]]]))
    return out
