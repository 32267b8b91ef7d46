"""Corpus pairing: score each corpus pair by the usefulness of its
cross-corpus queries, then group corpora as connected components of
the thresholded pair graph (transitive closure)."""

from __future__ import annotations

import dataclasses
import itertools

from .answer import answer_query, build_index
from .errors import DataError
from .pruning import apply_rule_pruning
from .querygen import cap_queries, comparative_queries_for, pair_queries_for


@dataclasses.dataclass(frozen=True)
class PairScore:
    corpus_a: str  # unordered pair, stored sorted
    corpus_b: str
    generated: int
    useful: int
    u: float


def cross_queries(objects1, objects2, verbs, adjectives) -> list:
    """Pair and comparative queries across two object sets, both
    orders, deduplicated by query id."""
    out = []
    seen = set()
    pairs = itertools.chain(
        itertools.product(objects1, objects2), itertools.product(objects2, objects1)
    )
    for a, b in pairs:
        if a.object_id == b.object_id:
            continue
        for q in pair_queries_for(a, b, verbs) + comparative_queries_for(a, b, adjectives):
            if q.query_id in seen:
                continue
            seen.add(q.query_id)
            out.append(q)
    return out


def usefulness_score(
    corpus1,
    corpus2,
    objects1,
    objects2,
    verbs,
    adjectives,
    frames,
    adjectives_by_form,
    stopwords,
    theta: float,
    budget: int,
    topk: int = 5,
    index_corpora=None,
    table=None,
) -> PairScore:
    """u = useful / generated over budget-capped cross queries.

    Useful queries survive rule pruning and reach theta against the
    union index (or an explicit index corpus set).  Cross queries are
    pair/comparative only, so the object rule table is optional.
    """
    if budget < 1:
        raise DataError(f"budget must be >= 1, got {budget}")
    queries = cap_queries(
        cross_queries(objects1, objects2, verbs, adjectives), budget
    )
    generated = len(queries)
    objects_by_id = {o.object_id: o for o in objects1 + objects2}
    apply_rule_pruning(queries, objects_by_id, table, frames, adjectives_by_form)
    useful = 0
    if generated:
        index = build_index(index_corpora or [corpus1, corpus2])
        for q in queries:
            if q.state == "Pruned":
                continue
            cands = answer_query(q, index, objects_by_id, stopwords, k=topk)
            if cands and cands[0].confidence >= theta:
                useful += 1
    a, b = sorted((corpus1.corpus_id, corpus2.corpus_id))
    return PairScore(
        corpus_a=a,
        corpus_b=b,
        generated=generated,
        useful=useful,
        u=useful / generated if generated else 0.0,
    )


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def group_corpuses(scores, corpus_ids, tau: float) -> list[list[str]]:
    """Partition corpora into groups connected by u >= tau edges.

    scores must cover every unordered pair of corpus_ids.
    """
    by_pair = {}
    for s in scores:
        by_pair[(s.corpus_a, s.corpus_b)] = s
        by_pair[(s.corpus_b, s.corpus_a)] = s
    ids = sorted(set(corpus_ids))
    for a, b in itertools.combinations(ids, 2):
        if (a, b) not in by_pair:
            raise DataError(f"missing pair score for ({a}, {b})")
    uf = _UnionFind(ids)
    for a, b in itertools.combinations(ids, 2):
        if by_pair[(a, b)].u >= tau:
            uf.union(a, b)
    groups: dict[str, list] = {}
    for cid in ids:
        groups.setdefault(uf.find(cid), []).append(cid)
    return sorted(sorted(g) for g in groups.values())
