"""Rule-table and confidence-based pruning.

Two rule layers: an interrogative x object-type table for single-object
questions, and a per-verb frame table for Why/How pair questions (the
How decision always mirrors Why).  Confidence pruning marks queries
Nonsense when every answer comes back weak, and a history ledger tracks
nonsense/non-nonsense flips over time.
"""

from __future__ import annotations

import json

from .errors import DataError, UsageError
from .lexicons import default_path, read_tsv
from .objects import OBJECT_TYPES
from .querygen import INTERROGATIVES, Query, comparative_allowed

KEEP = "keep"
PRUNE = "prune"


class PruneRuleTable:
    """The 24-cell (interrogative, object type) rule table."""

    def __init__(self, cells: dict):
        expected = {(i, t) for i in INTERROGATIVES for t in OBJECT_TYPES}
        if set(cells) != expected:
            missing = sorted(expected - set(cells))
            extra = sorted(set(cells) - expected)
            raise DataError(f"rule table must cover all 24 cells; missing={missing} extra={extra}")
        for cell, decision in cells.items():
            if decision not in (KEEP, PRUNE):
                raise DataError(f"rule cell {cell}: decision must be keep|prune")
        self.cells = dict(cells)

    def decision(self, interrogative: str, object_type: str) -> str:
        return self.cells[(interrogative, object_type)]

    def prune_cells(self) -> set:
        return {c for c, d in self.cells.items() if d == PRUNE}


def load_prune_rules(path=None) -> PruneRuleTable:
    cells = {}
    for row in read_tsv(path or default_path("prune_rules")):
        if len(row) < 3:
            raise DataError(f"rule row needs 3 columns: {row}")
        key = (row[0], row[1])
        if key in cells:
            raise DataError(f"duplicate rule cell {key}")
        cells[key] = row[2]
    return PruneRuleTable(cells)


class VerbFrameTable:
    """Allowed (subject type, object type) pairs per verb."""

    def __init__(self, allowed: dict):
        for verb, pairs in allowed.items():
            for s, o in pairs:
                if s not in OBJECT_TYPES or o not in OBJECT_TYPES:
                    raise DataError(f"frame for {verb!r} references unknown type ({s},{o})")
        self.allowed = {v: frozenset(p) for v, p in allowed.items()}

    def __contains__(self, verb):
        return verb in self.allowed

    def keeps(self, verb: str, subject_type: str, object_type: str) -> bool:
        if verb not in self.allowed:
            raise DataError(f"verb {verb!r} missing from frame table")
        return (subject_type, object_type) in self.allowed[verb]


def load_verb_frames(path=None) -> VerbFrameTable:
    allowed: dict = {}
    seen: dict = {}
    for row in read_tsv(path or default_path("verb_frames")):
        if len(row) < 4:
            raise DataError(f"frame row needs 4 columns: {row}")
        verb, s, o, decision = row[0], row[1], row[2], row[3]
        if decision not in (KEEP, PRUNE):
            raise DataError(f"frame {verb}/{s}/{o}: decision must be keep|prune")
        seen.setdefault(verb, set())
        if (s, o) in seen[verb]:
            raise DataError(f"duplicate frame row {verb}/{s}/{o}")
        seen[verb].add((s, o))
        allowed.setdefault(verb, set())
        if decision == KEEP:
            allowed[verb].add((s, o))
    full = {(s, o) for s in OBJECT_TYPES for o in OBJECT_TYPES}
    for verb, cells in seen.items():
        if cells != full:
            raise DataError(f"verb {verb!r} frame grid incomplete: {len(cells)}/16 rows")
    return VerbFrameTable(allowed)


def _object_type(object_id: str, objects_by_id: dict) -> str:
    try:
        return objects_by_id[object_id].object_type
    except KeyError:
        raise DataError(f"unknown object_id {object_id!r}") from None


def prune_interrogative_type(q: Query, objects_by_id: dict, table: PruneRuleTable):
    """Decision for a single-object journalist question.

    Returns (decision, reason); reason identifies the rule cell.
    """
    if q.kind != "ObjectJournalism":
        raise UsageError("interrogative/type rules apply to ObjectJournalism only")
    otype = _object_type(q.subject, objects_by_id)
    decision = table.decision(q.interrogative, otype)
    return decision, f"{q.interrogative}:{otype}"


def prune_pair_frame(q: Query, objects_by_id: dict, frames: VerbFrameTable):
    if q.kind != "PairJournalism" or not q.verb:
        raise UsageError("frame rules apply to verbed PairJournalism queries only")
    s = _object_type(q.subject, objects_by_id)
    o = _object_type(q.object2, objects_by_id)
    decision = KEEP if frames.keeps(q.verb, s, o) else PRUNE
    return decision, f"{q.verb}:{s}:{o}"


def prune_comparative_types(q: Query, objects_by_id: dict, adjectives_by_form: dict):
    """Re-check the adjective type constraint (tolerates lexicons
    looser than the generator's)."""
    if q.kind != "Comparative":
        raise UsageError("comparative type check applies to Comparative queries only")
    adj = adjectives_by_form.get(q.adjective)
    if adj is None:
        raise DataError(f"adjective {q.adjective!r} missing from comparative lexicon")
    s = _object_type(q.subject, objects_by_id)
    o = _object_type(q.object2, objects_by_id)
    decision = KEEP if comparative_allowed(s, o, adj) else PRUNE
    return decision, f"{q.adjective}:{s}:{o}"


def apply_rule_pruning(queries, objects_by_id, table, frames, adjectives_by_form) -> dict:
    """Mark rule-pruned queries in place; returns per-rule-layer counts.

    Only state/reason change; surfaces and ids never do.  When/Where
    pair templates are always kept.
    """
    counts = {"object_rules": 0, "frame_rules": 0, "comparative_rules": 0}
    for q in queries:
        if q.state != "Generated":
            continue
        if q.kind == "ObjectJournalism":
            decision, reason = prune_interrogative_type(q, objects_by_id, table)
            key = "object_rules"
        elif q.kind == "PairJournalism" and q.verb:
            decision, reason = prune_pair_frame(q, objects_by_id, frames)
            key = "frame_rules"
        elif q.kind == "Comparative":
            decision, reason = prune_comparative_types(q, objects_by_id, adjectives_by_form)
            key = "comparative_rules"
        else:
            continue
        if decision == PRUNE:
            q.state = "Pruned"
            q.reason = reason
            counts[key] += 1
    return counts


def prune_by_confidence(q: Query, candidates, theta: float):
    """Nonsense decision from answer confidences.

    Returns (decision, max_conf) where decision is "nonsense" or
    "keep"; empty candidate lists are vacuously low-confidence.
    """
    if not 0.0 <= theta <= 1.0:
        raise UsageError(f"theta must be in [0,1], got {theta}")
    if q.state == "Pruned":
        raise UsageError("confidence pruning does not apply to rule-pruned queries")
    max_conf = max((c.confidence for c in candidates), default=0.0)
    if not candidates or max_conf < theta:
        return "nonsense", max_conf
    return KEEP, max_conf


class NonsenseHistory:
    """Per-query ledger of nonsense/non-nonsense classifications.

    A record is appended only when a query's classification changes,
    so re-running a stage on unchanged inputs appends nothing.  The
    per-query timestamp is the record's ordinal, strictly increasing.
    """

    def __init__(self):
        self.records: dict[str, list] = {}

    def record(self, query_id: str, nonsense: bool, max_conf: float) -> bool:
        """Returns True when a new record was appended."""
        cls = "nonsense" if nonsense else "non-nonsense"
        trail = self.records.setdefault(query_id, [])
        if trail and trail[-1][1] == cls:
            return False
        trail.append((len(trail), cls, max_conf))
        return True

    def reclassification_rate(self) -> float:
        ever_nonsense = 0
        reclassified = 0
        for trail in self.records.values():
            classes = [cls for _, cls, _ in trail]
            if "nonsense" not in classes:
                continue
            ever_nonsense += 1
            first = classes.index("nonsense")
            if "non-nonsense" in classes[first + 1 :]:
                reclassified += 1
        if ever_nonsense == 0:
            return 0.0
        return reclassified / ever_nonsense

    def to_records(self) -> list[dict]:
        out = []
        for query_id in sorted(self.records):
            for ts, cls, max_conf in self.records[query_id]:
                out.append(
                    {"query_id": query_id, "ts": ts, "class": cls, "max_conf": max_conf}
                )
        return out

    @classmethod
    def from_records(cls, records) -> "NonsenseHistory":
        h = cls()
        for rec in records:
            trail = h.records.setdefault(rec["query_id"], [])
            ts = rec["ts"]
            if trail and ts <= trail[-1][0]:
                raise DataError(f"history timestamps not increasing for {rec['query_id']}")
            trail.append((ts, rec["class"], rec["max_conf"]))
        return h

    @classmethod
    def from_jsonl(cls, lines) -> "NonsenseHistory":
        return cls.from_records(json.loads(line) for line in lines if line.strip())
