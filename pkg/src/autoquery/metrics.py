"""Coverage and precision measurement, review sampling, and gap
reporting.

Precision uses the Wilson score interval; review samples are seeded
and optionally stratified by query kind with largest-remainder
allocation.  A "live" query is any query not removed by rule pruning.
"""

from __future__ import annotations

import csv
import dataclasses
import math
import random

from .errors import DataError, UsageError
from .querygen import KINDS

CATEGORIES = ("UsefulInteresting", "UsefulNotInteresting", "Nonsensical")


@dataclasses.dataclass(frozen=True)
class Label:
    query_id: str
    category: str
    answer_correct: bool | None
    reviewer: str
    ts: object  # opaque; live label = last in log order

    def __post_init__(self):
        if self.category not in CATEGORIES:
            raise DataError(f"unknown label category {self.category!r}")


def live_labels(labels) -> dict:
    """Collapse a label log to one live label per (query_id, reviewer)."""
    live = {}
    for lab in labels:
        live[(lab.query_id, lab.reviewer)] = lab
    return live


@dataclasses.dataclass(frozen=True)
class PrecisionEstimate:
    attempted: int
    correct: int
    point: float
    lo: float
    hi: float
    z: float


def wilson_interval(correct: int, attempted: int, z: float) -> tuple[float, float]:
    if attempted < 1:
        raise UsageError("attempted must be >= 1")
    p = correct / attempted
    n = attempted
    denom = 1.0 + z * z / n
    center = (p + z * z / (2.0 * n)) / denom
    half = z * math.sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom
    lo = max(0.0, center - half)
    hi = min(1.0, center + half)
    return lo, hi


def precision_with_interval(labels, z: float = 1.96) -> PrecisionEstimate:
    """Precision over live labels carrying an answer_correct judgment."""
    judged = [lab for lab in live_labels(labels).values() if lab.answer_correct is not None]
    if not judged:
        raise UsageError("no labels with answer_correct set")
    attempted = len(judged)
    correct = sum(1 for lab in judged if lab.answer_correct)
    lo, hi = wilson_interval(correct, attempted, z)
    return PrecisionEstimate(
        attempted=attempted,
        correct=correct,
        point=correct / attempted,
        lo=lo,
        hi=hi,
        z=z,
    )


@dataclasses.dataclass(frozen=True)
class CoverageReport:
    total: int  # live queries
    high_conf: int
    fraction: float
    per_kind: dict


def coverage(queries, top_confidence: dict, theta: float) -> CoverageReport:
    """Fraction of live queries whose best answer reaches theta."""
    per_kind = {}
    total = high = 0
    for q in queries:
        if q.state == "Pruned":
            continue
        row = per_kind.setdefault(q.kind, {"total": 0, "high_conf": 0, "fraction": 0.0})
        row["total"] += 1
        total += 1
        if top_confidence.get(q.query_id, 0.0) >= theta:
            row["high_conf"] += 1
            high += 1
    for row in per_kind.values():
        row["fraction"] = row["high_conf"] / row["total"] if row["total"] else 0.0
    return CoverageReport(
        total=total,
        high_conf=high,
        fraction=high / total if total else 0.0,
        per_kind=per_kind,
    )


def largest_remainder(sizes: dict, n: int) -> dict:
    """Proportional integer allocation of n across strata."""
    total = sum(sizes.values())
    if total == 0:
        return {k: 0 for k in sizes}
    quotas = {k: n * size / total for k, size in sizes.items()}
    alloc = {k: min(int(quotas[k]), sizes[k]) for k in sizes}
    leftover = n - sum(alloc.values())
    order = sorted(
        sizes,
        key=lambda k: (-(quotas[k] - int(quotas[k])), -sizes[k], k),
    )
    while leftover > 0:
        progressed = False
        for k in order:
            if leftover == 0:
                break
            if alloc[k] < sizes[k]:
                alloc[k] += 1
                leftover -= 1
                progressed = True
        if not progressed:
            break
    return alloc


@dataclasses.dataclass(frozen=True)
class SampleResult:
    query_ids: list
    requested: int
    flagged: bool  # n exceeded the live population


def sample_for_review(queries, n: int, seed: int, stratify_by_kind: bool) -> SampleResult:
    if n < 1:
        raise UsageError("sample size must be >= 1")
    pool = [q for q in queries if q.state != "Pruned"]
    if n >= len(pool):
        return SampleResult([q.query_id for q in pool], n, n > len(pool))
    rng = random.Random(seed)
    if not stratify_by_kind:
        return SampleResult(rng.sample([q.query_id for q in pool], n), n, False)
    by_kind = {}
    for q in pool:
        by_kind.setdefault(q.kind, []).append(q.query_id)
    sizes = {k: len(v) for k, v in by_kind.items()}
    alloc = largest_remainder(sizes, n)
    ids = []
    for kind in KINDS:
        if kind in by_kind and alloc.get(kind):
            ids.extend(rng.sample(by_kind[kind], alloc[kind]))
    return SampleResult(ids, n, False)


def utility_breakdown(labels) -> dict:
    """Category fractions over live labels; empty dict when unlabeled."""
    live = list(live_labels(labels).values())
    if not live:
        return {}
    counts = {c: 0 for c in CATEGORIES}
    for lab in live:
        counts[lab.category] += 1
    return {c: counts[c] / len(live) for c in CATEGORIES}


def rule_disagreements(queries_by_id: dict, labels) -> int:
    """Live labels calling a rule-kept query Nonsensical."""
    n = 0
    for lab in live_labels(labels).values():
        q = queries_by_id.get(lab.query_id)
        if q is not None and q.state != "Pruned" and lab.category == "Nonsensical":
            n += 1
    return n


def gap_report(queries, top_confidence: dict, theta: float, objects_by_id: dict) -> list:
    """Live queries whose best confidence falls short of theta.

    Sorted by subject canonical, then ascending confidence (worst
    gaps first within a subject).
    """
    gaps = []
    for q in queries:
        if q.state == "Pruned":
            continue
        conf = top_confidence.get(q.query_id, 0.0)
        if conf >= theta:
            continue
        subjects = []
        for oid in (q.subject, q.object2):
            if oid and oid in objects_by_id:
                subjects.append(objects_by_id[oid].canonical)
        gaps.append(
            {
                "query_id": q.query_id,
                "surface": q.surface,
                "confidence": conf,
                "subjects": subjects,
            }
        )
    gaps.sort(key=lambda g: (g["subjects"], g["confidence"], g["query_id"]))
    return gaps


def parse_label_record(rec: dict) -> Label:
    try:
        return Label(
            query_id=str(rec["query_id"]),
            category=str(rec["category"]),
            answer_correct=rec.get("answer_correct"),
            reviewer=str(rec["reviewer"]),
            ts=rec.get("ts"),
        )
    except KeyError as e:
        raise DataError(f"label record missing field {e}") from None


def import_labels_csv(path) -> list[Label]:
    """Read labels from a CSV export with the JSONL column set."""
    out = []
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            for i, row in enumerate(csv.DictReader(fh), 1):
                raw = (row.get("answer_correct") or "").strip().lower()
                if raw in ("", "none", "null"):
                    correct = None
                elif raw in ("true", "1", "yes"):
                    correct = True
                elif raw in ("false", "0", "no"):
                    correct = False
                else:
                    raise DataError(f"{path}:{i}: bad answer_correct {raw!r}")
                out.append(
                    parse_label_record(
                        {
                            "query_id": row.get("query_id", ""),
                            "category": row.get("category", ""),
                            "answer_correct": correct,
                            "reviewer": row.get("reviewer", ""),
                            "ts": row.get("ts"),
                        }
                    )
                )
    except OSError as e:
        raise DataError(f"cannot read labels csv {path}: {e}") from e
    return out
