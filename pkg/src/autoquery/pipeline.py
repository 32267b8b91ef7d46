"""Pipeline stages over a workspace, shared by the CLI and the review
service.

Each stage reads artifacts written by earlier stages, recomputes its
own outputs wholesale, and writes them canonically, so re-running a
stage on unchanged inputs is byte-identical.
"""

from __future__ import annotations

import dataclasses
from pathlib import Path

from .answer import (
    RETRIEVAL_KINDS,
    answer_query,
    build_cooccurrence_model,
    build_index,
    correlate,
    nearest,
    reverse_check,
)
from .errors import DataError, UsageError
from .ingest import corpus_tense, read_corpus_file
from .lexicons import load_lexicons, load_stopwords
from .metrics import (
    Label,
    coverage,
    gap_report,
    parse_label_record,
    precision_with_interval,
    rule_disagreements,
    sample_for_review,
    utility_breakdown,
)
from .objects import extract_objects, load_gazetteer
from .pairing import group_corpuses, usefulness_score
from .pruning import (
    apply_rule_pruning,
    load_prune_rules,
    load_verb_frames,
    prune_by_confidence,
)
from .querygen import (
    TECHNIQUES,
    cap_queries,
    gen_analogy_extensions,
    generate,
    load_comparatives,
    load_verbs,
)
from .workspace import Workspace


@dataclasses.dataclass
class Config:
    theta: float = 0.35
    tau: float = 0.2
    topk: int = 5
    min_count: int = 2
    max_queries: int = 100000
    budget: int = 5000
    lexicon_paths: dict = dataclasses.field(default_factory=dict)


_NUMERIC_KEYS = {
    "theta": float,
    "tau": float,
    "topk": int,
    "min_count": int,
    "max_queries": int,
    "budget": int,
}

_LEXICON_KEYS = (
    "stopwords",
    "closed_class",
    "abbreviations",
    "gazetteer",
    "verbs",
    "comparatives",
    "prune_rules",
    "verb_frames",
)


def load_config(path=None) -> Config:
    """key=value file; # lines are comments; unknown keys rejected."""
    cfg = Config()
    if path is None:
        return cfg
    p = Path(path)
    try:
        raw = p.read_text(encoding="utf-8")
    except OSError as e:
        raise DataError(f"cannot read config {p}: {e}") from e
    for ln, line in enumerate(raw.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise DataError(f"{p}:{ln}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key in _NUMERIC_KEYS:
            try:
                setattr(cfg, key, _NUMERIC_KEYS[key](value))
            except ValueError:
                raise DataError(f"{p}:{ln}: bad value for {key}: {value!r}") from None
        elif key in _LEXICON_KEYS:
            cfg.lexicon_paths[key] = value
        else:
            raise DataError(f"{p}:{ln}: unknown config key {key!r}")
    return cfg


def _lexicon_file(ws: Workspace, cfg: Config, name: str) -> Path:
    override = cfg.lexicon_paths.get(name)
    if override:
        return Path(override)
    return ws.lexicon_path(name)


def _load_lex(ws: Workspace, cfg: Config):
    return load_lexicons(
        stopwords_path=_lexicon_file(ws, cfg, "stopwords"),
        closed_class_path=_lexicon_file(ws, cfg, "closed_class"),
        abbreviations_path=_lexicon_file(ws, cfg, "abbreviations"),
        gazetteer_path=_lexicon_file(ws, cfg, "gazetteer"),
    )


# stages ---------------------------------------------------------------


def run_ingest(ws: Workspace, cfg: Config, corpus_path, corpus_id: str) -> dict:
    ws.init()
    docs = read_corpus_file(corpus_path)
    lex = _load_lex(ws, cfg)
    from .ingest import analyze_corpus

    corpus = analyze_corpus(corpus_id, docs, lex)
    ws.save_corpus(corpus_id, docs)
    n_sentences = sum(1 for _ in corpus.sentences())
    return {
        "corpus_id": corpus_id,
        "documents": len(corpus.documents),
        "sentences": n_sentences,
    }


def run_objects(ws: Workspace, cfg: Config) -> dict:
    ws.init()
    lex = _load_lex(ws, cfg)
    corpora = ws.load_all_corpora(lex)
    gaz = load_gazetteer(_lexicon_file(ws, cfg, "gazetteer"))
    objects = extract_objects(corpora, gaz)
    tense = corpus_tense(corpora)
    ws.save_objects(objects, tense)
    return {"objects": len(objects), "tense": tense}


def _parse_techniques(raw: str) -> tuple:
    if raw == "all":
        return TECHNIQUES
    picked = []
    for name in raw.split(","):
        name = name.strip()
        if name not in TECHNIQUES:
            raise UsageError(
                f"unknown technique {name!r}; expected all or a subset of {','.join(TECHNIQUES)}"
            )
        if name not in picked:
            picked.append(name)
    if not picked:
        raise UsageError("no techniques selected")
    return tuple(picked)


def run_generate(ws: Workspace, cfg: Config, techniques: str = "all", max_queries=None) -> dict:
    ws.init()
    cap = cfg.max_queries if max_queries is None else max_queries
    if cap < 1:
        raise UsageError(f"max queries must be >= 1, got {cap}")
    objects, tense = ws.load_objects()
    verbs = load_verbs(_lexicon_file(ws, cfg, "verbs"))
    adjectives = load_comparatives(_lexicon_file(ws, cfg, "comparatives"))
    queries = generate(objects, verbs, adjectives, _parse_techniques(techniques), tense)
    total = len(queries)
    queries = cap_queries(queries, cap)
    ws.save_queries("generated", queries)
    per_kind: dict = {}
    for q in queries:
        per_kind[q.kind] = per_kind.get(q.kind, 0) + 1
    return {
        "generated": len(queries),
        "before_cap": total,
        "capped": total > len(queries),
        "per_kind": per_kind,
    }


@dataclasses.dataclass
class EvalResult:
    """Outcome of answering one live query."""

    confidence: float
    candidates: list
    answer_object_id: str | None = None
    answer: str | None = None  # canonical form shown to reviewers
    reverse_ok: bool | None = None
    phi: float | None = None


class _Conf:
    __slots__ = ("confidence",)

    def __init__(self, confidence):
        self.confidence = confidence


def _shim_candidates(result: EvalResult):
    """Adapter so the confidence rule sees model-based answers the same
    way it sees retrieval candidates."""
    if result.candidates:
        return result.candidates
    if result.confidence > 0.0:
        return [_Conf(result.confidence)]
    return []


def evaluate_queries(
    queries, corpora, objects, stopwords, topk: int, min_count: int, index=None, model=None
) -> dict:
    """Answer every non-pruned query; returns query_id -> EvalResult."""
    if topk < 1:
        raise UsageError(f"topk must be >= 1, got {topk}")
    objects_by_id = {o.object_id: o for o in objects}
    live = [q for q in queries if q.state != "Pruned"]
    results: dict[str, EvalResult] = {}
    if index is None and any(q.kind in RETRIEVAL_KINDS for q in live):
        index = build_index(corpora)
    if model is None and any(q.kind in ("Analogy", "Correlation") for q in live):
        model = build_cooccurrence_model(corpora, objects, min_count)
    eligible_ids = None
    if model is not None:
        eligible_ids = frozenset(
            o.object_id
            for o in objects
            if (o.quantified or o.object_type == "Concept") and o.object_id in model
        )
    for q in live:
        if q.kind in RETRIEVAL_KINDS:
            cands = answer_query(q, index, objects_by_id, stopwords, k=topk)
            conf = cands[0].confidence if cands else 0.0
            results[q.query_id] = EvalResult(conf, cands)
        elif q.kind == "Analogy":
            results[q.query_id] = _eval_analogy(q, model, objects_by_id, topk)
        elif q.kind == "Correlation":
            results[q.query_id] = _eval_correlation(q, model, objects_by_id, eligible_ids)
        else:
            raise DataError(f"query {q.query_id} has unknown kind {q.kind!r}")
    return results


def _eval_analogy(q, model, objects_by_id, topk: int) -> EvalResult:
    if q.subject not in model:
        return EvalResult(0.0, [])
    ranked = nearest(q.subject, model, 1)
    if not ranked:
        return EvalResult(0.0, [])
    b_id, sim = ranked[0]
    rev = reverse_check(q.subject, b_id, model, topk)
    return EvalResult(
        confidence=sim,
        candidates=[],
        answer_object_id=b_id,
        answer=objects_by_id[b_id].canonical if b_id in objects_by_id else b_id,
        reverse_ok=rev,
    )


def _eval_correlation(q, model, objects_by_id, eligible_ids) -> EvalResult:
    if q.subject not in model:
        return EvalResult(0.0, [])
    ranked = correlate(q.subject, model, eligible_ids)
    if not ranked:
        return EvalResult(0.0, [])
    b_id, phi = ranked[0]
    return EvalResult(
        confidence=max(phi, 0.0),
        candidates=[],
        answer_object_id=b_id,
        answer=objects_by_id[b_id].canonical if b_id in objects_by_id else b_id,
        phi=phi,
    )


def run_prune(ws: Workspace, cfg: Config, theta=None) -> dict:
    """Rule pruning plus the confidence-based nonsense layer."""
    ws.init()
    th = cfg.theta if theta is None else theta
    queries = ws.load_queries("generated")
    objects, _ = ws.load_objects()
    objects_by_id = {o.object_id: o for o in objects}
    table = load_prune_rules(_lexicon_file(ws, cfg, "prune_rules"))
    frames = load_verb_frames(_lexicon_file(ws, cfg, "verb_frames"))
    adjectives = load_comparatives(_lexicon_file(ws, cfg, "comparatives"))
    adjectives_by_form = {a.form: a for a in adjectives}
    counts = apply_rule_pruning(queries, objects_by_id, table, frames, adjectives_by_form)
    lex = _load_lex(ws, cfg)
    corpora = ws.load_all_corpora(lex)
    results = evaluate_queries(queries, corpora, objects, lex.stopwords, cfg.topk, cfg.min_count)
    history = ws.load_history()
    nonsense = 0
    for q in queries:
        if q.state == "Pruned":
            continue
        decision, max_conf = prune_by_confidence(q, _shim_candidates(results[q.query_id]), th)
        is_nonsense = decision == "nonsense"
        if is_nonsense:
            q.state = "Nonsense"
            nonsense += 1
        history.record(q.query_id, is_nonsense, max_conf)
    ws.save_queries("pruned", queries)
    ws.save_history(history)
    live = sum(1 for q in queries if q.state not in ("Pruned",))
    return {
        "rule_pruned": counts,
        "nonsense": nonsense,
        "live": live,
        "theta": th,
        "reclassification_rate": history.reclassification_rate(),
    }


def _candidate_record(c) -> dict:
    return {
        "sent_id": list(c.sent_ref),
        "confidence": c.confidence,
        "matched": list(c.matched),
        "text": c.text,
    }


def _answer_record(q, r: EvalResult) -> dict:
    return {
        "query_id": q.query_id,
        "kind": q.kind,
        "confidence": r.confidence,
        "candidates": [_candidate_record(c) for c in r.candidates],
        "answer": r.answer,
        "answer_object_id": r.answer_object_id,
        "reverse_ok": r.reverse_ok,
        "phi": r.phi,
    }


def run_answer(ws: Workspace, cfg: Config, theta=None, topk=None) -> dict:
    """Answer live queries, set Answered/Nonsense, and derive analogy
    follow-up queries for answered analogies."""
    ws.init()
    th = cfg.theta if theta is None else theta
    k = cfg.topk if topk is None else topk
    queries = ws.load_queries("pruned")
    objects, _ = ws.load_objects()
    objects_by_id = {o.object_id: o for o in objects}
    lex = _load_lex(ws, cfg)
    corpora = ws.load_all_corpora(lex)
    index = build_index(corpora)
    results = evaluate_queries(
        queries, corpora, objects, lex.stopwords, k, cfg.min_count, index=index
    )
    history = ws.load_history()

    def classify(q) -> None:
        r = results[q.query_id]
        decision, max_conf = prune_by_confidence(q, _shim_candidates(r), th)
        if decision == "nonsense":
            q.state = "Nonsense"
            history.record(q.query_id, True, max_conf)
        else:
            q.state = "Answered"
            history.record(q.query_id, False, max_conf)

    for q in queries:
        if q.state == "Pruned":
            continue
        classify(q)

    extensions = []
    seen_ids = {q.query_id for q in queries}
    for q in queries:
        if q.kind != "Analogy" or q.state != "Answered":
            continue
        r = results[q.query_id]
        if r.answer_object_id is None:
            continue
        for ext in gen_analogy_extensions(q, objects_by_id[q.subject], objects_by_id[r.answer_object_id]):
            if ext.query_id in seen_ids:
                continue
            seen_ids.add(ext.query_id)
            cands = answer_query(ext, index, objects_by_id, lex.stopwords, k=k)
            results[ext.query_id] = EvalResult(
                cands[0].confidence if cands else 0.0, cands
            )
            classify(ext)
            extensions.append(ext)
    queries = queries + extensions

    answer_records = [
        _answer_record(q, results[q.query_id]) for q in queries if q.state != "Pruned"
    ]
    ws.save_queries("answered", queries)
    ws.save_answers(answer_records)
    ws.save_history(history)
    answered = sum(1 for q in queries if q.state == "Answered")
    nonsense = sum(1 for q in queries if q.state == "Nonsense")
    return {
        "answered": answered,
        "nonsense": nonsense,
        "extensions": len(extensions),
        "theta": th,
        "topk": k,
        "reclassification_rate": history.reclassification_rate(),
    }


# reports --------------------------------------------------------------


def _align(rows) -> str:
    """Aligned-column text; rows of stringified cells, first row header."""
    if not rows:
        return ""
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    out = []
    for r in rows:
        out.append("  ".join(c.ljust(widths[i]) for i, c in enumerate(r)).rstrip())
    return "\n".join(out) + "\n"


def _top_confidence(ws: Workspace) -> dict:
    return {rec["query_id"]: rec.get("confidence", 0.0) for rec in ws.load_answers()}


def _load_labels(ws: Workspace) -> list[Label]:
    return [parse_label_record(rec) for rec in ws.read_label_records()]


def coverage_payload(ws: Workspace, cfg: Config, theta=None) -> dict:
    th = cfg.theta if theta is None else theta
    queries = ws.load_queries("answered")
    report = coverage(queries, _top_confidence(ws), th)
    payload = {
        "theta": th,
        "total": report.total,
        "high_conf": report.high_conf,
        "coverage": report.fraction,
        "per_kind": report.per_kind,
    }
    if report.total == 0:
        payload["note"] = "no live queries"
    return payload


def run_metrics_coverage(ws: Workspace, cfg: Config, theta=None) -> dict:
    ws.init()
    payload = coverage_payload(ws, cfg, theta)
    rows = [["kind", "total", "high_conf", "fraction"]]
    for kind in sorted(payload["per_kind"]):
        row = payload["per_kind"][kind]
        rows.append([kind, str(row["total"]), str(row["high_conf"]), f"{row['fraction']:.4f}"])
    rows.append(["TOTAL", str(payload["total"]), str(payload["high_conf"]), f"{payload['coverage']:.4f}"])
    ws.write_report("coverage", payload, _align(rows))
    return payload


def precision_payload(ws: Workspace) -> dict:
    est = precision_with_interval(_load_labels(ws))
    return {
        "attempted": est.attempted,
        "correct": est.correct,
        "point": est.point,
        "lo": est.lo,
        "hi": est.hi,
        "z": est.z,
    }


def run_metrics_precision(ws: Workspace, cfg: Config) -> dict:
    ws.init()
    payload = precision_payload(ws)
    rows = [
        ["attempted", "correct", "point", "lo", "hi", "z"],
        [
            str(payload["attempted"]),
            str(payload["correct"]),
            f"{payload['point']:.4f}",
            f"{payload['lo']:.4f}",
            f"{payload['hi']:.4f}",
            str(payload["z"]),
        ],
    ]
    ws.write_report("precision", payload, _align(rows))
    return payload


def utility_payload(ws: Workspace) -> dict:
    labels = _load_labels(ws)
    queries = ws.latest_queries()
    queries_by_id = {q.query_id: q for q in queries}
    return {
        "breakdown": utility_breakdown(labels),
        "labeled": len({(l.query_id, l.reviewer) for l in labels}),
        "rule_disagreements": rule_disagreements(queries_by_id, labels),
    }


def run_metrics_utility(ws: Workspace, cfg: Config) -> dict:
    ws.init()
    payload = utility_payload(ws)
    rows = [["category", "fraction"]]
    for cat in sorted(payload["breakdown"]):
        rows.append([cat, f"{payload['breakdown'][cat]:.4f}"])
    if not payload["breakdown"]:
        rows.append(["(no labels)", "-"])
    text = _align(rows)
    text += f"rule_disagreements  {payload['rule_disagreements']}\n"
    ws.write_report("utility", payload, text)
    return payload


def run_gaps(ws: Workspace, cfg: Config, theta=None) -> dict:
    ws.init()
    th = cfg.theta if theta is None else theta
    queries = ws.load_queries("answered")
    objects, _ = ws.load_objects()
    objects_by_id = {o.object_id: o for o in objects}
    gaps = gap_report(queries, _top_confidence(ws), th, objects_by_id)
    payload = {"theta": th, "count": len(gaps), "gaps": gaps}
    rows = [["confidence", "subjects", "surface"]]
    for g in gaps:
        rows.append([f"{g['confidence']:.4f}", ", ".join(g["subjects"]), g["surface"]])
    ws.write_report("gaps", payload, _align(rows))
    return payload


def run_pair(ws: Workspace, cfg: Config, tau=None, budget=None, theta=None) -> dict:
    ws.init()
    t = cfg.tau if tau is None else tau
    b = cfg.budget if budget is None else budget
    th = cfg.theta if theta is None else theta
    lex = _load_lex(ws, cfg)
    corpora = ws.load_all_corpora(lex)
    if len(corpora) < 2:
        raise DataError("pairing needs at least 2 ingested corpora")
    gaz = load_gazetteer(_lexicon_file(ws, cfg, "gazetteer"))
    verbs = load_verbs(_lexicon_file(ws, cfg, "verbs"))
    adjectives = load_comparatives(_lexicon_file(ws, cfg, "comparatives"))
    adjectives_by_form = {a.form: a for a in adjectives}
    frames = load_verb_frames(_lexicon_file(ws, cfg, "verb_frames"))
    by_id = {c.corpus_id: c for c in corpora}
    objects_by_corpus = {
        cid: extract_objects([by_id[cid]], gaz) for cid in sorted(by_id)
    }
    scores = []
    ids = sorted(by_id)
    for i, a in enumerate(ids):
        for bid in ids[i + 1 :]:
            scores.append(
                usefulness_score(
                    by_id[a],
                    by_id[bid],
                    objects_by_corpus[a],
                    objects_by_corpus[bid],
                    verbs,
                    adjectives,
                    frames,
                    adjectives_by_form,
                    lex.stopwords,
                    theta=th,
                    budget=b,
                    topk=cfg.topk,
                )
            )
    groups = group_corpuses(scores, ids, t)
    ws.write_report_tsv(
        "pairs",
        ("corpus1", "corpus2", "generated", "useful", "u"),
        [(s.corpus_a, s.corpus_b, s.generated, s.useful, repr(s.u)) for s in scores],
    )
    payload = {
        "tau": t,
        "theta": th,
        "budget": b,
        "groups": groups,
        "pairs": [dataclasses.asdict(s) for s in scores],
    }
    ws.write_report("groups", {"tau": t, "groups": groups}, _align(
        [["group", "members"]]
        + [[str(i + 1), ", ".join(g)] for i, g in enumerate(groups)]
    ))
    return payload


def run_sample(ws: Workspace, cfg: Config, n: int, seed: int, stratify: bool) -> dict:
    ws.init()
    queries = ws.latest_queries()
    result = sample_for_review(queries, n, seed, stratify)
    payload = {
        "requested": result.requested,
        "seed": seed,
        "stratified": stratify,
        "flagged": result.flagged,
        "query_ids": result.query_ids,
    }
    ws.save_sample(payload)
    return {"sampled": len(result.query_ids), **payload}
