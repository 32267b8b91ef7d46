"""Workspace persistence: plain JSONL/JSON/TSV files under a fixed
directory layout.

Every artifact carries a format name and version (JSONL header record,
JSON keys, or a TSV comment line).  Writes are atomic and canonical
(sorted keys, compact separators) so re-running a stage on unchanged
inputs rewrites byte-identical files.
"""

from __future__ import annotations

import json
import os
import shutil
import tempfile
from pathlib import Path

from .errors import DataError
from .ingest import Corpus, analyze_corpus
from .lexicons import default_path
from .objects import CanonicalObject, ObjectMention
from .querygen import Query

DIRS = ("corpora", "objects", "queries", "answers", "labels", "reports", "lexicons")

LEXICON_NAMES = (
    "stopwords",
    "closed_class",
    "abbreviations",
    "gazetteer",
    "verbs",
    "comparatives",
    "prune_rules",
    "verb_frames",
)

QUERY_STAGES = ("generated", "pruned", "answered")


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def atomic_write_text(path, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def write_jsonl(path, format_name: str, records, header_extra: dict | None = None) -> None:
    header = {"format": format_name, "version": 1}
    if header_extra:
        header.update(header_extra)
    lines = [dumps(header)]
    lines.extend(dumps(rec) for rec in records)
    atomic_write_text(path, "\n".join(lines) + "\n")


def read_jsonl(path, format_name: str) -> tuple[dict, list]:
    """Returns (header, records); validates the header record."""
    path = Path(path)
    try:
        raw = path.read_text(encoding="utf-8")
    except OSError as e:
        raise DataError(f"cannot read {path}: {e}") from e
    header = None
    records = []
    for ln, line in enumerate(raw.splitlines(), 1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as e:
            raise DataError(f"{path}:{ln}: malformed JSON: {e}") from e
        if header is None:
            header = rec
        else:
            records.append(rec)
    if header is None:
        raise DataError(f"{path}: empty artifact (missing header record)")
    if header.get("format") != format_name or header.get("version") != 1:
        raise DataError(
            f"{path}: expected format {format_name!r} v1, got "
            f"{header.get('format')!r} v{header.get('version')!r}"
        )
    return header, records


def write_json(path, format_name: str, payload: dict) -> None:
    obj = {"format": format_name, "version": 1}
    obj.update(payload)
    atomic_write_text(path, dumps(obj) + "\n")


def read_json(path, format_name: str) -> dict:
    path = Path(path)
    try:
        obj = json.loads(path.read_text(encoding="utf-8"))
    except OSError as e:
        raise DataError(f"cannot read {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise DataError(f"{path}: malformed JSON: {e}") from e
    if obj.get("format") != format_name or obj.get("version") != 1:
        raise DataError(f"{path}: expected format {format_name!r} v1")
    return obj


def _validate_corpus_id(corpus_id: str) -> str:
    if not corpus_id or not corpus_id.strip():
        raise DataError("corpus id must be nonempty")
    if any(c in corpus_id for c in "/\\") or corpus_id in (".", ".."):
        raise DataError(f"corpus id {corpus_id!r} must not contain path separators")
    return corpus_id


def object_to_record(o: CanonicalObject) -> dict:
    return {
        "object_id": o.object_id,
        "canonical": o.canonical,
        "type": o.object_type,
        "mention_count": o.mention_count,
        "quantified": o.quantified,
        "article": o.article,
        "mentions": [
            {
                "corpus_id": m.sent_id[0],
                "doc_id": m.sent_id[1],
                "sentence": m.sent_id[2],
                "start": m.span[0],
                "end": m.span[1],
                "surface": m.surface,
            }
            for m in o.mentions
        ],
    }


def object_from_record(rec: dict) -> CanonicalObject:
    try:
        mentions = [
            ObjectMention(
                sent_id=(m["corpus_id"], m["doc_id"], m["sentence"]),
                span=(m["start"], m["end"]),
                surface=m["surface"],
            )
            for m in rec.get("mentions", [])
        ]
        return CanonicalObject(
            object_id=rec["object_id"],
            canonical=rec["canonical"],
            object_type=rec["type"],
            mention_count=rec["mention_count"],
            quantified=rec["quantified"],
            article=rec.get("article"),
            mentions=mentions,
        )
    except KeyError as e:
        raise DataError(f"object record missing field {e}") from e


def query_to_record(q: Query) -> dict:
    return {
        "query_id": q.query_id,
        "kind": q.kind,
        "interrogative": q.interrogative,
        "subject": q.subject,
        "object2": q.object2,
        "verb": q.verb,
        "adjective": q.adjective,
        "surface": q.surface,
        "state": q.state,
        "reason": q.reason,
    }


def query_from_record(rec: dict) -> Query:
    try:
        return Query(
            query_id=rec["query_id"],
            kind=rec["kind"],
            interrogative=rec["interrogative"],
            subject=rec["subject"],
            object2=rec["object2"],
            verb=rec["verb"],
            adjective=rec["adjective"],
            surface=rec["surface"],
            state=rec["state"],
            reason=rec.get("reason"),
        )
    except KeyError as e:
        raise DataError(f"query record missing field {e}") from e


class Workspace:
    """Directory of pipeline artifacts; stages read and write only here."""

    def __init__(self, root):
        self.root = Path(root)

    def init(self) -> "Workspace":
        """Create the layout and seed editable lexicon copies.

        Idempotent; existing lexicon files are never overwritten.
        """
        for name in DIRS:
            (self.root / name).mkdir(parents=True, exist_ok=True)
        for name in LEXICON_NAMES:
            dest = self.root / "lexicons" / f"{name}.tsv"
            if not dest.exists():
                shutil.copyfile(default_path(name), dest)
        return self

    def lexicon_path(self, name: str) -> Path:
        if name not in LEXICON_NAMES:
            raise DataError(f"unknown lexicon {name!r}")
        return self.root / "lexicons" / f"{name}.tsv"

    # corpora ----------------------------------------------------------

    def corpus_path(self, corpus_id: str) -> Path:
        return self.root / "corpora" / f"{_validate_corpus_id(corpus_id)}.json"

    def corpus_ids(self) -> list[str]:
        d = self.root / "corpora"
        if not d.is_dir():
            return []
        return sorted(p.stem for p in d.glob("*.json"))

    def save_corpus(self, corpus_id: str, documents) -> None:
        """documents: (doc_id, title, text) triples; raw text only,
        analysis is re-derived on load."""
        payload = {
            "corpus_id": _validate_corpus_id(corpus_id),
            "documents": [
                {"doc_id": d, "title": t, "text": x} for d, t, x in documents
            ],
        }
        write_json(self.corpus_path(corpus_id), "corpus", payload)

    def load_corpus(self, corpus_id: str, lex) -> Corpus:
        path = self.corpus_path(corpus_id)
        if not path.exists():
            raise DataError(f"unknown corpus {corpus_id!r} (no {path.name} in workspace)")
        obj = read_json(path, "corpus")
        docs = [
            (rec["doc_id"], rec.get("title", ""), rec["text"])
            for rec in obj.get("documents", [])
        ]
        return analyze_corpus(obj["corpus_id"], docs, lex)

    def load_all_corpora(self, lex) -> list[Corpus]:
        ids = self.corpus_ids()
        if not ids:
            raise DataError("no corpora ingested; run ingest first")
        return [self.load_corpus(cid, lex) for cid in ids]

    # objects ----------------------------------------------------------

    @property
    def objects_path(self) -> Path:
        return self.root / "objects" / "objects.jsonl"

    def save_objects(self, objects, tense: str) -> None:
        write_jsonl(
            self.objects_path,
            "objects",
            (object_to_record(o) for o in objects),
            header_extra={"tense": tense},
        )

    def load_objects(self) -> tuple[list[CanonicalObject], str]:
        if not self.objects_path.exists():
            raise DataError("no object table; run objects first")
        header, records = read_jsonl(self.objects_path, "objects")
        return [object_from_record(r) for r in records], header.get("tense", "past")

    # queries ----------------------------------------------------------

    def queries_path(self, stage: str) -> Path:
        if stage not in QUERY_STAGES:
            raise DataError(f"unknown query stage {stage!r}")
        return self.root / "queries" / f"{stage}.jsonl"

    def save_queries(self, stage: str, queries) -> None:
        write_jsonl(
            self.queries_path(stage), "queries", (query_to_record(q) for q in queries)
        )

    def load_queries(self, stage: str) -> list[Query]:
        path = self.queries_path(stage)
        if not path.exists():
            verb = {"generated": "generate", "pruned": "prune", "answered": "answer"}[stage]
            raise DataError(f"no {stage} queries; run {verb} first")
        _, records = read_jsonl(path, "queries")
        return [query_from_record(r) for r in records]

    def latest_queries(self) -> list[Query]:
        """Queries from the furthest stage that has run."""
        for stage in reversed(QUERY_STAGES):
            if self.queries_path(stage).exists():
                return self.load_queries(stage)
        raise DataError("no queries generated; run generate first")

    # answers ----------------------------------------------------------

    @property
    def answers_path(self) -> Path:
        return self.root / "answers" / "answers.jsonl"

    @property
    def history_path(self) -> Path:
        return self.root / "answers" / "history.jsonl"

    def save_answers(self, records) -> None:
        write_jsonl(self.answers_path, "answers", records)

    def load_answers(self) -> list[dict]:
        if not self.answers_path.exists():
            raise DataError("no answers; run answer first")
        _, records = read_jsonl(self.answers_path, "answers")
        return records

    def save_history(self, history) -> None:
        write_jsonl(self.history_path, "history", history.to_records())

    def load_history(self):
        from .pruning import NonsenseHistory

        if not self.history_path.exists():
            return NonsenseHistory()
        _, records = read_jsonl(self.history_path, "history")
        return NonsenseHistory.from_records(records)

    # labels -----------------------------------------------------------

    @property
    def labels_path(self) -> Path:
        return self.root / "labels" / "labels.jsonl"

    @property
    def sample_path(self) -> Path:
        return self.root / "labels" / "sample.json"

    def append_label(self, record: dict) -> None:
        """Append-only label log; the header is written once."""
        path = self.labels_path
        new = not path.exists()
        with open(path, "a", encoding="utf-8", newline="\n") as f:
            if new:
                f.write(dumps({"format": "labels", "version": 1}) + "\n")
            f.write(dumps(record) + "\n")
            f.flush()
            os.fsync(f.fileno())

    def read_label_records(self) -> list[dict]:
        if not self.labels_path.exists():
            return []
        _, records = read_jsonl(self.labels_path, "labels")
        return records

    def save_sample(self, payload: dict) -> None:
        write_json(self.sample_path, "sample", payload)

    def load_sample(self) -> dict:
        if not self.sample_path.exists():
            raise DataError("no review sample prepared; run sample first")
        return read_json(self.sample_path, "sample")

    # reports ----------------------------------------------------------

    def report_path(self, name: str) -> Path:
        return self.root / "reports" / name

    def write_report(self, name: str, payload: dict, text: str) -> None:
        write_json(self.report_path(f"{name}.json"), name, payload)
        versioned = f"# format: {name} v1\n{text}"
        if not versioned.endswith("\n"):
            versioned += "\n"
        atomic_write_text(self.report_path(f"{name}.txt"), versioned)

    def write_report_tsv(self, name: str, header_cols, rows) -> None:
        lines = [f"# format: {name} v1", "\t".join(header_cols)]
        for row in rows:
            lines.append("\t".join(str(c) for c in row))
        atomic_write_text(self.report_path(f"{name}.tsv"), "\n".join(lines) + "\n")
