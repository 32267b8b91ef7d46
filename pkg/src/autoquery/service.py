"""Review and metrics HTTP service over a workspace snapshot.

Read-mostly: the only mutation is label submission, serialized through
one lock and appended to the label log before acknowledgment.  Metric
reads take the same lock so a response never reflects half a label.
"""

from __future__ import annotations

import json
import mimetypes
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlparse

from .errors import DataError, UsageError
from .metrics import (
    CATEGORIES,
    Label,
    live_labels,
    precision_with_interval,
    rule_disagreements,
    utility_breakdown,
)
from .pipeline import Config
from .workspace import Workspace, query_to_record

PAGE_SIZE = 50


class ApiError(Exception):
    def __init__(self, status: int, message: str):
        super().__init__(message)
        self.status = status
        self.message = message


class ReviewService:
    """In-memory snapshot of the workspace plus the live label log."""

    def __init__(self, ws: Workspace, cfg: Config):
        self.ws = ws
        self.cfg = cfg
        self.lock = threading.Lock()
        self.queries = ws.latest_queries()
        self.queries_by_id = {q.query_id: q for q in self.queries}
        try:
            self.answers = {rec["query_id"]: rec for rec in ws.load_answers()}
        except DataError:
            self.answers = {}
        try:
            self.sample_ids = list(ws.load_sample().get("query_ids", []))
            self.sample_set = set(self.sample_ids)
        except DataError:
            self.sample_ids = None
            self.sample_set = set()
        self.labels = [self._parse(rec) for rec in ws.read_label_records()]

    @staticmethod
    def _parse(rec: dict) -> Label:
        from .metrics import parse_label_record

        return parse_label_record(rec)

    # review ---------------------------------------------------------

    def _review_item(self, q) -> dict:
        rec = self.answers.get(q.query_id, {})
        candidates = rec.get("candidates") or []
        top = candidates[0] if candidates else None
        candidate = None
        if top is not None:
            candidate = {"text": top.get("text", ""), "confidence": top.get("confidence", 0.0)}
        return {
            "version": 1,
            "query_id": q.query_id,
            "surface": q.surface,
            "kind": q.kind,
            "state": q.state,
            "rule_reason": q.reason,
            "confidence": rec.get("confidence"),
            "candidate": candidate,
            "answer": rec.get("answer"),
            "reverse_ok": rec.get("reverse_ok"),
            "matched_terms": list(top.get("matched", [])) if top else [],
        }

    def next_item(self, reviewer: str):
        """Next sample entry without a live label by this reviewer, in
        sample order; None when the queue is exhausted."""
        if not reviewer:
            raise ApiError(400, "reviewer query parameter required")
        with self.lock:
            if self.sample_ids is None:
                raise ApiError(409, "no review sample prepared; run sample first")
            labeled = {
                key[0] for key in live_labels(self.labels) if key[1] == reviewer
            }
            total = len(self.sample_ids)
            for pos, qid in enumerate(self.sample_ids):
                if qid in labeled:
                    continue
                q = self.queries_by_id.get(qid)
                if q is None:
                    raise DataError(f"sampled query {qid!r} missing from query table")
                item = self._review_item(q)
                item["position"] = pos
                item["total"] = total
                return item
            return None

    def submit_label(self, payload: dict) -> dict:
        if not isinstance(payload, dict):
            raise ApiError(400, "JSON object body required")
        query_id = payload.get("query_id")
        category = payload.get("category")
        reviewer = payload.get("reviewer")
        answer_correct = payload.get("answer_correct")
        if not query_id or not isinstance(query_id, str):
            raise ApiError(400, "query_id required")
        if not reviewer or not isinstance(reviewer, str):
            raise ApiError(400, "reviewer required")
        if category not in CATEGORIES:
            raise ApiError(400, f"category must be one of {', '.join(CATEGORIES)}")
        if answer_correct is not None and not isinstance(answer_correct, bool):
            raise ApiError(400, "answer_correct must be true, false, or omitted")
        with self.lock:
            if self.sample_ids is None:
                raise ApiError(409, "no review sample prepared; run sample first")
            if query_id not in self.queries_by_id:
                raise ApiError(404, f"unknown query_id {query_id!r}")
            if query_id not in self.sample_set:
                raise ApiError(404, f"query_id {query_id!r} is not in the review sample")
            label = Label(
                query_id=query_id,
                category=category,
                answer_correct=answer_correct,
                reviewer=reviewer,
                ts=len(self.labels),
            )
            self.ws.append_label(
                {
                    "query_id": label.query_id,
                    "category": label.category,
                    "answer_correct": label.answer_correct,
                    "reviewer": label.reviewer,
                    "ts": label.ts,
                }
            )
            self.labels.append(label)
            return {"version": 1, "ok": True, **self._metrics_locked()}

    # metrics ----------------------------------------------------------

    def _precision(self):
        try:
            est = precision_with_interval(self.labels)
        except UsageError:
            return None
        return {
            "attempted": est.attempted,
            "correct": est.correct,
            "point": est.point,
            "lo": est.lo,
            "hi": est.hi,
            "z": est.z,
        }

    def _coverage(self) -> dict:
        theta = self.cfg.theta
        total = high = 0
        for q in self.queries:
            if q.state == "Pruned":
                continue
            total += 1
            rec = self.answers.get(q.query_id)
            if rec and rec.get("confidence", 0.0) >= theta:
                high += 1
        return {
            "theta": theta,
            "total": total,
            "high_conf": high,
            "coverage": high / total if total else 0.0,
        }

    def _metrics_locked(self) -> dict:
        cov = self._coverage()
        return {
            "coverage": cov,
            "precision": self._precision(),
            "utility_breakdown": utility_breakdown(self.labels),
            "rule_disagreements": rule_disagreements(self.queries_by_id, self.labels),
            "gaps_count": cov["total"] - cov["high_conf"],
        }

    def metrics(self) -> dict:
        with self.lock:
            return {"version": 1, **self._metrics_locked()}

    # queries ----------------------------------------------------------

    def queries_page(self, state: str | None, kind: str | None, page: int) -> dict:
        if page < 1:
            raise ApiError(400, "page must be >= 1")
        rows = [
            q
            for q in self.queries
            if (state is None or q.state == state) and (kind is None or q.kind == kind)
        ]
        pages = max(1, -(-len(rows) // PAGE_SIZE))
        if page > pages:
            raise ApiError(404, f"page {page} out of range (1..{pages})")
        start = (page - 1) * PAGE_SIZE
        with self.lock:
            chunk = [query_to_record(q) for q in rows[start : start + PAGE_SIZE]]
        return {
            "version": 1,
            "page": page,
            "pages": pages,
            "total": len(rows),
            "queries": chunk,
        }


class _Handler(BaseHTTPRequestHandler):
    service: ReviewService = None
    ui_dir: Path | None = None

    # quiet by default; tests and the CLI read stdout
    def log_message(self, fmt, *args):
        pass

    def _send_json(self, status: int, payload: dict) -> None:
        body = json.dumps(payload, sort_keys=True).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _send_error_json(self, status: int, message: str) -> None:
        self._send_json(status, {"version": 1, "error": message})

    def do_GET(self):
        try:
            url = urlparse(self.path)
            params = parse_qs(url.query)
            if url.path == "/api/review/next":
                reviewer = (params.get("reviewer") or [""])[0]
                item = self.service.next_item(reviewer)
                if item is None:
                    self.send_response(204)
                    self.end_headers()
                    return
                self._send_json(200, item)
            elif url.path == "/api/metrics":
                self._send_json(200, self.service.metrics())
            elif url.path == "/api/queries":
                state = (params.get("state") or [None])[0] or None
                kind = (params.get("kind") or [None])[0] or None
                try:
                    page = int((params.get("page") or ["1"])[0])
                except ValueError:
                    raise ApiError(400, "page must be an integer") from None
                self._send_json(200, self.service.queries_page(state, kind, page))
            else:
                self._serve_static(url.path)
        except ApiError as e:
            self._send_error_json(e.status, e.message)
        except (DataError, UsageError) as e:
            self._send_error_json(500, str(e))

    def do_POST(self):
        try:
            url = urlparse(self.path)
            if url.path != "/api/review/label":
                self._send_error_json(404, "unknown endpoint")
                return
            length = int(self.headers.get("Content-Length") or 0)
            raw = self.rfile.read(length) if length else b""
            try:
                payload = json.loads(raw.decode("utf-8")) if raw else {}
            except (json.JSONDecodeError, UnicodeDecodeError):
                raise ApiError(400, "malformed JSON body") from None
            self._send_json(200, self.service.submit_label(payload))
        except ApiError as e:
            self._send_error_json(e.status, e.message)
        except (DataError, UsageError) as e:
            self._send_error_json(500, str(e))

    def _serve_static(self, path: str) -> None:
        if self.ui_dir is None:
            self._send_error_json(404, "not found")
            return
        rel = path.lstrip("/") or "index.html"
        target = (self.ui_dir / rel).resolve()
        root = self.ui_dir.resolve()
        if root not in target.parents and target != root:
            self._send_error_json(404, "not found")
            return
        if target.is_dir():
            target = target / "index.html"
        if not target.is_file():
            self._send_error_json(404, "not found")
            return
        ctype = mimetypes.guess_type(str(target))[0] or "application/octet-stream"
        body = target.read_bytes()
        self.send_response(200)
        self.send_header("Content-Type", ctype)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)


def make_server(ws: Workspace, cfg: Config, port: int = 0, ui_dir=None) -> ThreadingHTTPServer:
    service = ReviewService(ws, cfg)
    resolved = Path(ui_dir) if ui_dir else None
    if resolved is None:
        default = Path("frontend") / "dist"
        if default.is_dir():
            resolved = default

    class Handler(_Handler):
        pass

    Handler.service = service
    Handler.ui_dir = resolved
    return ThreadingHTTPServer(("127.0.0.1", port), Handler)


def serve(ws: Workspace, cfg: Config, port: int, ui_dir=None) -> None:
    server = make_server(ws, cfg, port, ui_dir)
    host, bound = server.server_address[:2]
    print(f"serving on http://{host}:{bound}/ (workspace: {ws.root})", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
