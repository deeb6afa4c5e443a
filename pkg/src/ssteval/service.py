"""Rating-collection service: hands out session packages for replay and
persists submitted click logs.

State is append-only JSONL in a writable directory, flushed and fsynced per
record, so a crash can at worst leave one truncated trailing line (ignored
on reload). The one-pass rule — an evaluator sees each document once,
whatever the candidate — is enforced against that durable state and
therefore survives restarts.
"""

import json
import logging
import os
import random
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import parse_qs, urlparse

from .corpus import iter_jsonl, parse_session_record
from .types import ValidationError

log = logging.getLogger(__name__)


class OnePassViolation(ValidationError):
    pass


def build_session_package(doc, cand, evaluator):
    """Replay package for one candidate document.

    Captions come from the candidate's caption events when present; the
    initial wait before the first target token is dropped by shifting all
    events left so the first caption lands at the first source segment's
    start. Candidates without event timing fall back to one caption per
    segment at the segment's source end time.
    """
    if cand.caption_events:
        events = [(e.t_ms, e.text) for e in cand.caption_events]
        shift = events[0][0] - doc.segments[0].start_ms
        if shift > 0:
            events = [(t - shift, text) for t, text in events]
    else:
        events = [
            (doc.segments[i].end_ms, text)
            for i, text in cand.segments
            if text
        ]
    duration = doc.segments[-1].end_ms
    if events:
        duration = max(duration, events[-1][0])
    return {
        "evaluator": evaluator,
        "doc_id": doc.doc_id,
        "system": cand.system_id,
        "latency": cand.latency,
        "duration_ms": duration,
        "events": [{"t_ms": t, "text": text} for t, text in events],
    }


class RatingService:
    def __init__(self, store, state_dir, seed=None):
        self.store = store
        self.state_dir = str(state_dir)
        os.makedirs(self.state_dir, exist_ok=True)
        self._lock = threading.Lock()
        self._fetched = set()  # (evaluator, doc_id)
        self._submitted = set()  # (evaluator, doc_id)
        self._fetch_counts = {}  # candidate key -> times handed out
        self.seed = self._load_seed(seed)
        self._order = sorted(store.candidates)
        random.Random(self.seed).shuffle(self._order)
        self._rank = {key: i for i, key in enumerate(self._order)}
        self._load_state()

    # -- durable state ---------------------------------------------------

    def _load_seed(self, seed):
        path = os.path.join(self.state_dir, "assignment.json")
        if os.path.exists(path):
            with open(path, encoding="utf-8") as f:
                return json.load(f)["seed"]
        if seed is None:
            seed = random.SystemRandom().randrange(2**31)
        with open(path, "w", encoding="utf-8") as f:
            json.dump({"seed": seed}, f)
        return seed

    def _load_state(self):
        fetched_path = os.path.join(self.state_dir, "fetched.jsonl")
        if os.path.exists(fetched_path):
            for _, rec in iter_jsonl(fetched_path):
                self._fetched.add((rec["evaluator"], rec["doc_id"]))
                key = (rec["doc_id"], rec["system"], rec["latency"])
                self._fetch_counts[key] = self._fetch_counts.get(key, 0) + 1
        sessions_path = os.path.join(self.state_dir, "sessions.jsonl")
        if os.path.exists(sessions_path):
            for _, rec in iter_jsonl(sessions_path):
                self._submitted.add((rec["evaluator"], rec["doc_id"]))

    def _append(self, filename, record):
        path = os.path.join(self.state_dir, filename)
        with open(path, "a", encoding="utf-8") as f:
            f.write(json.dumps(record, ensure_ascii=False) + "\n")
            f.flush()
            os.fsync(f.fileno())

    # -- operations ------------------------------------------------------

    def assignments(self, evaluator):
        """Pending candidates for this evaluator: least-fetched first over
        the seeded shuffle, skipping documents the evaluator already saw."""
        with self._lock:
            pending = [
                key for key in self._order
                if (evaluator, key[0]) not in self._fetched
            ]
            pending.sort(key=lambda k: (self._fetch_counts.get(k, 0), self._rank[k]))
        return [
            {"doc_id": d, "system": s, "latency": lat} for d, s, lat in pending
        ]

    def fetch_package(self, evaluator, doc_id=None, system=None, latency=None):
        if not evaluator:
            raise ValidationError("evaluator id required")
        with self._lock:
            if doc_id is None:
                pending = [
                    key for key in self._order
                    if (evaluator, key[0]) not in self._fetched
                ]
                if not pending:
                    raise ValidationError("no pending assignments for this evaluator")
                pending.sort(
                    key=lambda k: (self._fetch_counts.get(k, 0), self._rank[k])
                )
                doc_id, system, latency = pending[0]
            key = (doc_id, system, latency)
            if key not in self.store.candidates:
                raise ValidationError(f"unknown candidate {key}")
            if (evaluator, doc_id) in self._fetched:
                raise OnePassViolation(
                    f"evaluator {evaluator} has already seen document {doc_id}"
                )
            self._fetched.add((evaluator, doc_id))
            self._fetch_counts[key] = self._fetch_counts.get(key, 0) + 1
            self._append(
                "fetched.jsonl",
                {"evaluator": evaluator, "doc_id": doc_id, "system": system,
                 "latency": latency},
            )
        doc = self.store.documents[doc_id]
        cand = self.store.candidates[key]
        return build_session_package(doc, cand, evaluator)

    def submit_log(self, record):
        """Validate and persist one click log; nothing is written unless
        the whole record is valid."""
        session = parse_session_record(record, "<submitted>", 0, self.store.documents)
        if not session.clicks:
            raise ValidationError("log has no clicks")
        key = session.candidate_key
        if key not in self.store.candidates:
            raise ValidationError(f"unknown candidate {key}")
        with self._lock:
            if (session.evaluator_id, session.doc_id) not in self._fetched:
                raise ValidationError(
                    "no fetched package for this evaluator and document"
                )
            if (session.evaluator_id, session.doc_id) in self._submitted:
                raise ValidationError("log for this document already submitted")
            self._submitted.add((session.evaluator_id, session.doc_id))
            self._append("sessions.jsonl", record)
        return session


# -------------------------------------------------------------------------
# HTTP front


def make_handler(service, ui_dir=None):
    class Handler(BaseHTTPRequestHandler):
        protocol_version = "HTTP/1.1"

        def log_message(self, fmt, *args):
            log.info("%s " + fmt, self.address_string(), *args)

        def _send(self, status, payload, content_type="application/json"):
            body = (
                json.dumps(payload, ensure_ascii=False).encode("utf-8")
                if content_type == "application/json"
                else payload
            )
            self.send_response(status)
            self.send_header("Content-Type", content_type + "; charset=utf-8")
            self.send_header("Content-Length", str(len(body)))
            self.send_header("Access-Control-Allow-Origin", "*")
            self.end_headers()
            self.wfile.write(body)

        def _read_json(self):
            length = int(self.headers.get("Content-Length", 0))
            try:
                return json.loads(self.rfile.read(length).decode("utf-8"))
            except (ValueError, UnicodeDecodeError) as e:
                raise ValidationError(f"request body is not valid JSON: {e}") from e

        def do_GET(self):
            url = urlparse(self.path)
            if url.path == "/api/assignments":
                evaluator = parse_qs(url.query).get("evaluator", [""])[0]
                if not evaluator:
                    return self._send(400, {"error": "evaluator query parameter required"})
                return self._send(
                    200,
                    {"evaluator": evaluator, "pending": service.assignments(evaluator)},
                )
            if url.path == "/healthz":
                return self._send(200, {"ok": True})
            if ui_dir:
                return self._serve_static(url.path)
            return self._send(404, {"error": "not found"})

        def do_POST(self):
            url = urlparse(self.path)
            try:
                if url.path == "/api/package":
                    body = self._read_json()
                    package = service.fetch_package(
                        body.get("evaluator", ""),
                        body.get("doc_id"),
                        body.get("system"),
                        body.get("latency"),
                    )
                    return self._send(200, package)
                if url.path == "/api/ratings":
                    body = self._read_json()
                    session = service.submit_log(body)
                    return self._send(
                        200, {"ok": True, "clicks": len(session.clicks)}
                    )
            except OnePassViolation as e:
                return self._send(409, {"error": str(e)})
            except ValidationError as e:
                return self._send(400, {"error": str(e)})
            return self._send(404, {"error": "not found"})

        def _serve_static(self, path):
            name = path.lstrip("/") or "index.html"
            name = os.path.normpath(name)
            if name.startswith(("..", "/")):
                return self._send(404, {"error": "not found"})
            full = os.path.join(ui_dir, name)
            if not os.path.isfile(full):
                return self._send(404, {"error": "not found"})
            types = {
                ".html": "text/html",
                ".js": "application/javascript",
                ".css": "text/css",
                ".svg": "image/svg+xml",
                ".json": "application/json",
            }
            ctype = types.get(os.path.splitext(name)[1], "application/octet-stream")
            with open(full, "rb") as f:
                return self._send(200, f.read(), content_type=ctype)

    return Handler


def serve(store, state_dir, port=8571, ui_dir=None, seed=None):
    service = RatingService(store, state_dir, seed=seed)
    server = ThreadingHTTPServer(("127.0.0.1", port), make_handler(service, ui_dir))
    log.info("rating service on http://127.0.0.1:%d (state: %s, seed: %d)",
             port, state_dir, service.seed)
    return server
