"""Corpus ingestion: documents, candidate outputs, references and rating
logs from line-delimited JSON, cross-referenced into an immutable store."""

import json
import logging
from dataclasses import dataclass

from .preprocess import detokenize, strip_terminal_eos
from .types import (
    CandidateOutput,
    CaptionEvent,
    Document,
    LATENCIES,
    RatingClick,
    RatingSession,
    ReferenceSet,
    SourceSegment,
    SUBSETS,
    ValidationError,
)

log = logging.getLogger(__name__)


class ParseError(ValidationError):
    """Input record failed validation; message carries file and line."""

    def __init__(self, path, lineno, message):
        super().__init__(f"{path}:{lineno}: {message}")
        self.path = str(path)
        self.lineno = lineno


def iter_jsonl(path):
    """Yield (lineno, record) for every non-blank line; the final line of a
    crashed append may be truncated, so a trailing undecodable fragment
    without a newline is skipped with a warning instead of failing."""
    with open(path, encoding="utf-8") as f:
        data = f.read()
    lines = data.split("\n")
    ends_complete = data.endswith("\n")
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            yield lineno, json.loads(line)
        except json.JSONDecodeError as e:
            if lineno == len(lines) and not ends_complete:
                log.warning("%s:%d: ignoring truncated trailing record", path, lineno)
                continue
            raise ParseError(path, lineno, f"invalid JSON: {e.msg}") from e


def _need(record, field, kind, path, lineno):
    if field not in record:
        raise ParseError(path, lineno, f"missing field {field!r}")
    value = record[field]
    if kind is int and isinstance(value, bool):
        raise ParseError(path, lineno, f"field {field!r}: expected integer")
    if not isinstance(value, kind):
        raise ParseError(
            path, lineno, f"field {field!r}: expected {kind.__name__}, got {type(value).__name__}"
        )
    return value


def load_documents(path):
    """One record per source segment -> Document objects keyed by doc_id."""
    segments = {}
    subsets = {}
    order = []
    for lineno, rec in iter_jsonl(path):
        doc_id = _need(rec, "doc_id", str, path, lineno)
        subset = _need(rec, "subset", str, path, lineno)
        if subset not in SUBSETS:
            raise ParseError(path, lineno, f"subset must be one of {SUBSETS}, got {subset!r}")
        index = _need(rec, "index", int, path, lineno)
        text = _need(rec, "text", str, path, lineno)
        start_ms = _need(rec, "start_ms", int, path, lineno)
        end_ms = _need(rec, "end_ms", int, path, lineno)
        if doc_id not in segments:
            segments[doc_id] = {}
            subsets[doc_id] = subset
            order.append(doc_id)
        elif subsets[doc_id] != subset:
            raise ParseError(path, lineno, f"document {doc_id}: conflicting subset labels")
        if index in segments[doc_id]:
            raise ParseError(path, lineno, f"document {doc_id}: duplicate segment index {index}")
        try:
            segments[doc_id][index] = SourceSegment(index, text, start_ms, end_ms)
        except ValidationError as e:
            raise ParseError(path, lineno, str(e)) from e

    documents = {}
    for doc_id in order:
        segs = segments[doc_id]
        try:
            documents[doc_id] = Document(
                doc_id, subsets[doc_id], tuple(segs[i] for i in sorted(segs))
            )
        except (ValidationError, KeyError) as e:
            raise ValidationError(f"{path}: document {doc_id}: {e}") from e
    return documents


def load_candidates(path, documents, detokenize_systems=(), language="de"):
    """One record per candidate segment; applies per-system detokenization
    and always strips the terminal end-of-sequence marker."""
    raw = {}
    events = {}
    order = []
    for lineno, rec in iter_jsonl(path):
        system = _need(rec, "system", str, path, lineno)
        latency = _need(rec, "latency", str, path, lineno)
        if latency not in LATENCIES:
            raise ParseError(path, lineno, f"latency must be one of {LATENCIES}, got {latency!r}")
        doc_id = _need(rec, "doc_id", str, path, lineno)
        if doc_id not in documents:
            raise ParseError(path, lineno, f"candidate references unknown doc_id {doc_id!r}")
        index = _need(rec, "index", int, path, lineno)
        text = _need(rec, "text", str, path, lineno)
        key = (doc_id, system, latency)
        if key not in raw:
            raw[key] = {}
            events[key] = []
            order.append(key)
        if index in raw[key]:
            raise ParseError(
                path, lineno,
                f"duplicate segment {index} for candidate (doc={doc_id}, system={system}, "
                f"latency={latency})",
            )
        if text.strip():
            # strip the marker first so a glued ".</s>" cannot shield the
            # final punctuation from detokenization
            text = strip_terminal_eos(text)
            if system in detokenize_systems:
                text = detokenize(text, language)
        raw[key][index] = text
        for ev in rec.get("events") or []:
            t_ms = _need(ev, "t_ms", int, path, lineno)
            ev_text = _need(ev, "text", str, path, lineno)
            events[key].append(CaptionEvent(t_ms, ev_text))

    candidates = {}
    for key in order:
        doc_id, system, latency = key
        doc = documents[doc_id]
        segs = raw[key]
        expected = [seg.index for seg in doc.segments]
        if sorted(segs) != expected:
            raise ValidationError(
                f"{path}: candidate (doc={doc_id}, system={system}, latency={latency}) "
                f"segment indices {sorted(segs)} do not match the document's {expected}"
            )
        candidates[key] = CandidateOutput(
            system_id=system,
            latency=latency,
            doc_id=doc_id,
            segments=tuple((i, segs[i]) for i in expected),
            caption_events=tuple(sorted(events[key], key=lambda e: e.t_ms)),
        )
    return candidates


def load_references(transl_path, intp_path, documents):
    transl = {}
    for lineno, rec in iter_jsonl(transl_path):
        doc_id = _need(rec, "doc_id", str, transl_path, lineno)
        if doc_id not in documents:
            raise ParseError(transl_path, lineno, f"reference for unknown doc_id {doc_id!r}")
        index = _need(rec, "index", int, transl_path, lineno)
        text = _need(rec, "text", str, transl_path, lineno)
        transl.setdefault(doc_id, {})
        if index in transl[doc_id]:
            raise ParseError(transl_path, lineno, f"duplicate translation segment {doc_id}/{index}")
        transl[doc_id][index] = text

    intp = {}
    for lineno, rec in iter_jsonl(intp_path):
        doc_id = _need(rec, "doc_id", str, intp_path, lineno)
        if doc_id not in documents:
            raise ParseError(intp_path, lineno, f"reference for unknown doc_id {doc_id!r}")
        chunk = _need(rec, "chunk", int, intp_path, lineno)
        text = _need(rec, "text", str, intp_path, lineno)
        intp.setdefault(doc_id, {})
        if chunk in intp[doc_id]:
            raise ParseError(intp_path, lineno, f"duplicate interpreting chunk {doc_id}/{chunk}")
        intp[doc_id][chunk] = text

    references = {}
    for doc_id, doc in documents.items():
        if doc_id not in transl:
            raise ValidationError(f"{transl_path}: no translation reference for document {doc_id}")
        if doc_id not in intp:
            raise ValidationError(f"{intp_path}: no interpreting reference for document {doc_id}")
        t = transl[doc_id]
        if sorted(t) != [seg.index for seg in doc.segments]:
            raise ValidationError(
                f"{transl_path}: translation for {doc_id} is not 1:1 with source segments"
            )
        c = intp[doc_id]
        references[doc_id] = ReferenceSet(
            doc_id=doc_id,
            translation=tuple(t[i] for i in sorted(t)),
            interpreting=tuple(c[i] for i in sorted(c)),
        )
    return references


def parse_session_record(rec, path="<record>", lineno=0, documents=None):
    """Validate one rating-log record and return a RatingSession.

    Equal-timestamp click runs collapse to their last click (UI debouncing
    artifact); clicks out of order, out of range or outside [0, duration]
    are rejected.
    """
    evaluator = _need(rec, "evaluator", str, path, lineno)
    doc_id = _need(rec, "doc_id", str, path, lineno)
    if documents is not None and doc_id not in documents:
        raise ParseError(path, lineno, f"rating session references unknown doc_id {doc_id!r}")
    system = _need(rec, "system", str, path, lineno)
    latency = _need(rec, "latency", str, path, lineno)
    if latency not in LATENCIES:
        raise ParseError(path, lineno, f"latency must be one of {LATENCIES}, got {latency!r}")
    duration_ms = _need(rec, "duration_ms", int, path, lineno)
    if duration_ms <= 0:
        raise ParseError(path, lineno, f"duration_ms must be positive, got {duration_ms}")
    clicks = []
    for click in _need(rec, "clicks", list, path, lineno):
        t_ms = _need(click, "t_ms", int, path, lineno)
        value = _need(click, "value", int, path, lineno)
        if not 1 <= value <= 4:
            raise ParseError(path, lineno, f"click value {value} outside 1..4")
        if t_ms < 0:
            raise ParseError(path, lineno, f"click at t_ms {t_ms} before playback start")
        if t_ms > duration_ms:
            raise ParseError(path, lineno, f"click at t_ms {t_ms} after document end {duration_ms}")
        if clicks and t_ms < clicks[-1].t_ms:
            raise ParseError(path, lineno, f"click times not increasing at t_ms {t_ms}")
        if clicks and t_ms == clicks[-1].t_ms:
            log.warning("%s:%s: equal-timestamp clicks at %d ms, keeping the last", path, lineno, t_ms)
            clicks[-1] = RatingClick(t_ms, value)
        else:
            clicks.append(RatingClick(t_ms, value))
    return RatingSession(
        evaluator_id=evaluator,
        doc_id=doc_id,
        system_id=system,
        latency=latency,
        duration_ms=duration_ms,
        clicks=tuple(clicks),
    )


def load_sessions(path, documents, candidates=None):
    sessions = []
    for lineno, rec in iter_jsonl(path):
        session = parse_session_record(rec, path, lineno, documents)
        if not session.clicks:
            log.warning("%s:%d: session with no clicks skipped (unrated)", path, lineno)
            continue
        if candidates is not None and session.candidate_key not in candidates:
            log.warning(
                "%s:%d: session for unknown candidate %s kept but will not pair with any score",
                path, lineno, session.candidate_key,
            )
        sessions.append(session)
    return sessions


@dataclass(frozen=True)
class CorpusStore:
    """Cross-referenced, immutable view of one evaluation campaign."""

    documents: dict  # doc_id -> Document
    candidates: dict  # (doc_id, system, latency) -> CandidateOutput
    references: dict  # doc_id -> ReferenceSet
    sessions: tuple  # RatingSession

    @property
    def systems(self):
        return sorted({c.system_id for c in self.candidates.values()})

    @property
    def latencies(self):
        return sorted({c.latency for c in self.candidates.values()})

    def doc_ids(self, subset="both"):
        return [
            d for d, doc in self.documents.items()
            if subset == "both" or doc.subset == subset
        ]


def load_corpus(documents_path, candidates_path, ref_translation_path,
                ref_interpreting_path, sessions_path=None,
                detokenize_systems=(), language="de"):
    documents = load_documents(documents_path)
    candidates = load_candidates(candidates_path, documents, detokenize_systems, language)
    references = load_references(ref_translation_path, ref_interpreting_path, documents)
    sessions = ()
    if sessions_path is not None:
        sessions = tuple(load_sessions(sessions_path, documents, candidates))
    return CorpusStore(documents, candidates, references, sessions)
