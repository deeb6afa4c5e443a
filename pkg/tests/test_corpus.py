import json

import pytest

from conftest import build_fixture_corpus
from ssteval.corpus import (
    ParseError,
    load_candidates,
    load_corpus,
    load_documents,
    load_sessions,
    parse_session_record,
)
from ssteval.types import ValidationError


def _write(path, records):
    with open(path, "w", encoding="utf-8") as f:
        for rec in records:
            f.write(json.dumps(rec, ensure_ascii=False) + "\n")


DOC_RECORDS = [
    {"doc_id": "d1", "subset": "Common", "index": 0, "text": "Hello there.",
     "start_ms": 0, "end_ms": 2000},
    {"doc_id": "d1", "subset": "Common", "index": 1, "text": "Second part.",
     "start_ms": 2400, "end_ms": 4000},
    {"doc_id": "d2", "subset": "NonNative", "index": 0, "text": "Other doc.",
     "start_ms": 0, "end_ms": 1500},
]


def test_fixture_counts(fixture_store):
    store = fixture_store
    assert len(store.documents) == 4
    assert len(store.candidates) == 4 * 2 * 2
    assert store.systems == ["alpha", "beta"]
    assert store.latencies == ["high", "low"]
    # complete corpus: candidates per doc = systems x latencies
    for doc_id in store.documents:
        per_doc = [k for k in store.candidates if k[0] == doc_id]
        assert len(per_doc) == len(store.systems) * len(store.latencies)


def test_candidates_preprocessed(fixture_store):
    for cand in fixture_store.candidates.values():
        for _, text in cand.segments:
            assert not text.endswith("</s>")


def test_unknown_doc_id_is_fatal_and_named(tmp_path):
    _write(tmp_path / "docs.jsonl", DOC_RECORDS)
    _write(tmp_path / "cands.jsonl", [
        {"system": "s", "latency": "low", "doc_id": "ghost", "index": 0, "text": "x"},
    ])
    documents = load_documents(tmp_path / "docs.jsonl")
    with pytest.raises(ParseError, match="ghost"):
        load_candidates(tmp_path / "cands.jsonl", documents)


def test_duplicate_candidate_segment_is_fatal(tmp_path):
    _write(tmp_path / "docs.jsonl", DOC_RECORDS)
    _write(tmp_path / "cands.jsonl", [
        {"system": "s", "latency": "low", "doc_id": "d2", "index": 0, "text": "x"},
        {"system": "s", "latency": "low", "doc_id": "d2", "index": 0, "text": "y"},
    ])
    documents = load_documents(tmp_path / "docs.jsonl")
    with pytest.raises(ParseError, match="duplicate segment"):
        load_candidates(tmp_path / "cands.jsonl", documents)


def test_candidate_segment_mismatch_is_fatal(tmp_path):
    _write(tmp_path / "docs.jsonl", DOC_RECORDS)
    _write(tmp_path / "cands.jsonl", [
        {"system": "s", "latency": "low", "doc_id": "d1", "index": 0, "text": "x"},
    ])
    documents = load_documents(tmp_path / "docs.jsonl")
    with pytest.raises(ValidationError, match="do not match"):
        load_candidates(tmp_path / "cands.jsonl", documents)


def test_parse_errors_carry_line_numbers(tmp_path):
    path = tmp_path / "docs.jsonl"
    with open(path, "w", encoding="utf-8") as f:
        f.write(json.dumps(DOC_RECORDS[0]) + "\n")
        f.write('{"doc_id": "d1", "subset": "Common", "index": "one"}\n')
    with pytest.raises(ParseError, match=r":2:"):
        load_documents(path)


def test_detokenize_flag_applied(tmp_path):
    _write(tmp_path / "docs.jsonl", DOC_RECORDS[2:])
    _write(tmp_path / "cands.jsonl", [
        {"system": "tok", "latency": "low", "doc_id": "d2", "index": 0,
         "text": "Hallo , Welt .</s>"},
        {"system": "raw", "latency": "low", "doc_id": "d2", "index": 0,
         "text": "Hallo , Welt .</s>"},
    ])
    documents = load_documents(tmp_path / "docs.jsonl")
    candidates = load_candidates(
        tmp_path / "cands.jsonl", documents, detokenize_systems={"tok"}
    )
    assert candidates[("d2", "tok", "low")].texts == ["Hallo, Welt."]
    assert candidates[("d2", "raw", "low")].texts == ["Hallo , Welt ."]


def test_two_docs_two_systems_four_candidates(tmp_path):
    paths = build_fixture_corpus(
        str(tmp_path / "mini"), n_docs=2, systems=("s1", "s2"), latencies=("low",),
    )
    store = load_corpus(
        paths["documents"], paths["candidates"], paths["ref_translation"],
        paths["ref_interpreting"],
    )
    assert len(store.candidates) == 4


def test_iwslt_shaped_corpus_yields_900_pairs(tmp_path):
    """60 documents x 5 systems x 3 latencies = 900 candidate documents."""
    root = tmp_path / "big"
    paths = build_fixture_corpus(
        str(root), n_docs=60,
        systems=("s1", "s2", "s3", "s4", "s5"),
        latencies=("low", "medium", "high"),
        seed=99,
    )
    store = load_corpus(
        paths["documents"], paths["candidates"], paths["ref_translation"],
        paths["ref_interpreting"],
    )
    assert len(store.documents) == 60
    assert len(store.candidates) == 900


class TestSessionParsing:
    BASE = {"evaluator": "e", "doc_id": "d", "system": "s", "latency": "low",
            "duration_ms": 10_000}

    def _rec(self, clicks):
        return {**self.BASE, "clicks": clicks}

    def test_valid(self):
        session = parse_session_record(self._rec(
            [{"t_ms": 100, "value": 3}, {"t_ms": 300, "value": 4}]
        ))
        assert [c.value for c in session.clicks] == [3, 4]

    def test_value_out_of_range(self):
        with pytest.raises(ParseError, match="outside 1..4"):
            parse_session_record(self._rec([{"t_ms": 100, "value": 5}]))

    def test_negative_time_rejected(self):
        with pytest.raises(ParseError, match="before playback"):
            parse_session_record(self._rec([{"t_ms": -5, "value": 2}]))

    def test_click_after_end_rejected(self):
        with pytest.raises(ParseError, match="after document end"):
            parse_session_record(self._rec([{"t_ms": 10_500, "value": 2}]))

    def test_decreasing_times_rejected(self):
        with pytest.raises(ParseError, match="not increasing"):
            parse_session_record(self._rec(
                [{"t_ms": 500, "value": 2}, {"t_ms": 400, "value": 3}]
            ))

    def test_equal_timestamps_keep_last(self, caplog):
        session = parse_session_record(self._rec(
            [{"t_ms": 500, "value": 2}, {"t_ms": 500, "value": 4}]
        ))
        assert [(c.t_ms, c.value) for c in session.clicks] == [(500, 4)]

    def test_zero_click_sessions_skipped(self, tmp_path):
        path = tmp_path / "sessions.jsonl"
        _write(path, [self._rec([]), self._rec([{"t_ms": 1, "value": 1}])])
        sessions = load_sessions(path, documents=None)
        assert len(sessions) == 1

    def test_truncated_trailing_line_ignored(self, tmp_path):
        path = tmp_path / "sessions.jsonl"
        with open(path, "w", encoding="utf-8") as f:
            f.write(json.dumps(self._rec([{"t_ms": 1, "value": 2}])) + "\n")
            f.write('{"evaluator": "e", "doc')  # crashed writer
        sessions = load_sessions(path, documents=None)
        assert len(sessions) == 1
