import json
import os
import random
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))  # oracles module

STUB_SCORER = os.path.join(os.path.dirname(__file__), "stub_scorer.py")

# small German-ish sentence pool the fixture corpus is assembled from
_SENTENCES = [
    "Guten Morgen und herzlich willkommen zu diesem Vortrag.",
    "Heute sprechen wir über maschinelle Übersetzung in Echtzeit.",
    "Die Qualität der Untertitel ist dabei entscheidend.",
    "Viele Zuschauer lesen die Übersetzung während des Vortrags.",
    "Wir vergleichen mehrere Systeme unter gleichen Bedingungen.",
    "Die Ergebnisse zeigen deutliche Unterschiede zwischen den Ansätzen.",
    "Eine geringe Verzögerung ist für das Publikum angenehmer.",
    "Trotzdem darf die Genauigkeit nicht darunter leiden.",
    "Am Ende fassen wir die wichtigsten Punkte zusammen.",
    "Vielen Dank für Ihre Aufmerksamkeit und Ihre Fragen.",
    "Das Thema betrifft Konferenzen ebenso wie den Unterricht.",
    "Automatische Bewertung spart Zeit und Geld.",
]

_JUNK = ["blork", "zint", "frap", "quul", "melk", "dronk", "splin", "vort"]


def _corrupt(rng, text, quality):
    """Word-level noise inversely proportional to quality in [0, 1]."""
    words = text.split()
    out = []
    for w in words:
        roll = rng.random()
        if roll < (1.0 - quality) * 0.45:
            out.append(rng.choice(_JUNK))
        elif roll < (1.0 - quality) * 0.55:
            continue  # dropped word
        else:
            out.append(w)
    if not out:
        out = [rng.choice(_JUNK)]
    return " ".join(out)


def build_fixture_corpus(root, n_docs=4, systems=("alpha", "beta"),
                         latencies=("low", "high"), seed=20240501):
    """Write a deterministic synthetic corpus under `root` and return the
    file paths. Quality varies by (system, latency, doc) and the rating
    sessions track it, so correlations are non-trivial."""
    rng = random.Random(seed)
    os.makedirs(root, exist_ok=True)
    paths = {
        name: os.path.join(root, f"{name}.jsonl")
        for name in ("documents", "candidates", "ref_translation",
                     "ref_interpreting", "sessions")
    }

    # quality spread over systems and latencies, best first
    quality = {}
    for si, system in enumerate(systems):
        for li, latency in enumerate(latencies):
            quality[(system, latency)] = max(
                0.2, 0.92 - 0.3 * si / max(1, len(systems) - 1) - 0.12 * li
            )

    docs = []
    for d in range(n_docs):
        doc_id = f"doc{d + 1:02d}"
        subset = "Common" if d < n_docs // 2 else "NonNative"
        n_seg = 3 + d % 2
        start = 0
        segments = []
        for i in range(n_seg):
            text = _SENTENCES[(d * 3 + i) % len(_SENTENCES)]
            dur = 2500 + 150 * len(text.split())
            segments.append({"index": i, "text": f"Source {doc_id} {i}: {text}",
                             "start_ms": start, "end_ms": start + dur})
            start += dur + 400
        docs.append({"doc_id": doc_id, "subset": subset, "segments": segments})

    with open(paths["documents"], "w", encoding="utf-8") as f:
        for doc in docs:
            for seg in doc["segments"]:
                f.write(json.dumps({"doc_id": doc["doc_id"], "subset": doc["subset"],
                                    **seg}, ensure_ascii=False) + "\n")

    # translation reference: the German pool sentences themselves
    transl = {}
    with open(paths["ref_translation"], "w", encoding="utf-8") as f:
        for d, doc in enumerate(docs):
            transl[doc["doc_id"]] = []
            for i in range(len(doc["segments"])):
                text = _SENTENCES[(d * 3 + i + 1) % len(_SENTENCES)]
                transl[doc["doc_id"]].append(text)
                f.write(json.dumps({"doc_id": doc["doc_id"], "index": i, "text": text},
                                   ensure_ascii=False) + "\n")

    # interpreting: same content re-chunked (2 chunks) with light paraphrase noise
    with open(paths["ref_interpreting"], "w", encoding="utf-8") as f:
        for doc in docs:
            words = " ".join(transl[doc["doc_id"]]).split()
            cut = len(words) // 2 + rng.randrange(-3, 4)
            chunks = [" ".join(words[:cut]), " ".join(words[cut:])]
            for c, chunk in enumerate(chunks):
                f.write(json.dumps({
                    "doc_id": doc["doc_id"], "chunk": c,
                    "text": _corrupt(rng, chunk, 0.93),
                }, ensure_ascii=False) + "\n")

    with open(paths["candidates"], "w", encoding="utf-8") as f:
        for doc in docs:
            for system in systems:
                for latency in latencies:
                    q = quality[(system, latency)]
                    for i in range(len(doc["segments"])):
                        text = _corrupt(rng, transl[doc["doc_id"]][i], q)
                        rec = {"system": system, "latency": latency,
                               "doc_id": doc["doc_id"], "index": i,
                               "text": text + "</s>"}
                        if doc["doc_id"] == "doc01":
                            end = doc["segments"][i]["end_ms"]
                            words = text.split()
                            half = max(1, len(words) // 2)
                            rec["events"] = [
                                {"t_ms": end + 300, "text": " ".join(words[:half])},
                                {"t_ms": end + 900, "text": " ".join(words[half:])},
                            ]
                        f.write(json.dumps(rec, ensure_ascii=False) + "\n")

    evaluators = ["eva", "ben", "cam"]
    with open(paths["sessions"], "w", encoding="utf-8") as f:
        skip_first = True
        for doc in docs:
            duration = doc["segments"][-1]["end_ms"]
            for system in systems:
                for latency in latencies:
                    if skip_first:
                        skip_first = False  # one candidate stays unrated
                        continue
                    q = quality[(system, latency)]
                    n_raters = 2 if rng.random() < 0.5 else 1
                    for evaluator in rng.sample(evaluators, n_raters):
                        n_clicks = rng.randrange(3, 7)
                        times = sorted(rng.sample(range(500, duration - 200, 250),
                                                  n_clicks))
                        clicks = []
                        for t in times:
                            base = 1.0 + 3.0 * q + rng.gauss(0, 0.55)
                            clicks.append({"t_ms": t,
                                           "value": max(1, min(4, round(base)))})
                        f.write(json.dumps({
                            "evaluator": evaluator, "doc_id": doc["doc_id"],
                            "system": system, "latency": latency,
                            "duration_ms": duration, "clicks": clicks,
                        }, ensure_ascii=False) + "\n")
    return paths


def write_fixture_config(root, paths, cache_dir=None, out_dir=None, **overrides):
    config = {
        "paths": {name: os.path.relpath(p, root) for name, p in paths.items()},
        "language": "de",
        "detokenize_systems": [],
        "scorers": {
            "COMET": f"{sys.executable} {STUB_SCORER} --mode overlap",
            "BertScore": f"{sys.executable} {STUB_SCORER} --mode overlap",
        },
        "cache_dir": cache_dir,
        "out_dir": out_dir or os.path.join(root, "out"),
        "subsets": ["both", "Common", "NonNative"],
        "aggregations": ["averaged", "all_ratings"],
        "cr_definition": "CR",
        "thresholds": [0.05, 0.1],
    }
    config.update(overrides)
    path = os.path.join(root, "config.json")
    with open(path, "w", encoding="utf-8") as f:
        json.dump(config, f, ensure_ascii=False, indent=2)
    return path


@pytest.fixture(scope="session")
def fixture_corpus(tmp_path_factory):
    root = tmp_path_factory.mktemp("corpus")
    paths = build_fixture_corpus(str(root))
    return {"root": str(root), "paths": paths}


@pytest.fixture(scope="session")
def fixture_store(fixture_corpus):
    from ssteval.corpus import load_corpus

    p = fixture_corpus["paths"]
    return load_corpus(
        p["documents"], p["candidates"], p["ref_translation"],
        p["ref_interpreting"], p["sessions"],
    )
