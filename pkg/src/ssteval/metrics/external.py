"""Bridge to out-of-process neural scorers (COMET, BertScore, ...).

The toolkit never embeds model inference. A scorer is any command that
reads line-delimited JSON records {id, src?, hyp, ref} on stdin and writes
{id, score} records to stdout; anything else it wants to say must go to
stderr. Scores are cached under a content hash of (scorer identity,
record), so repeated runs never re-invoke the command.
"""

import hashlib
import json
import logging
import os
import shlex
import subprocess
import tempfile
from dataclasses import dataclass

log = logging.getLogger(__name__)


class ScorerError(RuntimeError):
    pass


@dataclass(frozen=True)
class ExternalScorer:
    name: str
    command: str

    @property
    def identity(self):
        return f"{self.name}::{self.command}"


class ScoreCache:
    """One small JSON file per (scorer, record) content hash. Writes go
    through a same-directory temp file and an atomic rename, so concurrent
    readers never observe a partial value."""

    def __init__(self, cache_dir):
        self.cache_dir = str(cache_dir)

    @staticmethod
    def key(scorer_identity, record):
        payload = json.dumps(
            {"scorer": scorer_identity, "record": {
                k: record[k] for k in sorted(record) if k != "id"
            }},
            sort_keys=True,
            ensure_ascii=False,
        )
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()

    def _path(self, key):
        return os.path.join(self.cache_dir, key[:2], key + ".json")

    def get(self, key):
        try:
            with open(self._path(key), encoding="utf-8") as f:
                return float(json.load(f)["score"])
        except FileNotFoundError:
            return None
        except (ValueError, KeyError, TypeError):
            log.warning("cache entry %s is corrupt, recomputing", key)
            return None

    def put(self, key, score):
        path = self._path(key)
        os.makedirs(os.path.dirname(path), exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=os.path.dirname(path), suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as f:
                json.dump({"score": score}, f)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise


def _run_scorer(scorer, records):
    stdin_data = "".join(
        json.dumps(rec, ensure_ascii=False, sort_keys=True) + "\n" for rec in records
    )
    try:
        proc = subprocess.run(
            shlex.split(scorer.command),
            input=stdin_data.encode("utf-8"),
            stdout=subprocess.PIPE,
            stderr=subprocess.PIPE,
        )
    except FileNotFoundError as e:
        raise ScorerError(f"scorer {scorer.name}: command not found: {e}") from e
    stderr = proc.stderr.decode("utf-8", "replace").strip()
    if stderr:
        log.info("scorer %s stderr: %s", scorer.name, stderr[-2000:])
    if proc.returncode != 0:
        raise ScorerError(
            f"scorer {scorer.name} exited with status {proc.returncode}"
            + (f": {stderr[-500:]}" if stderr else "")
        )
    scores = {}
    for line in proc.stdout.decode("utf-8").splitlines():
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
            scores[rec["id"]] = float(rec["score"])
        except (ValueError, KeyError, TypeError) as e:
            raise ScorerError(
                f"scorer {scorer.name} wrote a non-protocol stdout line: {line[:200]!r}"
            ) from e
    return scores


def external_score(scorer, batch, cache=None):
    """Score a batch of {id, src?, hyp, ref} records; returns [{id, score}]
    in input order. Cached entries are served without touching the scorer;
    the command runs at most once, on the cache misses only."""
    ids = [rec["id"] for rec in batch]
    if len(set(ids)) != len(ids):
        raise ScorerError("batch ids must be unique")
    results = {}
    pending = []
    keys = {}
    for rec in batch:
        key = ScoreCache.key(scorer.identity, rec)
        keys[rec["id"]] = key
        cached = cache.get(key) if cache is not None else None
        if cached is not None:
            results[rec["id"]] = cached
        else:
            pending.append(rec)

    if pending:
        scored = _run_scorer(scorer, pending)
        missing = [rec["id"] for rec in pending if rec["id"] not in scored]
        if missing:
            raise ScorerError(
                f"scorer {scorer.name} omitted {len(missing)} id(s): "
                + ", ".join(str(m) for m in missing[:10])
            )
        unknown = set(scored) - set(ids)
        if unknown:
            log.warning("scorer %s returned %d unknown id(s), ignored", scorer.name, len(unknown))
        for rec in pending:
            score = scored[rec["id"]]
            results[rec["id"]] = score
            if cache is not None:
                cache.put(keys[rec["id"]], score)

    return [{"id": i, "score": results[i]} for i in ids]
