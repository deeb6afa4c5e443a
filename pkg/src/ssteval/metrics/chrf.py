"""Document chrF: character n-gram F-score, orders 1-6, beta = 2.

Whitespace is removed before n-gram extraction, per-segment statistics are
pooled over the document, and with several references each segment keeps
the statistics of its best-scoring one. The final score averages per-order
F over the orders where either side produced any n-grams, so an identical
hypothesis scores exactly 100 regardless of segment length.
"""

import re
from collections import Counter

from ..types import ValidationError

CHAR_ORDER = 6
BETA = 2

_WS = re.compile(r"\s+")


def _char_ngrams(s, n):
    return Counter(s[i : i + n] for i in range(len(s) - n + 1))


def _segment_stats(hyp, ref, max_order):
    hyp = _WS.sub("", hyp)
    ref = _WS.sub("", ref)
    stats = []
    for n in range(1, max_order + 1):
        hyp_counts = _char_ngrams(hyp, n)
        ref_counts = _char_ngrams(ref, n)
        match = sum((hyp_counts & ref_counts).values())
        stats.append((sum(hyp_counts.values()), sum(ref_counts.values()), match))
    return stats


def _f_score(stats, beta):
    beta_sq = beta * beta
    total = 0.0
    orders = 0
    for n_hyp, n_ref, n_match in stats:
        if n_hyp == 0 and n_ref == 0:
            continue
        orders += 1
        prec = n_match / n_hyp if n_hyp else 0.0
        rec = n_match / n_ref if n_ref else 0.0
        denom = beta_sq * prec + rec
        if denom > 0:
            total += (1 + beta_sq) * prec * rec / denom
    if orders == 0:
        return 0.0
    return 100.0 * total / orders


def chrf_document(hyp_segments, refs, max_order=CHAR_ORDER, beta=BETA) -> float:
    """chrF in [0, 100] for one document; refs as in bleu_document."""
    if not hyp_segments:
        raise ValidationError("chrf_document needs at least one segment")
    if not refs:
        raise ValidationError("chrf_document needs at least one reference")
    for ref in refs:
        if len(ref) != len(hyp_segments):
            raise ValidationError(
                f"reference has {len(ref)} segments, hypothesis has {len(hyp_segments)}"
            )

    pooled = [(0, 0, 0)] * max_order
    for i, hyp in enumerate(hyp_segments):
        best = None
        for ref in refs:
            stats = _segment_stats(hyp, ref[i], max_order)
            score = _f_score(stats, beta)
            if best is None or score > best[0]:
                best = (score, stats)
        pooled = [
            (a + x, b + y, c + z) for (a, b, c), (x, y, z) in zip(pooled, best[1])
        ]
    return _f_score(pooled, beta)
