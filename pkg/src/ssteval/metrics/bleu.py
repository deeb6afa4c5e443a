"""Corpus BLEU over one document's segments.

Semantics pinned to the classic WMT-style scorer configuration
case:mixed|eff:no|tok:13a|smooth:exp — mteval-13a tokenization, n-gram
orders 1-4 with clipping against the per-n-gram maximum over references,
exponential smoothing of zero numerators, no effective-order rescue, and a
brevity penalty against the per-segment closest reference length.
"""

import math
import re
from collections import Counter

from ..types import ValidationError

MAX_ORDER = 4

_13A_PRE = (
    ("<skipped>", ""),
    ("-\n", ""),
    ("\n", " "),
    ("&quot;", '"'),
    ("&amp;", "&"),
    ("&lt;", "<"),
    ("&gt;", ">"),
)
_13A_SPLIT = re.compile(r"([\{-\~\[-\` -\&\(-\+\:-\@\/])")
_13A_PERIOD_BEFORE = re.compile(r"([^0-9])([\.,])")
_13A_PERIOD_AFTER = re.compile(r"([\.,])([^0-9])")
_13A_DASH = re.compile(r"([0-9])(-)")


def tokenize_13a(line: str):
    """mteval-v13a tokens: punctuation split off except digit-adjacent
    periods/commas; HTML entities unescaped first."""
    for old, new in _13A_PRE:
        line = line.replace(old, new)
    line = f" {line} "
    line = _13A_SPLIT.sub(r" \1 ", line)
    line = _13A_PERIOD_BEFORE.sub(r"\1 \2 ", line)
    line = _13A_PERIOD_AFTER.sub(r" \1 \2", line)
    line = _13A_DASH.sub(r"\1 \2 ", line)
    return line.split()


def _ngrams(tokens, n):
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def bleu_document(hyp_segments, refs, tokenize=True) -> float:
    """BLEU in [0, 100] for one document.

    hyp_segments: hypothesis segment strings. refs: one or more reference
    documents, each a segment list parallel to hyp_segments. An all-empty
    hypothesis scores 0.0; mismatched segment counts are an error.
    """
    if not hyp_segments:
        raise ValidationError("bleu_document needs at least one segment")
    if not refs:
        raise ValidationError("bleu_document needs at least one reference")
    for ref in refs:
        if len(ref) != len(hyp_segments):
            raise ValidationError(
                f"reference has {len(ref)} segments, hypothesis has {len(hyp_segments)}"
            )

    tok = tokenize_13a if tokenize else str.split
    correct = [0] * MAX_ORDER
    total = [0] * MAX_ORDER
    sys_len = 0
    ref_len = 0
    for i, hyp in enumerate(hyp_segments):
        hyp_tokens = tok(hyp)
        ref_token_lists = [tok(ref[i]) for ref in refs]
        sys_len += len(hyp_tokens)

        closest = None
        for toks in ref_token_lists:
            diff = abs(len(hyp_tokens) - len(toks))
            if closest is None or diff < closest[0] or (diff == closest[0] and len(toks) < closest[1]):
                closest = (diff, len(toks))
        ref_len += closest[1]

        for n in range(1, MAX_ORDER + 1):
            hyp_counts = _ngrams(hyp_tokens, n)
            if not hyp_counts:
                continue
            max_ref = Counter()
            for toks in ref_token_lists:
                for gram, count in _ngrams(toks, n).items():
                    if count > max_ref[gram]:
                        max_ref[gram] = count
            for gram, count in hyp_counts.items():
                total[n - 1] += count
                correct[n - 1] += min(count, max_ref[gram])

    if sys_len == 0:
        return 0.0

    log_sum = 0.0
    smooth = 1.0
    for n in range(1, MAX_ORDER + 1):
        if total[n - 1] == 0:
            return 0.0  # no n-grams of this order anywhere: undefined -> 0
        if correct[n - 1] == 0:
            smooth *= 2.0
            precision = 1.0 / (smooth * total[n - 1])
        else:
            precision = correct[n - 1] / total[n - 1]
        log_sum += math.log(precision)

    bp = 1.0 if sys_len >= ref_len else math.exp(1.0 - ref_len / sys_len)
    return 100.0 * bp * math.exp(log_sum / MAX_ORDER)
