"""Independent brute-force oracles used by the test suite.

Everything in this module is written from first principles and shares no code
with the package under test: n-grams are enumerated with nested loops and
exact Fraction arithmetic, edit distance is the plain Wagner-Fischer matrix,
partitions are exhaustively enumerated, and t-distribution tail probabilities
come from adaptive Simpson quadrature of the density.
"""

import itertools
import math
import re
from fractions import Fraction


# ---------------------------------------------------------------------------
# mteval-13a style tokenization (independent rewrite, used only to feed the
# BLEU oracle the same token streams a WMT-style scorer would see)

def tokenize_13a_oracle(line: str) -> list:
    s = line.replace("<skipped>", "")
    s = s.replace("-\n", "").replace("\n", " ")
    s = (
        s.replace("&quot;", '"')
        .replace("&amp;", "&")
        .replace("&lt;", "<")
        .replace("&gt;", ">")
    )
    s = " " + s + " "
    s = re.sub(r"([\{-\~\[-\` -\&\(-\+\:-\@\/])", r" \1 ", s)
    s = re.sub(r"([^0-9])([\.,])", r"\1 \2 ", s)
    s = re.sub(r"([\.,])([^0-9])", r" \1 \2", s)
    s = re.sub(r"([0-9])(-)", r"\1 \2 ", s)
    return s.split()


# ---------------------------------------------------------------------------
# BLEU by exhaustive n-gram enumeration with exact fractions

def _ngram_counts(tokens, n):
    counts = {}
    for i in range(len(tokens) - n + 1):
        g = tuple(tokens[i : i + n])
        counts[g] = counts.get(g, 0) + 1
    return counts


def bleu_oracle(hyp_segments, ref_documents, tokenize=True):
    """Corpus BLEU over one document.

    hyp_segments: list of hypothesis segment strings.
    ref_documents: list of reference documents, each a list of segment
    strings parallel to hyp_segments.

    Semantics frozen to the cited scorer signature: 13a tokens, orders 1-4,
    clipping against the per-ngram max over references, closest reference
    length per segment (ties -> shorter), exp smoothing (k-th zero numerator
    becomes 1/2^k), no effective-order rescue, BP = exp(1 - r/c) for c < r.
    """
    correct = [Fraction(0)] * 4
    total = [Fraction(0)] * 4
    sys_len = 0
    ref_len = 0
    for seg_idx, hyp in enumerate(hyp_segments):
        hyp_toks = tokenize_13a_oracle(hyp) if tokenize else hyp.split()
        ref_toks_all = []
        for ref_doc in ref_documents:
            toks = (
                tokenize_13a_oracle(ref_doc[seg_idx])
                if tokenize
                else ref_doc[seg_idx].split()
            )
            ref_toks_all.append(toks)
        sys_len += len(hyp_toks)
        # closest reference length, ties resolved toward the shorter one
        best = None
        for toks in ref_toks_all:
            diff = abs(len(hyp_toks) - len(toks))
            if best is None or diff < best[0] or (diff == best[0] and len(toks) < best[1]):
                best = (diff, len(toks))
        ref_len += best[1]
        for n in range(1, 5):
            hyp_counts = _ngram_counts(hyp_toks, n)
            max_ref = {}
            for toks in ref_toks_all:
                for g, c in _ngram_counts(toks, n).items():
                    if c > max_ref.get(g, 0):
                        max_ref[g] = c
            for g, c in hyp_counts.items():
                total[n - 1] += c
                correct[n - 1] += min(c, max_ref.get(g, 0))

    if sys_len == 0:
        return 0.0
    precisions = []
    zeros_seen = 0
    for n in range(1, 5):
        if total[n - 1] == 0:
            precisions.append(Fraction(0))
        elif correct[n - 1] == 0:
            zeros_seen += 1
            precisions.append(Fraction(1, 2**zeros_seen) / total[n - 1])
        else:
            precisions.append(correct[n - 1] / total[n - 1])
    if any(p == 0 for p in precisions):
        return 0.0
    log_sum = sum(math.log(float(p)) for p in precisions) / 4.0
    bp = 1.0 if sys_len >= ref_len else math.exp(1 - ref_len / sys_len)
    return 100.0 * bp * math.exp(log_sum)


# ---------------------------------------------------------------------------
# chrF by exhaustive character n-gram enumeration

def _char_ngrams(s, n):
    counts = {}
    for i in range(len(s) - n + 1):
        g = s[i : i + n]
        counts[g] = counts.get(g, 0) + 1
    return counts


def _chrf_stats(hyp, ref, max_order=6):
    """Per-order (hyp_total, ref_total, clipped_match) triples,
    whitespace removed first."""
    h = re.sub(r"\s+", "", hyp)
    r = re.sub(r"\s+", "", ref)
    stats = []
    for n in range(1, max_order + 1):
        hc = _char_ngrams(h, n)
        rc = _char_ngrams(r, n)
        match = sum(min(c, rc.get(g, 0)) for g, c in hc.items())
        stats.append((sum(hc.values()), sum(rc.values()), match))
    return stats


def _chrf_from_stats(stats, beta=2):
    """Average of per-order F_beta over orders where either side has
    n-grams; exact fractions until the final float conversion."""
    beta_sq = Fraction(beta) ** 2
    fs = []
    for n_hyp, n_ref, n_match in stats:
        if n_hyp == 0 and n_ref == 0:
            continue
        prec = Fraction(n_match, n_hyp) if n_hyp > 0 else Fraction(0)
        rec = Fraction(n_match, n_ref) if n_ref > 0 else Fraction(0)
        denom = beta_sq * prec + rec
        fs.append((1 + beta_sq) * prec * rec / denom if denom > 0 else Fraction(0))
    if not fs:
        return 0.0
    return float(100 * sum(fs) / len(fs))


def chrf_oracle(hyp_segments, ref_documents, beta=2, max_order=6):
    """Document chrF: statistics pooled over segments; with several
    references each segment keeps the stats of its best-scoring one."""
    pooled = [(0, 0, 0)] * max_order
    for seg_idx, hyp in enumerate(hyp_segments):
        best_stats = None
        best_score = None
        for ref_doc in ref_documents:
            stats = _chrf_stats(hyp, ref_doc[seg_idx], max_order)
            score = _chrf_from_stats(stats, beta)
            if best_score is None or score > best_score:
                best_score = score
                best_stats = stats
        pooled = [
            (a + x, b + y, c + z)
            for (a, b, c), (x, y, z) in zip(pooled, best_stats)
        ]
    return _chrf_from_stats(pooled, beta)


# ---------------------------------------------------------------------------
# Edit distance and exhaustive minimum-WER partitions

def levenshtein_oracle(a, b):
    m, n = len(a), len(b)
    d = [[0] * (n + 1) for _ in range(m + 1)]
    for i in range(m + 1):
        d[i][0] = i
    for j in range(n + 1):
        d[0][j] = j
    for i in range(1, m + 1):
        for j in range(1, n + 1):
            sub = 0 if a[i - 1] == b[j - 1] else 1
            d[i][j] = min(d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + sub)
    return d[m][n]


def mwer_enumerate_oracle(hyp_tokens, ref_segments):
    """Try every contiguous partition of hyp_tokens into len(ref_segments)
    possibly-empty spans; return (min_cost, lexicographically smallest
    boundary vector among minimisers)."""
    n = len(hyp_tokens)
    m = len(ref_segments)
    best_cost = None
    best_bounds = None
    for bounds in itertools.combinations_with_replacement(range(n + 1), m - 1):
        offsets = (0,) + bounds + (n,)
        cost = 0
        for i in range(m):
            span = hyp_tokens[offsets[i] : offsets[i + 1]]
            cost += levenshtein_oracle(span, ref_segments[i])
        if best_cost is None or cost < best_cost or (cost == best_cost and bounds < best_bounds):
            best_cost = cost
            best_bounds = bounds
    return best_cost, list(best_bounds)


# ---------------------------------------------------------------------------
# Student-t tail probability by adaptive Simpson quadrature

def _t_density(x, df):
    c = math.exp(
        math.lgamma((df + 1) / 2.0)
        - math.lgamma(df / 2.0)
        - 0.5 * math.log(df * math.pi)
    )
    return c * (1.0 + x * x / df) ** (-(df + 1) / 2.0)


def _simpson(f, a, b, fa, fm, fb):
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb)


def _adaptive(f, a, b, fa, fm, fb, whole, eps, depth):
    m = 0.5 * (a + b)
    lm, rm = 0.5 * (a + m), 0.5 * (m + b)
    flm, frm = f(lm), f(rm)
    left = _simpson(f, a, m, fa, flm, fm)
    right = _simpson(f, m, b, fm, frm, fb)
    if depth <= 0 or abs(left + right - whole) < 15 * eps:
        return left + right + (left + right - whole) / 15.0
    return _adaptive(f, a, m, fa, flm, fm, left, eps / 2, depth - 1) + _adaptive(
        f, m, b, fm, frm, fb, right, eps / 2, depth - 1
    )


def _integrate(f, a, b, eps=1e-12):
    m = 0.5 * (a + b)
    fa, fm, fb = f(a), f(m), f(b)
    whole = _simpson(f, a, b, fa, fm, fb)
    return _adaptive(f, a, b, fa, fm, fb, whole, eps, 60)

def t_two_tailed_p_oracle(t, df):
    """P(|T| >= |t|) for T ~ Student-t(df), via quadrature of the density
    on [0, |t|]: p = 1 - 2 * integral."""
    t = abs(float(t))
    if t == 0.0:
        return 1.0
    mass = _integrate(lambda x: _t_density(x, df), 0.0, t)
    return max(0.0, 1.0 - 2.0 * mass)


# ---------------------------------------------------------------------------
# Rule-based word tokenizer: inverse of the package detokenizer on clean
# prose, used for the tokenize->detokenize round-trip check

_PUNCT_LEFT = ".,:;!?)]}"
_PUNCT_RIGHT = "([{"


def tokenize_for_roundtrip(sentence: str) -> str:
    """Split punctuation off words the way an MT system's tokenizer would,
    tracking paired straight quotes (opening vs closing)."""
    out = []
    quote_open = False
    i = 0
    while i < len(sentence):
        ch = sentence[i]
        if ch == '"':
            out.append(' " ' if not quote_open else ' " ')
            quote_open = not quote_open
        elif ch in _PUNCT_LEFT or ch in _PUNCT_RIGHT:
            out.append(f" {ch} ")
        else:
            out.append(ch)
        i += 1
    return " ".join("".join(out).split())
