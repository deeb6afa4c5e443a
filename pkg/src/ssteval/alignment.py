"""Segmentation alignment: single-sequence concatenation and minimum-WER
resegmentation of a hypothesis onto a reference segmentation."""

from dataclasses import dataclass

from . import _kernels
from .types import MetricVariant, ValidationError


def single_sequence(segments) -> str:
    """Join a document's segments into one sequence, whitespace-normalized,
    to be scored as if it were a single sentence."""
    if not segments:
        raise ValidationError("single_sequence needs at least one segment")
    return " ".join(" ".join(segments).split())


def wer_tokens(text: str, lowercase: bool = False):
    """Word tokens for WER: Unicode-whitespace split after trimming,
    punctuation left attached."""
    if lowercase:
        text = text.lower()
    return text.split()


@dataclass(frozen=True)
class MwerResult:
    spans: tuple  # token tuples, one per reference segment
    offsets: tuple  # cumulative hypothesis token counts, len = len(spans) + 1
    cost: int


def mwer_resegment(hyp_tokens, ref_segments, backend=None) -> MwerResult:
    """Partition hyp_tokens into len(ref_segments) contiguous, possibly
    empty spans minimizing the summed word-level edit distance span-vs-
    segment. Ties break toward the lexicographically smallest boundary
    vector, so repeated runs are identical.
    """
    if not ref_segments:
        raise ValidationError("mwer_resegment needs at least one reference segment")
    kernel = _kernels.get_backend(backend)

    ids = {}

    def to_ids(tokens):
        out = []
        for t in tokens:
            if t not in ids:
                ids[t] = len(ids)
            out.append(ids[t])
        return out

    hyp_ids = to_ids(hyp_tokens)
    ref_ids = []
    offsets = [0]
    for seg in ref_segments:
        ref_ids.extend(to_ids(seg))
        offsets.append(len(ref_ids))

    bounds, cost = kernel.mwer_partition(hyp_ids, ref_ids, offsets)
    spans = tuple(
        tuple(hyp_tokens[bounds[i] : bounds[i + 1]]) for i in range(len(ref_segments))
    )
    return MwerResult(spans=spans, offsets=tuple(bounds), cost=cost)


def mwer_resegment_text(hyp_text, ref_texts, lowercase=False, backend=None):
    """Text-level convenience wrapper: returns (segments, cost) where the
    hypothesis is re-cut into len(ref_texts) space-joined segments.

    With lowercase=True the matching is case-insensitive but the returned
    spans keep the original casing.
    """
    raw_tokens = hyp_text.split()
    match_tokens = [t.lower() for t in raw_tokens] if lowercase else raw_tokens
    ref_segments = [wer_tokens(t, lowercase) for t in ref_texts]
    result = mwer_resegment(match_tokens, ref_segments, backend=backend)
    segments = []
    for i in range(len(ref_texts)):
        segments.append(" ".join(raw_tokens[result.offsets[i] : result.offsets[i + 1]]))
    return segments, result.cost


# who gets re-cut onto whose segmentation, per variant
RECUT_HYP_TO_INTP = "hyp->intp"  # the standard direction
RECUT_INTP_TO_TRANSL = "intp->transl"  # keeps triples source-aligned


def orient_for_variant(variant: MetricVariant) -> str:
    """Resolve the mWER direction for a variant.

    COMET needs the source next to each hypothesis/reference pair, and the
    source cannot be re-cut, so for COMET the interpreting reference is
    re-cut onto the translation's sentence grid; everything else re-cuts the
    candidate onto the interpreting segmentation. Under Sent+mWER the
    n-gram metrics combine references per segment, so their interpreting
    reference must also be re-cut onto the sentence grid; BertScore averages
    per-reference scores instead and keeps the standard direction.
    """
    if not variant.uses_mwer:
        raise ValidationError(f"{variant.label} is not an mWER variant")
    if variant.metric == "COMET":
        return RECUT_INTP_TO_TRANSL
    if variant.alignment_mode == "Sent+mWER" and variant.metric in ("BLEU", "chrF"):
        return RECUT_INTP_TO_TRANSL
    return RECUT_HYP_TO_INTP
