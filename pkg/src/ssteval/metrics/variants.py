"""Variant scoring: metric x reference x alignment, one value per
(document, candidate).

Lexical metrics (BLEU, chrF) combine multiple references inside the metric;
neural metrics run once per reference and average the document scores.
Alignment happens here, before scoring: SingleSeq concatenates, mWER re-cuts
per the variant's orientation (see alignment.orient_for_variant).
"""

import logging
from statistics import fmean

from ..alignment import (
    RECUT_INTP_TO_TRANSL,
    mwer_resegment_text,
    orient_for_variant,
    single_sequence,
)
from ..types import MEAN_COMBINED_METRICS, ScoreRecord, ValidationError
from .bleu import bleu_document
from .chrf import chrf_document
from .external import ScorerError, external_score

log = logging.getLogger(__name__)


def multi_reference_combine(metric, per_reference_scores):
    """Mean of per-reference document scores; only meaningful for the
    metrics that run once per reference."""
    if metric not in MEAN_COMBINED_METRICS:
        raise ValidationError(f"{metric} combines references inside the metric")
    if not per_reference_scores:
        raise ValidationError("no per-reference scores to combine")
    return fmean(per_reference_scores)


class MetricEngine:
    """Scores candidates against a corpus store, delegating neural metrics
    to configured external scorers with a shared cache."""

    def __init__(self, store, scorers=None, cache=None, mwer_lowercase=False,
                 kernel_backend=None):
        self.store = store
        self.scorers = scorers or {}
        self.cache = cache
        self.mwer_lowercase = mwer_lowercase
        self.kernel_backend = kernel_backend
        self._recut_cache = {}

    # ------------------------------------------------------------------
    # alignment routes

    def _intp_on_sentence_grid(self, doc_id):
        """Interpreting re-cut onto the translation's (source-aligned)
        segment grid; cached per document since it is candidate-free."""
        key = (doc_id, "intp->transl")
        if key not in self._recut_cache:
            ref = self.store.references[doc_id]
            segments, _cost = mwer_resegment_text(
                " ".join(ref.interpreting),
                list(ref.translation),
                lowercase=self.mwer_lowercase,
                backend=self.kernel_backend,
            )
            self._recut_cache[key] = segments
        return self._recut_cache[key]

    def _routes(self, variant, doc, cand, refs):
        """One scoring route per external run: (hyp_segments,
        reference_documents, source_segments). Lexical metrics get a single
        route whose reference list may hold several documents; neural
        metrics get one route per reference."""
        hyp = cand.texts
        transl = list(refs.translation)
        intp = list(refs.interpreting)
        src = doc.texts
        mean_combined = variant.metric in MEAN_COMBINED_METRICS

        def sent_route(reference):
            return (hyp, [reference], src)

        def singleseq_route(reference):
            return ([single_sequence(hyp)], [[single_sequence(reference)]],
                    [single_sequence(src)])

        def mwer_route(reference, kind):
            # one source of truth for the re-cut direction
            if orient_for_variant(variant) == RECUT_INTP_TO_TRANSL:
                if kind == "intp":
                    return (hyp, [self._intp_on_sentence_grid(doc.doc_id)], src)
                return (hyp, [reference], src)  # transl already on the grid
            recut, _cost = mwer_resegment_text(
                " ".join(hyp), reference,
                lowercase=self.mwer_lowercase, backend=self.kernel_backend,
            )
            return (recut, [reference], None)

        mode = variant.alignment_mode
        refmode = variant.reference_mode
        if mode == "Sent":
            return [sent_route(transl)]
        if mode == "SingleSeq":
            routes = []
            if "transl" in refmode:
                routes.append(singleseq_route(transl))
            if "intp" in refmode:
                routes.append(singleseq_route(intp))
            if mean_combined:
                return routes
            # lexical: one route, references side by side
            merged_refs = [r for _, ref_docs, _ in routes for r in ref_docs]
            return [(routes[0][0], merged_refs, routes[0][2])]
        if mode == "mWER":
            reference = transl if refmode == "transl" else intp
            return [mwer_route(reference, refmode)]
        if mode == "Sent+mWER":
            if mean_combined:
                return [sent_route(transl), mwer_route(intp, "intp")]
            assert orient_for_variant(variant) == RECUT_INTP_TO_TRANSL
            return [(hyp, [transl, self._intp_on_sentence_grid(doc.doc_id)], src)]
        raise ValidationError(f"unhandled alignment mode {mode!r}")

    # ------------------------------------------------------------------
    # scoring

    def _lexical_value(self, variant, routes):
        values = []
        for hyp, ref_docs, _src in routes:
            if variant.metric == "BLEU":
                values.append(bleu_document(hyp, ref_docs))
            else:
                values.append(chrf_document(hyp, ref_docs))
        return values[0] if len(values) == 1 else fmean(values)

    def _scorer_for(self, metric):
        scorer = self.scorers.get(metric)
        if scorer is None:
            raise ScorerError(
                f"no external scorer configured for {metric}; pass "
                f"--scorer {metric}='<command>' or add it to the config"
            )
        return scorer

    @staticmethod
    def _neural_records(variant, cand, routes):
        """Flatten routes into bridge records; COMET records carry the
        source segment, BertScore records do not."""
        records = []
        shape = []  # (route_index, n_segments)
        for route_idx, (hyp, ref_docs, src) in enumerate(routes):
            (reference,) = ref_docs
            if variant.metric == "COMET" and src is None:
                raise ValidationError(
                    "COMET needs sentence-aligned sources; this route has none"
                )
            n = len(hyp)
            shape.append(n)
            for i in range(n):
                rec = {
                    "id": f"{variant.label}|{cand.doc_id}|{cand.system_id}|"
                          f"{cand.latency}|r{route_idx}|s{i}",
                    "hyp": hyp[i],
                    "ref": reference[i],
                }
                if variant.metric == "COMET":
                    rec["src"] = src[i]
                records.append(rec)
        return records, shape

    @staticmethod
    def _neural_value(scores_by_id, variant, cand, shape):
        route_means = []
        for route_idx, n in enumerate(shape):
            seg_scores = [
                scores_by_id[
                    f"{variant.label}|{cand.doc_id}|{cand.system_id}|"
                    f"{cand.latency}|r{route_idx}|s{i}"
                ]
                for i in range(n)
            ]
            route_means.append(fmean(seg_scores))
        if len(route_means) == 1:
            return route_means[0]
        return multi_reference_combine(variant.metric, route_means)

    def score_variant(self, variant, doc_id, candidate_key):
        """Score a single candidate under one variant (one scorer call for
        neural metrics; prefer score_all for whole-corpus batching)."""
        doc = self.store.documents[doc_id]
        cand = self.store.candidates[candidate_key]
        refs = self.store.references[doc_id]
        routes = self._routes(variant, doc, cand, refs)
        if variant.metric in ("BLEU", "chrF"):
            value = self._lexical_value(variant, routes)
        else:
            records, shape = self._neural_records(variant, cand, routes)
            scored = external_score(self._scorer_for(variant.metric), records, self.cache)
            by_id = {r["id"]: r["score"] for r in scored}
            value = self._neural_value(by_id, variant, cand, shape)
        return ScoreRecord(
            variant=variant,
            doc_id=doc_id,
            system_id=cand.system_id,
            latency=cand.latency,
            value=value,
        )

    def score_all(self, variants):
        """Score every candidate under every variant. Neural metrics are
        batched into one scorer invocation per metric across the corpus."""
        records_out = []
        neural = []  # (variant, cand, shape) in output order
        bridge_records = {}  # metric -> list of records
        order = sorted(self.store.candidates)

        for variant in variants:
            for key in order:
                cand = self.store.candidates[key]
                doc = self.store.documents[cand.doc_id]
                refs = self.store.references[cand.doc_id]
                routes = self._routes(variant, doc, cand, refs)
                if variant.metric in ("BLEU", "chrF"):
                    records_out.append(
                        ScoreRecord(variant, cand.doc_id, cand.system_id,
                                    cand.latency, self._lexical_value(variant, routes))
                    )
                else:
                    recs, shape = self._neural_records(variant, cand, routes)
                    bridge_records.setdefault(variant.metric, []).extend(recs)
                    neural.append((variant, cand, shape))

        scores_by_id = {}
        for metric, recs in bridge_records.items():
            scored = external_score(self._scorer_for(metric), recs, self.cache)
            scores_by_id.update((r["id"], r["score"]) for r in scored)

        for variant, cand, shape in neural:
            records_out.append(
                ScoreRecord(variant, cand.doc_id, cand.system_id, cand.latency,
                            self._neural_value(scores_by_id, variant, cand, shape))
            )
        return records_out
