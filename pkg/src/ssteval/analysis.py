"""Experiment orchestration: pair human ratings with metric scores per
subset and aggregation mode, correlate, compare variants pairwise and find
significance clusters."""

from dataclasses import dataclass, field

from .ratings import aggregate_ratings, session_score
from .stats import pearson, significance_clusters, steiger_dependent
from .types import (
    AnalysisConfig,
    TABLE1_VARIANTS,
    ValidationError,
)

STRONG_CORRELATION = 0.6  # weaker coefficients are marked in reports


def _subset_keys(store, scores_by_variant, subset):
    """Candidate keys that belong to the subset and have a score for every
    variant under analysis, in deterministic order."""
    keys = None
    for by_key in scores_by_variant.values():
        present = set(by_key)
        keys = present if keys is None else keys & present
    doc_ids = set(store.doc_ids(subset))
    return sorted(k for k in (keys or set()) if k[0] in doc_ids)


def index_scores(score_records):
    """variant -> candidate key -> value."""
    index = {}
    for rec in score_records:
        by_key = index.setdefault(rec.variant, {})
        if rec.candidate_key in by_key:
            raise ValidationError(
                f"duplicate score for {rec.variant.label} on {rec.candidate_key}"
            )
        by_key[rec.candidate_key] = rec.value
    return index


def build_pairs(store, score_index, variant, subset="both", aggregation="averaged",
                cr_definition="CR"):
    """(rating, score) pairs for one variant.

    averaged: one pair per rated candidate, rating = mean over its sessions.
    all_ratings: one pair per session, sharing the candidate's score.
    Candidates nobody rated contribute nothing.
    """
    if variant not in score_index:
        raise ValidationError(f"no scores computed for {variant.label}")
    by_key = score_index[variant]
    doc_ids = set(store.doc_ids(subset))

    ratings = []
    values = []
    if aggregation == "averaged":
        aggregated = aggregate_ratings(store.sessions)
        for key in sorted(aggregated):
            if key[0] not in doc_ids or key not in by_key:
                continue
            score = aggregated[key]
            ratings.append(score.cr if cr_definition == "CR" else score.cri)
            values.append(by_key[key])
    elif aggregation == "all_ratings":
        sessions = sorted(
            store.sessions, key=lambda s: (s.candidate_key, s.evaluator_id)
        )
        for session in sessions:
            key = session.candidate_key
            if key[0] not in doc_ids or key not in by_key:
                continue
            ratings.append(session_score(session, cr_definition))
            values.append(by_key[key])
    else:
        raise ValidationError(f"unknown aggregation {aggregation!r}")

    if not ratings:
        raise ValidationError(
            f"no (rating, score) pairs for {variant.label} on subset {subset}"
        )
    return ratings, values


def correlate_variant(store, score_index, variant, subset, aggregation, cr_definition):
    ratings, values = build_pairs(
        store, score_index, variant, subset, aggregation, cr_definition
    )
    return pearson(ratings, values, x_label=cr_definition, y_label=variant.label)


def run_table1(store, score_index, cr_definition="CR",
               subsets=("both", "Common", "NonNative"),
               aggregations=("averaged", "all_ratings")):
    """The headline table: four sentence-aligned translation-reference
    metrics x subsets, for averaged and per-session ratings."""
    panels = []
    for aggregation in aggregations:
        rows = []
        for subset in subsets:
            cells = []
            n = None
            for variant in TABLE1_VARIANTS:
                corr = correlate_variant(
                    store, score_index, variant, subset, aggregation, cr_definition
                )
                n = corr.n
                cells.append({
                    "metric": variant.metric,
                    "r": corr.r,
                    "p": corr.p,
                    "strong": corr.r >= STRONG_CORRELATION,
                })
            rows.append({"subset": subset, "n": n, "cells": cells})
        panels.append({"aggregation": aggregation, "rows": rows})
    return {"panels": panels}


@dataclass
class VariantComparison:
    """Ordered variant table with pairwise significance."""

    subset: str
    aggregation: str
    cr_definition: str
    n: int
    variants: list  # labels, ordered by r descending
    r_values: list
    p_values: list  # of r against zero
    pairwise_t: list  # square matrices aligned with `variants`
    pairwise_p: list
    clusters: dict = field(default_factory=dict)  # threshold -> boundary list


def run_table2(store, score_index, variants, subset="both", aggregation="averaged",
               cr_definition="CR", thresholds=(0.05, 0.1), method="williams"):
    """Order variants by correlation with the rating and test all pairwise
    differences with the dependent-correlation test; emit cluster
    boundaries per threshold."""
    missing = [v.label for v in variants if v not in score_index]
    if missing:
        raise ValidationError("no scores computed for: " + ", ".join(missing))
    keys = _subset_keys(store, {v: score_index[v] for v in variants}, subset)
    if not keys:
        raise ValidationError(f"no candidates scored for subset {subset}")

    corr = {}
    for variant in variants:
        corr[variant] = correlate_variant(
            store, score_index, variant, subset, aggregation, cr_definition
        )
    ordered = sorted(variants, key=lambda v: (-corr[v].r, v.label))

    # scores per variant over one shared candidate list, for inter-metric r
    ratings, _ = build_pairs(
        store, score_index, ordered[0], subset, aggregation, cr_definition
    )
    vectors = {}
    for variant in ordered:
        r, values = build_pairs(
            store, score_index, variant, subset, aggregation, cr_definition
        )
        if r != ratings:
            raise ValidationError("variants disagree on the rated candidate set")
        vectors[variant] = values

    n = len(ratings)
    size = len(ordered)
    t_matrix = [[0.0] * size for _ in range(size)]
    p_matrix = [[1.0] * size for _ in range(size)]
    for i in range(size):
        for j in range(i + 1, size):
            va, vb = ordered[i], ordered[j]
            r_ab = pearson(vectors[va], vectors[vb]).r
            t, p = steiger_dependent(
                corr[va].r, corr[vb].r, r_ab, n, method=method
            )
            t_matrix[i][j] = t
            t_matrix[j][i] = -t
            p_matrix[i][j] = p
            p_matrix[j][i] = p

    result = VariantComparison(
        subset=subset,
        aggregation=aggregation,
        cr_definition=cr_definition,
        n=n,
        variants=[v.label for v in ordered],
        r_values=[corr[v].r for v in ordered],
        p_values=[corr[v].p for v in ordered],
        pairwise_t=t_matrix,
        pairwise_p=p_matrix,
    )
    for threshold in thresholds:
        result.clusters[threshold] = significance_clusters(p_matrix, threshold)
    return result


def cr_vs_cri_points(store):
    """One (CR, CRi) point per rating session plus their correlation."""
    points = []
    for session in sorted(
        store.sessions, key=lambda s: (s.candidate_key, s.evaluator_id)
    ):
        points.append({
            "doc_id": session.doc_id,
            "system": session.system_id,
            "latency": session.latency,
            "evaluator": session.evaluator_id,
            "cr": session_score(session, "CR"),
            "cri": session_score(session, "CRi"),
        })
    corr = None
    if len(points) >= 3:
        try:
            corr = pearson(
                [p["cr"] for p in points],
                [p["cri"] for p in points],
                x_label="CR",
                y_label="CRi",
            )
        except ValidationError:
            corr = None
    return points, corr


def scatter_points(store, score_index, variant, aggregation="averaged",
                   cr_definition="CR"):
    """(rating, score) points for the rating-vs-metric scatter, tagged with
    the document subset."""
    by_key = score_index[variant]
    points = []
    if aggregation == "averaged":
        aggregated = aggregate_ratings(store.sessions)
        for key in sorted(aggregated):
            if key not in by_key:
                continue
            score = aggregated[key]
            points.append({
                "doc_id": key[0],
                "system": key[1],
                "latency": key[2],
                "subset": store.documents[key[0]].subset,
                "rating": score.cr if cr_definition == "CR" else score.cri,
                "score": by_key[key],
            })
    else:
        for session in sorted(
            store.sessions, key=lambda s: (s.candidate_key, s.evaluator_id)
        ):
            key = session.candidate_key
            if key not in by_key:
                continue
            points.append({
                "doc_id": key[0],
                "system": key[1],
                "latency": key[2],
                "subset": store.documents[key[0]].subset,
                "rating": session_score(session, cr_definition),
                "score": by_key[key],
            })
    return points


def recommendations(comparison: VariantComparison):
    """Plain-language reading of the ordered comparison: which metric,
    reference and alignment to prefer, with significance-aware caveats."""
    lines = []
    top_label = comparison.variants[0]
    top_r = comparison.r_values[0]
    lines.append(
        f"Most correlating variant: {top_label} (r = {top_r:.2f}, n = {comparison.n})."
    )
    # metric ranking by each metric's best variant
    best_by_metric = {}
    for label, r in zip(comparison.variants, comparison.r_values):
        metric = label.split("/")[0]
        if metric not in best_by_metric:
            best_by_metric[metric] = (label, r)
    ranking = sorted(best_by_metric.values(), key=lambda lr: -lr[1])
    lines.append(
        "Metric ranking by best variant: "
        + ", ".join(f"{label} ({r:.2f})" for label, r in ranking) + "."
    )
    # reference comparison: best transl-only vs best intp-only variant
    best_ref = {}
    for label, r in zip(comparison.variants, comparison.r_values):
        ref = label.split("/")[1]
        if ref in ("transl", "intp") and ref not in best_ref:
            best_ref[ref] = (label, r)
    if len(best_ref) == 2:
        ta, ia = best_ref["transl"], best_ref["intp"]
        idx = {label: i for i, label in enumerate(comparison.variants)}
        p = comparison.pairwise_p[idx[ta[0]]][idx[ia[0]]]
        verdict = "significantly" if p < 0.05 else "not significantly"
        lines.append(
            f"Translation reference ({ta[0]}, r = {ta[1]:.2f}) correlates {verdict} "
            f"higher than interpreting ({ia[0]}, r = {ia[1]:.2f}; p = {p:.2f})."
        )
    for threshold, bounds in sorted(comparison.clusters.items()):
        if bounds:
            groups = []
            last = 0
            for b in bounds:
                groups.append(f"{last + 1}-{b + 1}")
                last = b + 1
            groups.append(f"{last + 1}-{len(comparison.variants)}")
            lines.append(
                f"Significance clusters at p < {threshold:g}: rows " + ", ".join(groups) + "."
            )
        else:
            lines.append(f"No full separation at p < {threshold:g}.")
    return lines


def default_config():
    return AnalysisConfig()
