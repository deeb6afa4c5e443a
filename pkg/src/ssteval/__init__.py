"""ssteval: scoring and meta-evaluation for simultaneous speech translation.

Scores system outputs under metric x reference x alignment variants,
aggregates Continuous Ratings, and analyzes metric-human correlation with
dependent-correlation significance testing.
"""

from ._kernels import BACKEND as kernel_backend
from .alignment import mwer_resegment, mwer_resegment_text, single_sequence
from .corpus import CorpusStore, load_corpus
from .metrics import (
    ExternalScorer,
    MetricEngine,
    ScoreCache,
    bleu_document,
    chrf_document,
)
from .ratings import aggregate_ratings, cr, cri
from .stats import pearson, significance_clusters, steiger_dependent
from .types import MetricVariant, TABLE1_VARIANTS, TABLE2_VARIANTS

__version__ = "0.1.0"

__all__ = [
    "kernel_backend",
    "mwer_resegment",
    "mwer_resegment_text",
    "single_sequence",
    "CorpusStore",
    "load_corpus",
    "ExternalScorer",
    "MetricEngine",
    "ScoreCache",
    "bleu_document",
    "chrf_document",
    "aggregate_ratings",
    "cr",
    "cri",
    "pearson",
    "significance_clusters",
    "steiger_dependent",
    "MetricVariant",
    "TABLE1_VARIANTS",
    "TABLE2_VARIANTS",
]
