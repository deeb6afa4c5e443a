from .bleu import bleu_document, tokenize_13a
from .chrf import chrf_document
from .external import ExternalScorer, ScoreCache, ScorerError, external_score
from .variants import MetricEngine, multi_reference_combine

__all__ = [
    "bleu_document",
    "tokenize_13a",
    "chrf_document",
    "ExternalScorer",
    "ScoreCache",
    "ScorerError",
    "external_score",
    "MetricEngine",
    "multi_reference_combine",
]
