"""Domain records shared across the toolkit."""

from dataclasses import dataclass

SUBSETS = ("Common", "NonNative")
LATENCIES = ("low", "medium", "high")
METRICS = ("BLEU", "chrF", "BertScore", "COMET")
REFERENCE_MODES = ("transl", "intp", "transl+intp")
ALIGNMENT_MODES = ("Sent", "SingleSeq", "mWER", "Sent+mWER")

# metrics that combine multiple references by averaging per-reference scores
# (lexical-overlap metrics combine inside the metric computation instead)
MEAN_COMBINED_METRICS = ("BertScore", "COMET")


class ValidationError(ValueError):
    """Raised when an input record or a variant combination is invalid."""


@dataclass(frozen=True)
class SourceSegment:
    index: int
    text: str
    start_ms: int
    end_ms: int

    def __post_init__(self):
        if self.start_ms > self.end_ms:
            raise ValidationError(
                f"segment {self.index}: start_ms {self.start_ms} > end_ms {self.end_ms}"
            )
        if not self.text.strip():
            raise ValidationError(f"segment {self.index}: empty text")


@dataclass(frozen=True)
class Document:
    doc_id: str
    subset: str
    segments: tuple

    def __post_init__(self):
        if self.subset not in SUBSETS:
            raise ValidationError(
                f"document {self.doc_id}: subset must be one of {SUBSETS}, got {self.subset!r}"
            )
        for i, seg in enumerate(self.segments):
            if seg.index != i:
                raise ValidationError(
                    f"document {self.doc_id}: segment indices not contiguous from 0 "
                    f"(position {i} has index {seg.index})"
                )

    @property
    def texts(self):
        return [seg.text for seg in self.segments]


@dataclass(frozen=True)
class CaptionEvent:
    t_ms: int
    text: str


@dataclass(frozen=True)
class CandidateOutput:
    system_id: str
    latency: str
    doc_id: str
    segments: tuple  # of (index, text)
    caption_events: tuple = ()  # of CaptionEvent, may be empty

    def __post_init__(self):
        if self.latency not in LATENCIES:
            raise ValidationError(
                f"candidate {self.system_id}/{self.doc_id}: latency must be one of "
                f"{LATENCIES}, got {self.latency!r}"
            )

    @property
    def key(self):
        return (self.doc_id, self.system_id, self.latency)

    @property
    def texts(self):
        return [text for _, text in self.segments]


@dataclass(frozen=True)
class ReferenceSet:
    doc_id: str
    translation: tuple  # one sentence per source segment
    interpreting: tuple  # chunks, no alignment to source segments


@dataclass(frozen=True)
class RatingClick:
    t_ms: int
    value: int


@dataclass(frozen=True)
class RatingSession:
    evaluator_id: str
    doc_id: str
    system_id: str
    latency: str
    duration_ms: int
    clicks: tuple  # of RatingClick, strictly increasing t_ms

    @property
    def candidate_key(self):
        return (self.doc_id, self.system_id, self.latency)


@dataclass(frozen=True)
class RatingScore:
    doc_id: str
    system_id: str
    latency: str
    cr: float
    cri: float
    n_sessions: int


@dataclass(frozen=True)
class MetricVariant:
    metric: str
    reference_mode: str
    alignment_mode: str

    def __post_init__(self):
        if self.metric not in METRICS:
            raise ValidationError(f"unknown metric {self.metric!r}")
        if self.reference_mode not in REFERENCE_MODES:
            raise ValidationError(f"unknown reference mode {self.reference_mode!r}")
        if self.alignment_mode not in ALIGNMENT_MODES:
            raise ValidationError(f"unknown alignment mode {self.alignment_mode!r}")
        if "intp" in self.reference_mode and self.alignment_mode == "Sent":
            raise ValidationError(
                "interpreting has no sentence alignment: (intp, Sent) is illegal"
            )
        if self.alignment_mode == "Sent+mWER" and self.reference_mode != "transl+intp":
            raise ValidationError(
                "Sent+mWER is only legal with transl+intp "
                f"(got reference mode {self.reference_mode!r})"
            )
        if self.reference_mode == "transl+intp" and self.alignment_mode == "mWER":
            raise ValidationError(
                "transl+intp needs one alignment per reference: use Sent+mWER or SingleSeq"
            )

    @property
    def label(self):
        return f"{self.metric}/{self.reference_mode}/{self.alignment_mode}"

    @classmethod
    def parse(cls, label):
        parts = label.split("/")
        if len(parts) != 3:
            raise ValidationError(
                f"variant label must look like 'BLEU/transl/Sent', got {label!r}"
            )
        return cls(*parts)

    @property
    def uses_mwer(self):
        return self.alignment_mode in ("mWER", "Sent+mWER")


@dataclass(frozen=True)
class ScoreRecord:
    variant: MetricVariant
    doc_id: str
    system_id: str
    latency: str
    value: float

    @property
    def candidate_key(self):
        return (self.doc_id, self.system_id, self.latency)


@dataclass(frozen=True)
class CorrelationResult:
    x_label: str
    y_label: str
    r: float
    n: int
    p: float


@dataclass(frozen=True)
class PairwiseComparison:
    variant_a: str
    variant_b: str
    r_a: float
    r_b: float
    r_ab: float
    n: int
    t_stat: float
    p: float


# the variant universe of the paper's ordered comparison table, top to bottom
TABLE2_VARIANTS = tuple(
    MetricVariant(*spec)
    for spec in [
        ("COMET", "transl", "Sent"),
        ("COMET", "transl", "SingleSeq"),
        ("COMET", "transl+intp", "SingleSeq"),
        ("BertScore", "transl", "Sent"),
        ("BertScore", "transl+intp", "Sent+mWER"),
        ("COMET", "intp", "SingleSeq"),
        ("BertScore", "transl+intp", "SingleSeq"),
        ("BertScore", "transl", "SingleSeq"),
        ("chrF", "transl+intp", "Sent+mWER"),
        ("BLEU", "transl+intp", "SingleSeq"),
        ("chrF", "transl", "Sent"),
        ("chrF", "transl+intp", "SingleSeq"),
        ("chrF", "transl", "SingleSeq"),
        ("BLEU", "transl", "SingleSeq"),
        ("COMET", "intp", "mWER"),
        ("BertScore", "intp", "SingleSeq"),
        ("BLEU", "transl+intp", "Sent+mWER"),
        ("chrF", "intp", "SingleSeq"),
        ("BLEU", "transl", "Sent"),
        ("chrF", "intp", "mWER"),
        ("BLEU", "intp", "SingleSeq"),
        ("BertScore", "intp", "mWER"),
        ("BLEU", "intp", "mWER"),
    ]
)

# the four sentence-aligned translation-reference variants of the headline table
TABLE1_VARIANTS = tuple(
    MetricVariant(metric, "transl", "Sent") for metric in METRICS
)


@dataclass(frozen=True)
class AnalysisConfig:
    subsets: tuple = ("both", "Common", "NonNative")
    aggregations: tuple = ("averaged", "all_ratings")
    variants: tuple = TABLE2_VARIANTS
    cr_definition: str = "CR"
    thresholds: tuple = (0.05, 0.1)

    def __post_init__(self):
        for s in self.subsets:
            if s not in ("both",) + SUBSETS:
                raise ValidationError(f"unknown subset {s!r}")
        for a in self.aggregations:
            if a not in ("averaged", "all_ratings"):
                raise ValidationError(f"unknown aggregation {a!r}")
        if self.cr_definition not in ("CR", "CRi"):
            raise ValidationError(f"cr_definition must be CR or CRi")
        if not self.variants:
            raise ValidationError("at least one variant required")
        for t in self.thresholds:
            if not 0.0 < t < 1.0:
                raise ValidationError(f"threshold {t} outside (0,1)")
