"""Propaganda-technique span annotation toolkit."""

__version__ = "0.1.0"

from ._kernels import BACKEND
from .codec import TokenSpan, labels_of, spans_to_tags, tags_to_spans, tokenize
from .core import (
    TECHNIQUE_NAMES,
    LabelSet,
    Span,
    Technique,
    TweetAnnotation,
    overlap,
    technique_from_name,
    validate_annotation,
)
from .scorer import ScoreReport, pair_credit, score_task1, score_task2

__all__ = [
    "BACKEND",
    "LabelSet",
    "ScoreReport",
    "Span",
    "TECHNIQUE_NAMES",
    "Technique",
    "TokenSpan",
    "TweetAnnotation",
    "labels_of",
    "overlap",
    "pair_credit",
    "score_task1",
    "score_task2",
    "spans_to_tags",
    "tags_to_spans",
    "technique_from_name",
    "tokenize",
    "validate_annotation",
]
