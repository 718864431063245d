"""Tokenization with exact character offsets, and span <-> per-token tag conversion.

A tag sequence holds one entry per token: a :class:`Technique`, or ``None``
for the outside class (``O``).  Each token gets a single label, so
overlapping spans are collapsed by maximal character overlap.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass
from typing import List, Optional, Sequence

from .core import LabelSet, Span, Technique, TweetAnnotation, overlap
from .errors import LengthMismatch, TokenMismatch

Tag = Optional[Technique]
O = None


@dataclass(frozen=True)
class TokenSpan:
    surface: str
    start: int
    end: int


def _is_punct(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def tokenize(text: str) -> List[TokenSpan]:
    """Split on whitespace, then peel leading/trailing punctuation into one-char tokens.

    >>> [(t.surface, t.start, t.end) for t in tokenize("hi!")]
    [('hi', 0, 2), ('!', 2, 3)]
    """
    tokens = []
    n = len(text)
    i = 0
    while i < n:
        if text[i].isspace():
            i += 1
            continue
        j = i
        while j < n and not text[j].isspace():
            j += 1
        # word spans [i, j)
        lo, hi = i, j
        while lo < hi and _is_punct(text[lo]):
            lo += 1
        if lo == hi:
            for k in range(i, j):
                tokens.append(TokenSpan(text[k], k, k + 1))
        else:
            while _is_punct(text[hi - 1]):
                hi -= 1
            for k in range(i, lo):
                tokens.append(TokenSpan(text[k], k, k + 1))
            tokens.append(TokenSpan(text[lo:hi], lo, hi))
            for k in range(hi, j):
                tokens.append(TokenSpan(text[k], k, k + 1))
        i = j
    return tokens


def spans_to_tags(ann: TweetAnnotation, tokens: Sequence[TokenSpan]) -> List[Tag]:
    """Assign each token the technique of the span it overlaps most.

    Ties go to the span with the smaller start, then the smaller technique
    index.  Tokens touching no span get ``O`` (``None``).
    """
    n = len(ann.text)
    tags: List[Tag] = []
    for tok in tokens:
        if tok.start < 0 or tok.end > n or tok.start >= tok.end:
            raise TokenMismatch("token [%d,%d) outside text of length %d" % (tok.start, tok.end, n))
        best = None
        best_key = None
        for span in ann.spans:
            ov = overlap(tok, span)
            if ov <= 0:
                continue
            key = (-ov, span.start, span.technique.index)
            if best_key is None or key < best_key:
                best, best_key = span.technique, key
        tags.append(best)
    return tags


def tags_to_spans(tokens: Sequence[TokenSpan], tags: Sequence[Tag]) -> List[Span]:
    """Merge maximal runs of equal non-O tags into spans (gaps between tokens included)."""
    if len(tokens) != len(tags):
        raise LengthMismatch("%d tokens but %d tags" % (len(tokens), len(tags)))
    spans = []
    run_label = None
    run_start = run_end = 0
    for tok, tag in zip(tokens, tags):
        if tag is not None and tag == run_label:
            run_end = tok.end
            continue
        if run_label is not None:
            spans.append(Span(run_start, run_end, run_label))
        run_label = tag
        run_start, run_end = tok.start, tok.end
    if run_label is not None:
        spans.append(Span(run_start, run_end, run_label))
    return spans


def labels_of(ann: TweetAnnotation) -> LabelSet:
    return frozenset(s.technique for s in ann.spans)
