"""Project span annotations onto translations through word alignments.

Alignments come in Pharaoh format (``"0-0 1-2 ..."``, source-target token
indices) over the tokens produced by :func:`propspan.codec.tokenize`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import FrozenSet, List, Optional, Sequence, Tuple

from .codec import TokenSpan, tokenize
from .core import Span, TweetAnnotation, overlap
from .errors import IndexOutOfRange, MalformedPair, PropspanError

AlignmentLinks = FrozenSet[Tuple[int, int]]

_PAIR = re.compile(r"^(\d+)-(\d+)$")


@dataclass(frozen=True)
class ParallelExample:
    source: TweetAnnotation
    target_text: str
    links: AlignmentLinks


def parse_alignment(line: str) -> AlignmentLinks:
    links = set()
    for tok in line.split():
        m = _PAIR.match(tok)
        if m is None:
            raise MalformedPair(tok)
        links.add((int(m.group(1)), int(m.group(2))))
    return frozenset(links)


def format_alignment(links: AlignmentLinks) -> str:
    return " ".join("%d-%d" % pair for pair in sorted(links))


def _check_links(links, n_src, n_tgt):
    for i, j in links:
        if not (0 <= i < n_src and 0 <= j < n_tgt):
            raise IndexOutOfRange(
                "link %d-%d outside %d source / %d target tokens" % (i, j, n_src, n_tgt)
            )


def project_span(
    span: Span,
    src_tokens: Sequence[TokenSpan],
    tgt_tokens: Sequence[TokenSpan],
    links: AlignmentLinks,
    contiguous: bool = True,
) -> Optional[Span] | List[Span]:
    """Map one source span to the target side.

    Source tokens touching the span (any character overlap) are followed
    through the links.  With ``contiguous=True`` the result is the closure
    from the first to the last aligned target token, or ``None`` when no
    link leaves the span.  With ``contiguous=False`` a list with one span
    per run of adjacent aligned target tokens is returned (empty if
    unaligned).
    """
    _check_links(links, len(src_tokens), len(tgt_tokens))
    inside = {i for i, tok in enumerate(src_tokens) if overlap(tok, span) > 0}
    targets = sorted({j for i, j in links if i in inside})
    if not contiguous:
        runs = []
        for j in targets:
            if runs and runs[-1][1] == j - 1:
                runs[-1][1] = j
            else:
                runs.append([j, j])
        return [Span(tgt_tokens[a].start, tgt_tokens[b].end, span.technique) for a, b in runs]
    if not targets:
        return None
    return Span(tgt_tokens[targets[0]].start, tgt_tokens[targets[-1]].end, span.technique)


@dataclass
class ProjectionReport:
    annotations: List[TweetAnnotation]
    spans_in: int = 0
    spans_out: int = 0
    spans_dropped: int = 0
    errors: List[Tuple[str, str]] = field(default_factory=list)  # (example id, message)

    def to_dict(self) -> dict:
        return {
            "examples": len(self.annotations),
            "spans_in": self.spans_in,
            "spans_out": self.spans_out,
            "spans_dropped": self.spans_dropped,
            "errors": [{"id": i, "error": e} for i, e in self.errors],
        }


def project_dataset(
    examples: Sequence[ParallelExample],
    id_suffix: str = "",
    contiguous: bool = True,
    tokenizer=tokenize,
) -> ProjectionReport:
    """Project every example; failures are recorded and their spans counted as dropped.

    With ``contiguous=False`` one source span may yield several target spans,
    so ``spans_out`` counts source spans that produced at least one.
    """
    report = ProjectionReport([])
    for ex in examples:
        src = ex.source
        report.spans_in += len(src.spans)
        out_spans: List[Span] = []
        kept = 0
        try:
            src_tokens = tokenizer(src.text)
            tgt_tokens = tokenizer(ex.target_text)
            for span in src.spans:
                res = project_span(span, src_tokens, tgt_tokens, ex.links, contiguous)
                if contiguous:
                    if res is not None:
                        out_spans.append(res)
                        kept += 1
                elif res:
                    out_spans.extend(res)
                    kept += 1
        except PropspanError as exc:
            report.errors.append((src.id, str(exc)))
            out_spans, kept = [], 0
        report.spans_out += kept
        report.spans_dropped += len(src.spans) - kept
        report.annotations.append(TweetAnnotation(src.id + id_suffix, ex.target_text, tuple(out_spans)))
    return report


def filter_propaganda(dataset: Sequence[TweetAnnotation]) -> List[TweetAnnotation]:
    """Keep only annotations with at least one span, in order."""
    return [a for a in dataset if a.spans]
