"""Technique registry, span data model and span algebra.

Offsets are 0-based Python ``str`` indices (Unicode code points) and every
interval is end-exclusive, so ``length == end - start``.
"""

from __future__ import annotations

import difflib
import enum
import unicodedata
from dataclasses import dataclass, field
from typing import FrozenSet, Optional, Tuple

from .errors import UnknownTechnique

TECHNIQUE_NAMES = (
    "Appeal to authority",
    "Appeal to fear/prejudice",
    "Black-and-white Fallacy/Dictatorship",
    "Causal oversimplification",
    "Doubt",
    "Exaggeration/Minimisation",
    "Flag-waving",
    "Glittering generalities (virtue)",
    "Loaded language",
    "Misrepresentation of someone's position",
    "Name calling/Labeling",
    "Obfuscation, intentional vagueness, confusion",
    "Presenting irrelevant data (red herring)",
    "Reductio ad hitlerum",
    "Repetition",
    "Slogans",
    "Smears",
    "Thought-terminating cliché",
    "Whataboutism",
    "Bandwagon",
)

N_TECHNIQUES = len(TECHNIQUE_NAMES)


class Technique(enum.Enum):
    """The 20 propaganda techniques, in fixed registry order."""

    APPEAL_TO_AUTHORITY = 0
    APPEAL_TO_FEAR_PREJUDICE = 1
    BLACK_AND_WHITE_FALLACY = 2
    CAUSAL_OVERSIMPLIFICATION = 3
    DOUBT = 4
    EXAGGERATION_MINIMISATION = 5
    FLAG_WAVING = 6
    GLITTERING_GENERALITIES = 7
    LOADED_LANGUAGE = 8
    MISREPRESENTATION = 9
    NAME_CALLING = 10
    OBFUSCATION = 11
    RED_HERRING = 12
    REDUCTIO_AD_HITLERUM = 13
    REPETITION = 14
    SLOGANS = 15
    SMEARS = 16
    THOUGHT_TERMINATING_CLICHE = 17
    WHATABOUTISM = 18
    BANDWAGON = 19

    @property
    def index(self) -> int:
        return self.value

    @property
    def canonical_name(self) -> str:
        return TECHNIQUE_NAMES[self.value]

    def __str__(self) -> str:
        return self.canonical_name

    def __lt__(self, other):
        if not isinstance(other, Technique):
            return NotImplemented
        return self.value < other.value

    @classmethod
    def from_index(cls, index: int) -> "Technique":
        return _BY_INDEX[index]


_BY_INDEX = tuple(Technique)
_BY_NAME = {t.canonical_name: t for t in Technique}

LabelSet = FrozenSet[Technique]


def technique_from_name(name: str) -> Technique:
    """Look up a technique by canonical name (NFC-normalized, whitespace-trimmed).

    Raises UnknownTechnique, carrying the closest canonical names, when
    nothing matches exactly.
    """
    key = unicodedata.normalize("NFC", name).strip()
    try:
        return _BY_NAME[key]
    except KeyError:
        pass
    close = difflib.get_close_matches(key, TECHNIQUE_NAMES, n=3, cutoff=0.4)
    if not close:
        lowered = {n.lower(): n for n in TECHNIQUE_NAMES}
        close = [lowered[m] for m in difflib.get_close_matches(key.lower(), lowered, n=3, cutoff=0.0)]
    raise UnknownTechnique(name, close)


@dataclass(frozen=True, order=True)
class Span:
    start: int
    end: int
    technique: Technique

    @property
    def length(self) -> int:
        return self.end - self.start


@dataclass(frozen=True)
class TweetAnnotation:
    """One tweet with its gold or predicted spans.

    ``labels`` is only set for Subtask-1 style records that carry an
    explicit label list; otherwise labels are derived from ``spans``.
    """

    id: str
    text: str
    spans: Tuple[Span, ...] = ()
    labels: Optional[LabelSet] = field(default=None)

    def __post_init__(self):
        if not isinstance(self.spans, tuple):
            object.__setattr__(self, "spans", tuple(self.spans))
        if self.labels is not None and not isinstance(self.labels, frozenset):
            object.__setattr__(self, "labels", frozenset(self.labels))

    def with_spans(self, spans) -> "TweetAnnotation":
        return TweetAnnotation(self.id, self.text, tuple(spans), self.labels)


def _bounds(x):
    if isinstance(x, tuple):
        return x[0], x[1]
    return x.start, x.end


def overlap(a, b) -> int:
    """Number of characters shared by two end-exclusive intervals.

    Accepts ``(start, end)`` tuples or anything with ``start``/``end``.

    >>> overlap((0, 5), (3, 8))
    2
    >>> overlap((0, 5), (5, 9))
    0
    """
    a0, a1 = _bounds(a)
    b0, b1 = _bounds(b)
    return max(0, min(a1, b1) - max(a0, b0))


def validate_annotation(ann: TweetAnnotation) -> list:
    """Return a description of every malformed span (empty list means valid).

    Overlapping spans are allowed.
    """
    n = len(ann.text)
    violations = []
    for i, s in enumerate(ann.spans):
        where = "span %d [%d,%d)" % (i, s.start, s.end)
        if s.start < 0 or s.end < 0:
            violations.append(where + ": negative offset")
        if s.start >= s.end:
            violations.append(where + ": start must be < end")
        if s.end > n:
            violations.append(where + ": end exceeds text length %d" % n)
        if not isinstance(s.technique, Technique):
            violations.append(where + ": technique %r is not a Technique" % (s.technique,))
    return violations
