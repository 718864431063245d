"""Per-technique span counts/lengths and tweet-level aggregates.

Standard deviations are population (ddof=0) throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple

from .codec import tokenize
from .core import Technique, TweetAnnotation

STD_CONVENTION = "population"


@dataclass(frozen=True)
class LengthStats:
    count: int
    mean: Optional[float]
    std: Optional[float]


@dataclass(frozen=True)
class DatasetStats:
    per_technique: Dict[Technique, LengthStats]
    no_technique_count: int
    n_examples: int
    n_spans: int
    tweet_len_tokens: Tuple[Optional[float], Optional[float]]
    tweet_len_chars: Tuple[Optional[float], Optional[float]]

    def to_dict(self) -> dict:
        return {
            "std_convention": STD_CONVENTION,
            "n_examples": self.n_examples,
            "n_spans": self.n_spans,
            "no_technique_count": self.no_technique_count,
            "tweet_len_tokens": {"mean": self.tweet_len_tokens[0], "std": self.tweet_len_tokens[1]},
            "tweet_len_chars": {"mean": self.tweet_len_chars[0], "std": self.tweet_len_chars[1]},
            "per_technique": {
                t.canonical_name: {"count": s.count, "mean_len": s.mean, "std_len": s.std}
                for t, s in sorted(self.per_technique.items())
            },
        }


def _mean_std(values) -> Tuple[Optional[float], Optional[float]]:
    if not values:
        return None, None
    mean = math.fsum(values) / len(values)
    var = math.fsum((v - mean) ** 2 for v in values) / len(values)
    return mean, math.sqrt(var)


def stats(dataset: Sequence[TweetAnnotation], tokenizer=tokenize) -> DatasetStats:
    lengths: Dict[Technique, list] = {t: [] for t in Technique}
    for ann in dataset:
        for s in ann.spans:
            lengths[s.technique].append(s.length)
    per = {t: LengthStats(len(v), *_mean_std(v)) for t, v in lengths.items()}
    return DatasetStats(
        per_technique=per,
        no_technique_count=sum(1 for a in dataset if not a.spans),
        n_examples=len(dataset),
        n_spans=sum(len(a.spans) for a in dataset),
        tweet_len_tokens=_mean_std([len(tokenizer(a.text)) for a in dataset]),
        tweet_len_chars=_mean_std([len(a.text) for a in dataset]),
    )


def _pm(mean, std) -> str:
    if mean is None:
        return "N/A"
    return "%.1f ± %.1f" % (mean, std)


def format_stats(st: DatasetStats) -> str:
    lines = ["%-48s %6s  %s" % ("technique", "count", "length (chars)")]
    for t, s in sorted(st.per_technique.items()):
        lines.append("%-48s %6d  %s" % (t.canonical_name, s.count, _pm(s.mean, s.std)))
    lines.append("%-48s %6d  %s" % ("no technique", st.no_technique_count, "N/A"))
    lines.append("")
    lines.append("#examples         %d" % st.n_examples)
    lines.append("#spans            %d" % st.n_spans)
    lines.append("tweet len (t)     %s" % _pm(*st.tweet_len_tokens))
    lines.append("tweet len (c)     %s" % _pm(*st.tweet_len_chars))
    lines.append("(std-dev: %s)" % STD_CONVENTION)
    return "\n".join(lines)
