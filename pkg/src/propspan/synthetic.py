"""Deterministic toy corpora with unambiguous lexical cues.

Each technique used here is signalled by its own cue phrases; every other
word is neutral filler.  Good for sanity-checking training, projection and
the CLI pipelines without the real shared-task data.
"""

from __future__ import annotations

import random
from typing import List

from .codec import tokenize
from .core import Span, Technique, TweetAnnotation
from .projection import ParallelExample

FILLER = (
    "the minister said today that our city will open a new road near river park after "
    "long talks with local people and workers on monday morning while news from radio "
    "reports weather traffic market prices school football team won match again"
).split()

CUES = {
    Technique.LOADED_LANGUAGE: ("disgraceful", "outrageous", "shameful"),
    Technique.NAME_CALLING: ("traitors", "clowns", "thugs"),
    Technique.SMEARS: ("corrupt liars", "criminal gang"),
    Technique.DOUBT: ("allegedly", "supposedly"),
    Technique.SLOGANS: ("never surrender", "victory forever"),
}


def make_tweet(rng: random.Random, idx: int, propaganda: bool, max_cues: int = 2) -> TweetAnnotation:
    words = [rng.choice(FILLER) for _ in range(rng.randint(5, 12))]
    cues = []
    if propaganda:
        techniques = sorted(CUES)
        for _ in range(rng.randint(1, max_cues)):
            tech = rng.choice(techniques)
            cues.append((rng.randint(0, len(words)), tech, rng.choice(CUES[tech])))
    # insert from the back so earlier positions stay valid
    for pos, tech, phrase in sorted(cues, key=lambda c: c[0], reverse=True):
        words.insert(pos, (tech, phrase))
    text_parts, spans, cursor = [], [], 0
    for w in words:
        if text_parts:
            cursor += 1
        if isinstance(w, tuple):
            tech, phrase = w
            spans.append(Span(cursor, cursor + len(phrase), tech))
            w = phrase
        text_parts.append(w)
        cursor += len(w)
    return TweetAnnotation(str(idx), " ".join(text_parts), tuple(spans))


def make_tagging_dataset(n: int = 32, seed: int = 0, no_propaganda_rate: float = 0.25) -> List[TweetAnnotation]:
    rng = random.Random(seed)
    return [make_tweet(rng, i, rng.random() >= no_propaganda_rate) for i in range(n)]


def _translate_word(word: str) -> str:
    # a stand-in "target language": reversed letters with a suffix
    return word[::-1] + "o"


def make_parallel_corpus(
    n: int = 32,
    seed: int = 0,
    no_propaganda_rate: float = 0.6,
    identity: bool = False,
    reorder: bool = True,
) -> List[ParallelExample]:
    """Source tweets paired with target text and gold word alignments.

    With ``identity=True`` the target equals the source and links are the
    identity; otherwise each word is "translated" and adjacent word pairs
    may swap places.
    """
    rng = random.Random(seed)
    out = []
    for i in range(n):
        src = make_tweet(rng, i, rng.random() >= no_propaganda_rate)
        n_src = len(tokenize(src.text))
        if identity:
            out.append(ParallelExample(src, src.text, frozenset((k, k) for k in range(n_src))))
            continue
        words = src.text.split(" ")
        order = list(range(len(words)))
        if reorder:
            k = 0
            while k + 1 < len(order):
                if rng.random() < 0.3:
                    order[k], order[k + 1] = order[k + 1], order[k]
                    k += 2
                else:
                    k += 1
        target = " ".join(_translate_word(words[k]) for k in order)
        links = frozenset((src_pos, tgt_pos) for tgt_pos, src_pos in enumerate(order))
        out.append(ParallelExample(src, target, links))
    return out
