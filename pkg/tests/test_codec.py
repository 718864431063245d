import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from propspan.codec import TokenSpan, labels_of, spans_to_tags, tags_to_spans, tokenize
from propspan.core import Span, Technique, TweetAnnotation
from propspan.errors import LengthMismatch, TokenMismatch

LL = Technique.LOADED_LANGUAGE
SM = Technique.SMEARS
DOUBT = Technique.DOUBT


def triples(tokens):
    return [(t.surface, t.start, t.end) for t in tokens]


@pytest.mark.parametrize("text,expected", [
    ("abc def", [("abc", 0, 3), ("def", 4, 7)]),
    ("hi!", [("hi", 0, 2), ("!", 2, 3)]),
    ("", []),
    ("  \t\n", []),
    ("(yes), no", [("(", 0, 1), ("yes", 1, 4), (")", 4, 5), (",", 5, 6), ("no", 7, 9)]),
    ("don't", [("don't", 0, 5)]),
    ("...", [(".", 0, 1), (".", 1, 2), (".", 2, 3)]),
    ("مرحبا، عالم", [("مرحبا", 0, 5), ("،", 5, 6), ("عالم", 7, 11)]),
])
def test_tokenize_examples(text, expected):
    assert triples(tokenize(text)) == expected


@given(st.text(max_size=80))
def test_tokenize_offsets_exact(text):
    tokens = tokenize(text)
    prev_end = 0
    rebuilt = []
    for tok in tokens:
        assert text[tok.start:tok.end] == tok.surface
        assert tok.start >= prev_end and tok.end > tok.start
        gap = text[prev_end:tok.start]
        assert gap.strip() == ""
        rebuilt.append(gap + tok.surface)
        prev_end = tok.end
    assert text[prev_end:].strip() == ""
    rebuilt.append(text[prev_end:])
    assert "".join(rebuilt) == text


def test_spans_to_tags_examples():
    toks = tokenize("abc def")
    ann = TweetAnnotation("1", "abc def", (Span(0, 3, LL),))
    assert spans_to_tags(ann, toks) == [LL, None]
    assert spans_to_tags(TweetAnnotation("1", "a b c", ()), tokenize("a b c")) == [None, None, None]


def test_spans_to_tags_tie_break():
    # overlaps with token [3,5): Doubt 2, Smears 2 -> earlier start wins
    text = "0123456789"
    ann = TweetAnnotation("1", text, (Span(3, 8, SM), Span(0, 5, DOUBT)))
    assert spans_to_tags(ann, [TokenSpan("34", 3, 5)]) == [DOUBT]
    # same extent: lower technique index wins
    ann = TweetAnnotation("1", text, (Span(0, 5, SM), Span(0, 5, DOUBT)))
    assert spans_to_tags(ann, [TokenSpan("01234", 0, 5)]) == [DOUBT]
    # larger overlap beats earlier start
    ann = TweetAnnotation("1", text, (Span(0, 4, DOUBT), Span(3, 9, SM)))
    assert spans_to_tags(ann, [TokenSpan("3456", 3, 7)]) == [SM]


def test_spans_to_tags_out_of_bounds():
    with pytest.raises(TokenMismatch):
        spans_to_tags(TweetAnnotation("1", "abc", ()), [TokenSpan("abcd", 0, 4)])


def test_tags_to_spans_examples():
    two = [TokenSpan("abc", 0, 3), TokenSpan("def", 4, 7)]
    three = two + [TokenSpan("ghi", 8, 11)]
    assert tags_to_spans(two, [LL, LL]) == [Span(0, 7, LL)]
    assert tags_to_spans(three, [LL, None, LL]) == [Span(0, 3, LL), Span(8, 11, LL)]
    assert tags_to_spans(two, [LL, SM]) == [Span(0, 3, LL), Span(4, 7, SM)]
    assert tags_to_spans([], []) == []
    with pytest.raises(LengthMismatch):
        tags_to_spans(two, [LL])


def test_labels_of():
    text = "0123456789"
    assert labels_of(TweetAnnotation("1", text, (Span(0, 3, LL), Span(5, 9, LL)))) == {LL}
    assert labels_of(TweetAnnotation("1", text, ())) == frozenset()
    assert labels_of(TweetAnnotation("1", text, (Span(0, 3, LL), Span(5, 9, SM)))) == {LL, SM}


def random_aligned_annotation(rng: random.Random):
    """Random text plus non-overlapping, token-aligned spans.

    Neighbouring spans either differ in technique or are separated by an
    untagged token, so decoding cannot merge them.
    """
    words = ["".join(rng.choice("abcxyz") for _ in range(rng.randint(1, 6))) for _ in range(rng.randint(1, 15))]
    punct = [rng.choice(["", "", "!", ","]) for _ in words]
    text = " ".join(w + p for w, p in zip(words, punct))
    tokens = tokenize(text)
    spans = []
    i = 0
    last_label = None
    while i < len(tokens):
        if rng.random() < 0.4:
            last_label = None
            i += 1
            continue
        j = min(len(tokens), i + rng.randint(1, 4))
        label = rng.choice([t for t in (LL, SM, DOUBT) if t != last_label])
        spans.append(Span(tokens[i].start, tokens[j - 1].end, label))
        last_label = label
        i = j
    return TweetAnnotation("r", text, tuple(spans)), tokens


def test_round_trip_token_aligned():
    rng = random.Random(7)
    for _ in range(300):
        ann, tokens = random_aligned_annotation(rng)
        tags = spans_to_tags(ann, tokens)
        assert len(tags) == len(tokens)
        assert tags_to_spans(tokens, tags) == list(ann.spans)
