import random

import pytest

from propspan.core import Span, Technique, TweetAnnotation
from propspan.stats import format_stats, stats
from propspan.synthetic import make_tagging_dataset

LL = Technique.LOADED_LANGUAGE


def test_two_spans_population_std():
    text = "x" * 20
    st = stats([TweetAnnotation("1", text, (Span(0, 4, LL), Span(10, 16, LL)))])
    s = st.per_technique[LL]
    assert (s.count, s.mean, s.std) == (2, 5.0, 1.0)
    assert st.per_technique[Technique.BANDWAGON].mean is None


def test_empty_dataset():
    st = stats([])
    assert st.n_examples == st.n_spans == st.no_technique_count == 0
    assert all(s.count == 0 and s.mean is None and s.std is None for s in st.per_technique.values())
    assert st.tweet_len_chars == (None, None)
    assert "N/A" in format_stats(st)


def test_aggregates():
    ds = make_tagging_dataset(20, 1)
    st = stats(ds)
    assert st.n_spans == sum(s.count for s in st.per_technique.values())
    assert st.no_technique_count == sum(1 for a in ds if not a.spans)
    assert st.n_examples == 20
    assert st.tweet_len_chars[0] == pytest.approx(sum(len(a.text) for a in ds) / 20)


def test_permutation_invariant():
    ds = make_tagging_dataset(20, 2)
    shuffled = ds[:]
    random.Random(0).shuffle(shuffled)
    a, b = stats(ds), stats(shuffled)
    assert a.to_dict() == b.to_dict()


def test_render_labels_convention():
    text = format_stats(stats(make_tagging_dataset(5, 0)))
    assert "population" in text and "Loaded language" in text and "no technique" in text
