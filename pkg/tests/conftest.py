import os

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from propspan.core import Span, Technique, TweetAnnotation

settings.register_profile("default", max_examples=200, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

techniques = st.sampled_from(list(Technique))


@st.composite
def intervals(draw, max_end=60):
    start = draw(st.integers(0, max_end - 1))
    end = draw(st.integers(start + 1, max_end))
    return start, end


@st.composite
def annotations(draw, max_len=60, max_spans=6):
    text = draw(st.text(alphabet="ab c.", min_size=1, max_size=max_len))
    n = len(text)
    spans = []
    for _ in range(draw(st.integers(0, max_spans))):
        s = draw(st.integers(0, n - 1))
        e = draw(st.integers(s + 1, n))
        spans.append(Span(s, e, draw(techniques)))
    return TweetAnnotation(draw(st.text(min_size=1, max_size=5)), text, tuple(spans))


# one pass/fail line per acceptance criterion, printed after the run
_ACCEPTANCE = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        outcome = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}[report.outcome]
        _ACCEPTANCE[report.nodeid.split("::")[-1]] = outcome


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _ACCEPTANCE.items():
        terminalreporter.write_line("%-4s %s" % (outcome, name))


@pytest.fixture
def LL():
    return Technique.LOADED_LANGUAGE
