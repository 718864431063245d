import array
import random

import numpy as np
import pytest

from propspan import _kernels, _pure

BACKENDS = [_pure]
try:
    from propspan import _speedups

    BACKENDS.append(_speedups)
except ImportError:  # pragma: no cover - extension not built
    _speedups = None


@pytest.fixture(params=BACKENDS, ids=lambda m: m.__name__.rsplit(".", 1)[-1])
def backend(request):
    return request.param


def test_dispatch_reports_backend():
    assert _kernels.BACKEND in ("cython", "python")
    assert _kernels.HAVE_EXTENSION == (_kernels.BACKEND == "cython")


def test_trigram_padding(backend):
    # "<a>" is the only trigram of a one-character token
    assert len(backend.trigram_buckets("a", 64)) == 1
    assert len(backend.trigram_buckets("abcd", 64)) == 4
    assert all(0 <= b < 64 for b in backend.trigram_buckets("مرحبا", 64))


def test_trigram_fnv_reference(backend):
    h = 2166136261
    for ch in "<ab":
        h = ((h ^ ord(ch)) * 16777619) % 2**32
    assert backend.trigram_buckets("ab", 1 << 20)[0] == h % (1 << 20)


@pytest.mark.skipif(_speedups is None, reason="extension not built")
def test_backends_agree():
    rng = random.Random(3)
    for _ in range(200):
        tok = "".join(rng.choice("abcé漢ع!") for _ in range(rng.randint(1, 12)))
        assert _pure.trigram_buckets(tok, 4096) == _speedups.trigram_buckets(tok, 4096)
    for _ in range(200):
        cols = []
        for side in range(2):
            n = rng.randint(0, 12)
            rows = sorted((rng.randint(0, 4), rng.randint(0, 40), rng.randint(1, 20), rng.randint(0, 3)) for _ in range(n))
            cols += [[r[0] for r in rows], [r[1] for r in rows], [r[1] + r[2] for r in rows], [r[3] for r in rows]]
        as_arrays = [array.array("q", c) for c in cols]
        as_numpy = [np.asarray(c, dtype=np.int64) for c in cols]
        ref = _pure.credit_sums(*cols, 20)
        assert _speedups.credit_sums(*as_arrays, 20) == ref
        assert _speedups.credit_sums(*as_numpy, 20) == ref
        assert _speedups.credit_sums(*cols, 20) == ref


def test_credit_sums_small(backend):
    # pred (0,5) and (3,8) of class 1 in doc 0; gold (0,10) class 1 in doc 0, (0,4) class 2 in doc 1
    prec, rec = backend.credit_sums([0, 0], [0, 3], [5, 8], [1, 1], [0, 1], [0, 0], [10, 4], [1, 2], 20)
    assert prec[1] == 2.0
    assert rec[1] == pytest.approx(1.0)
    assert sum(prec) == 2.0 and rec[2] == 0.0


def test_credit_sums_no_cross_document(backend):
    prec, rec = backend.credit_sums([1], [0], [5], [0], [0, 2], [0, 0], [5, 5], [0, 0], 20)
    assert sum(prec) == 0.0 and sum(rec) == 0.0
