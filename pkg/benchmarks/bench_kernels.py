"""Compare the compiled and pure-Python kernels.

    python benchmarks/bench_kernels.py [--tweets 5000] [--repeat 5]
"""

import argparse
import array
import random
import timeit

from propspan import _kernels, _pure, scorer
from propspan.codec import tokenize
from propspan.synthetic import make_tagging_dataset

try:
    from propspan import _speedups
except ImportError:
    _speedups = None


def corpus_arrays(n_tweets, spans_per_tweet, seed=0):
    rng = random.Random(seed)
    sides = []
    for _ in range(2):
        cols = [array.array("q") for _ in range(4)]
        for d in range(n_tweets):
            for _ in range(rng.randint(0, spans_per_tweet)):
                s = rng.randrange(0, 250)
                for col, v in zip(cols, (d, s, s + rng.randint(1, 60), rng.randrange(20))):
                    col.append(v)
        sides.extend(cols)
    return sides


def bench(label, funcs, repeat):
    rows = []
    for name, fn in funcs:
        best = min(timeit.repeat(fn, number=1, repeat=repeat))
        rows.append((name, best))
    base = dict(rows)["python"]
    for name, t in rows:
        print("  %-28s %-8s %10.2f ms   x%.1f" % (label, name, t * 1e3, base / t))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--tweets", type=int, default=5000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    impls = [("python", _pure)]
    if _speedups is not None:
        impls.append(("cython", _speedups))
    else:
        print("compiled extension not available; only the pure-Python kernels are timed")
    print("active backend: %s" % _kernels.BACKEND)

    tokens = [t.surface for a in make_tagging_dataset(args.tweets, seed=1) for t in tokenize(a.text)]
    bench("trigram_buckets (%d tok)" % len(tokens),
          [(name, lambda m=m: [m.trigram_buckets(t, 4096) for t in tokens]) for name, m in impls], args.repeat)

    cols = corpus_arrays(args.tweets, 8)
    bench("credit_sums (%d tweets)" % args.tweets,
          [(name, lambda m=m: m.credit_sums(*cols, 20)) for name, m in impls], args.repeat)

    gold = make_tagging_dataset(args.tweets, seed=2)
    pred = make_tagging_dataset(args.tweets, seed=3)
    funcs = []
    for name, m in impls:
        def run(m=m):
            saved = _kernels.credit_sums
            _kernels.credit_sums = m.credit_sums
            try:
                scorer.score_task2(gold, pred)
            finally:
                _kernels.credit_sums = saved
        funcs.append((name, run))
    bench("score_task2 end-to-end", funcs, args.repeat)


if __name__ == "__main__":
    main()
